#include "moeope/selection/mcts.hpp"

#include "moeope/core/error.hpp"
#include "moeope/selection/greedy.hpp"

#include <json.hpp>

#include <cmath>
#include <map>
#include <ostream>

namespace moeope {

ErrorEstimate ModelPlanningProblem::errors(const StateVec& x, ActionId a, ModelKind kind) const {
  return ctx_.error_of(kind, x, a, use_true_errors_);
}

PlanningProblem::Outcome ModelPlanningProblem::advance(const StateVec& x, ActionId a,
                                                       ModelKind kind) const {
  const auto pred = ctx_.model(kind).predict(x, a);
  return Outcome{pred.next, ctx_.eval_policy->most_likely(pred.next), ctx_.terminal(pred.next)};
}

bool ModelPlanningProblem::usable(ActionId a, ModelKind kind) const {
  return ctx_.model(kind).supports(a);
}

namespace {

constexpr std::size_t slot(ModelKind k) { return k == ModelKind::parametric ? 0 : 1; }

ModelKind other(ModelKind k) {
  return k == ModelKind::parametric ? ModelKind::nonparametric : ModelKind::parametric;
}

class Search {
 public:
  Search(const PlanningProblem& problem, const MctsConfig& cfg) : problem_(problem), cfg_(cfg) {}

  MctsResult run(const StateVec& x, ActionId a) {
    PlanNode root;
    root.state = x;
    root.action = a;
    root.terminal = cfg_.horizon == 0;
    tree_.push_back(std::move(root));

    std::size_t rollouts = 0;
    if (!tree_[0].terminal) {
      for (std::size_t i = 0; i < cfg_.budget; ++i) {
        const int leaf = tree_policy();
        if (leaf == 0 && tree_[0].n_children == 0) break;
        backup(leaf, default_policy(leaf));
        ++rollouts;
      }
    }

    MctsResult result;
    result.rollouts = rollouts;
    const int best = rollouts == 0 ? -1 : best_child(0, [this](const PlanNode& c) { return c.Q_tilde; });
    if (best < 0) {
      const auto np = problem_.errors(x, a, ModelKind::nonparametric);
      const auto p = problem_.errors(x, a, ModelKind::parametric);
      result.model = greedy_rule(np, p, cfg_.alpha_r, problem_.usable(a, ModelKind::parametric),
                                 problem_.usable(a, ModelKind::nonparametric))
                         .model;
      result.fell_back_to_greedy = true;
    } else {
      result.model = *tree_[static_cast<std::size_t>(best)].model;
    }
    result.exploration = exploration();
    result.tree = std::move(tree_);
    return result;
  }

 private:
  double exploration() const {
    return max_eps_t_ > 0.0 ? max_eps_t_ / std::sqrt(2.0) : 1e-6;
  }

  void note(const ErrorEstimate& e) {
    if (e.supported && std::isfinite(e.eps_t)) max_eps_t_ = std::max(max_eps_t_, e.eps_t);
  }

  std::optional<GreedyDecision> decide(const StateVec& x, ActionId a) {
    const auto np = problem_.errors(x, a, ModelKind::nonparametric);
    const auto p = problem_.errors(x, a, ModelKind::parametric);
    note(np);
    note(p);
    try {
      return greedy_rule(np, p, cfg_.alpha_r, problem_.usable(a, ModelKind::parametric),
                         problem_.usable(a, ModelKind::nonparametric));
    } catch (const NoSupport&) {
      return std::nullopt;
    }
  }

  void prepare(int v) {
    auto& node = tree_[static_cast<std::size_t>(v)];
    if (node.untried_ready) return;
    node.untried_ready = true;
    if (node.terminal) return;
    const auto d = decide(node.state, node.action);
    if (!d) return;
    node_errors_[v] = {d->p, d->np};
    node.untried.push_back(d->model);
    const ModelKind alt = other(d->model);
    const bool alt_ok = alt == ModelKind::parametric
                            ? problem_.usable(node.action, alt)
                            : d->np.supported && problem_.usable(node.action, alt);
    if (alt_ok) node.untried.push_back(alt);
  }

  double increment(std::size_t tau, const ErrorEstimate& e, double delta_next) const {
    const double mult = cfg_.delta_multiplier == DeltaMultiplier::L_r ? cfg_.bound.L_r : cfg_.bound.L_t;
    return std::pow(cfg_.bound.gamma, static_cast<double>(tau)) * e.eps_r +
           std::pow(cfg_.bound.gamma, static_cast<double>(tau + 1)) * mult * delta_next;
  }

  int expand(int v) {
    PlanNode child;
    {
      auto& node = tree_[static_cast<std::size_t>(v)];
      const ModelKind k = node.untried.front();
      node.untried.erase(node.untried.begin());
      const auto out = problem_.advance(node.state, node.action, k);
      child.err = node_errors_.at(v)[slot(k)];
      child.state = out.state;
      child.action = out.action;
      child.model = k;
      child.tau = node.tau + 1;
      child.delta = rollforward_state_error(node.delta, cfg_.bound, child.err.eps_t);
      child.delta_g = node.delta_g + increment(node.tau, child.err, child.delta);
      child.terminal = out.terminal || child.tau >= cfg_.horizon;
      child.parent = v;
    }
    const int id = static_cast<int>(tree_.size());
    tree_.push_back(std::move(child));
    auto& node = tree_[static_cast<std::size_t>(v)];
    node.children[node.n_children++] = id;
    return id;
  }

  template <typename Score>
  int best_child(int v, Score score) const {
    const auto& node = tree_[static_cast<std::size_t>(v)];
    int best = -1;
    double best_score = 0.0;
    for (std::size_t i = 0; i < node.n_children; ++i) {
      const int c = node.children[i];
      const auto& ch = tree_[static_cast<std::size_t>(c)];
      const double s = score(ch);
      const bool better =
          best < 0 || s > best_score ||
          (s == best_score && ch.model == ModelKind::nonparametric &&
           tree_[static_cast<std::size_t>(best)].model != ModelKind::nonparametric);
      if (better) {
        best = c;
        best_score = s;
      }
    }
    return best;
  }

  int tree_policy() {
    int v = 0;
    while (!tree_[static_cast<std::size_t>(v)].terminal) {
      prepare(v);
      const auto& node = tree_[static_cast<std::size_t>(v)];
      if (!node.untried.empty()) return expand(v);
      if (node.n_children == 0) return v;
      const double log_n = std::log(static_cast<double>(node.N));
      const double c_e = exploration();
      v = best_child(v, [&](const PlanNode& c) {
        const double n = static_cast<double>(c.N);
        return c.Q / n + c_e * std::sqrt(2.0 * log_n / n);
      });
    }
    return v;
  }

  double default_policy(int v) {
    const auto& node = tree_[static_cast<std::size_t>(v)];
    StateVec s = node.state;
    ActionId a = node.action;
    std::size_t tau = node.tau;
    double delta = node.delta;
    double delta_g = node.delta_g;
    bool terminal = node.terminal;
    while (!terminal && tau < cfg_.horizon) {
      const auto d = decide(s, a);
      if (!d) break;
      const auto& e = d->model == ModelKind::parametric ? d->p : d->np;
      auto out = problem_.advance(s, a, d->model);
      delta = rollforward_state_error(delta, cfg_.bound, e.eps_t);
      delta_g += increment(tau, e, delta);
      ++tau;
      s = std::move(out.state);
      a = out.action;
      terminal = out.terminal;
    }
    return -delta_g;
  }

  void backup(int v, double value) {
    while (v >= 0) {
      auto& node = tree_[static_cast<std::size_t>(v)];
      ++node.N;
      node.Q += value;
      node.Q_tilde = std::max(node.Q_tilde, value);
      v = node.parent;
    }
  }

  const PlanningProblem& problem_;
  const MctsConfig& cfg_;
  std::vector<PlanNode> tree_;
  std::map<int, std::array<ErrorEstimate, 2>> node_errors_;
  double max_eps_t_ = 0.0;
};

}  // namespace

MctsResult mcts_plan(const PlanningProblem& problem, const StateVec& x, ActionId a,
                     const MctsConfig& cfg) {
  if (cfg.budget < 1) throw ConfigError("selector.mcts_budget", "must be at least 1");
  return Search(problem, cfg).run(x, a);
}

ModelKind mcts_select(const SelectionContext& ctx, const SelectorConfig& cfg, const StateVec& x,
                      ActionId a, std::size_t remaining_horizon) {
  MctsConfig mc;
  mc.budget = cfg.mcts_budget;
  mc.horizon = cfg.horizon > 0 ? cfg.horizon : remaining_horizon;
  mc.alpha_r = cfg.alpha_r;
  mc.bound = ctx.bound;
  mc.delta_multiplier = cfg.delta_multiplier;
  const ModelPlanningProblem problem(ctx, cfg.use_true_errors);
  auto result = mcts_plan(problem, x, a, mc);
  if (ctx.trace) *ctx.trace << mcts_trace_line(result) << '\n';
  return result.model;
}

std::string mcts_trace_line(const MctsResult& result) {
  nlohmann::ordered_json j;
  const auto& root = result.tree.front();
  j["root_state"] = std::vector<double>(root.state.data(), root.state.data() + root.state.size());
  j["root_action"] = root.action.value;
  j["rollouts"] = result.rollouts;
  auto children = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < root.n_children; ++i) {
    const auto& c = result.tree[static_cast<std::size_t>(root.children[i])];
    nlohmann::ordered_json cj;
    cj["model"] = to_string(*c.model);
    cj["N"] = c.N;
    cj["Q"] = c.Q;
    cj["Q_tilde"] = c.Q_tilde;
    cj["delta_g"] = c.delta_g;
    children.push_back(cj);
  }
  j["children"] = children;
  j["chosen"] = to_string(result.model);
  j["fallback"] = result.fell_back_to_greedy;
  return j.dump();
}

}  // namespace moeope
