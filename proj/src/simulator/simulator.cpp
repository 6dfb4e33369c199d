#include "moeope/simulator/simulator.hpp"

#include "moeope/core/error.hpp"
#include "moeope/core/rng.hpp"
#include "moeope/selection/greedy.hpp"
#include "moeope/selection/mcts.hpp"

#include <json.hpp>

#include <cmath>

namespace moeope {

void SimConfig::validate() const {
  if (n_rollouts < 1) throw ConfigError("sim.n_rollouts", "must be at least 1");
  if (horizon < 1) throw ConfigError("sim.horizon", "must be at least 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("sim.gamma", "must lie in (0, 1]");
  selector.validate();
}

namespace {

ModelKind choose(const SelectionContext& ctx, const SimConfig& cfg, const StateVec& x, ActionId a,
                 std::size_t remaining) {
  switch (cfg.selector.mode) {
    case SelectorMode::parametric:
      return ModelKind::parametric;
    case SelectorMode::nonparametric:
      return ModelKind::nonparametric;
    case SelectorMode::greedy:
      return greedy_select(ctx, cfg.selector, x, a);
    case SelectorMode::mcts:
      return mcts_select(ctx, cfg.selector, x, a, remaining);
  }
  throw Error("unknown selector mode");
}

}  // namespace

RolloutRecord simulate_rollout(const SelectionContext& ctx, const SimConfig& cfg,
                               const StateVec& x0, Rng& rng) {
  RolloutRecord rec;
  rec.trajectory.start = x0;
  StateVec x = x0;
  double discount = 1.0;
  for (std::size_t t = 0; t < cfg.horizon; ++t) {
    if (ctx.terminal(x)) break;
    const ActionId a = ctx.eval_policy->sample(x, rng);
    const ModelKind kind = choose(ctx, cfg, x, a, cfg.horizon - t);
    const auto& model = ctx.model(kind);
    if (!model.supports(a)) {
      if (!cfg.stuck_reward) throw NoSupport(std::string("no support: ") + to_string(kind) +
                                             " model cannot predict action " +
                                             std::to_string(a.value));
      rec.stuck = true;
      for (std::size_t k = t; k < cfg.horizon; ++k) {
        rec.ret += discount * *cfg.stuck_reward;
        discount *= cfg.gamma;
      }
      break;
    }
    auto pred = model.predict(x, a);
    rec.ret += discount * pred.reward;
    discount *= cfg.gamma;
    rec.usage.add(kind);
    rec.choices.push_back(kind);
    Transition tr;
    tr.x = x;
    tr.a = a;
    tr.r = pred.reward;
    tr.x_next = pred.next;
    tr.t = static_cast<std::int64_t>(t);
    rec.trajectory.transitions.push_back(std::move(tr));
    x = std::move(pred.next);
    ++rec.steps;
  }
  rec.reached_goal = !rec.stuck && ctx.terminal(x);
  rec.trajectory.terminated = rec.reached_goal;
  return rec;
}

ValueEstimate simulate_value(const SelectionContext& ctx, const SimConfig& cfg) {
  cfg.validate();
  if (!ctx.eval_policy) throw Error("simulation needs an evaluation policy");
  const auto& starts = cfg.initial_states.empty() ? ctx.errors->data().initial_states()
                                                  : cfg.initial_states;
  if (starts.empty()) throw Error("simulation needs at least one initial state");

  ValueEstimate est;
  double sum = 0.0;
  for (std::size_t n = 0; n < cfg.n_rollouts; ++n) {
    const std::uint64_t seed = derive_seed(cfg.seed, n);
    Rng rng(seed);
    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, starts.size() - 1)(rng);
    auto rec = simulate_rollout(ctx, cfg, starts[pick], rng);
    rec.seed = seed;
    sum += rec.ret;
    est.per_rollout_returns.push_back(rec.ret);
    if (ctx.is_terminal && !rec.reached_goal) ++est.n_unreached_goal;
    est.model_usage.parametric += rec.usage.parametric;
    est.model_usage.nonparametric += rec.usage.nonparametric;
    if (est.usage_by_step.size() < rec.choices.size()) est.usage_by_step.resize(rec.choices.size());
    for (std::size_t t = 0; t < rec.choices.size(); ++t) est.usage_by_step[t].add(rec.choices[t]);
    est.rollouts.push_back(std::move(rec));
  }
  est.v_hat = sum / static_cast<double>(cfg.n_rollouts);
  return est;
}

double trajectory_error(const Trajectory& sim, const Trajectory& truth, const Metric& m) {
  const auto a = sim.states();
  const auto b = truth.states();
  if (a.empty() || b.empty()) throw Error("trajectory error needs nonempty trajectories");
  if (a.front().size() != b.front().size() || a.front() != b.front())
    throw Error("trajectory error needs trajectories with the same initial state");
  const std::size_t n = std::min(a.size(), b.size());
  double total = 0.0;
  for (std::size_t t = 0; t < n; ++t) total += m.distance(a[t], b[t]);
  return total;
}

double evaluate_policy_true(const Environment& env, const Policy& policy, std::size_t n,
                            std::size_t horizon, double gamma, std::uint64_t seed,
                            const std::vector<StateVec>& starts) {
  if (n == 0) throw Error("true evaluation needs at least one rollout");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i));
    const StateVec x0 = starts.empty() ? env.sample_initial(rng) : starts[i % starts.size()];
    sum += trajectory_return(rollout(env, policy, x0, horizon, rng), gamma);
  }
  return sum / static_cast<double>(n);
}

std::string rollout_json_line(const RolloutRecord& r) {
  nlohmann::ordered_json j;
  j["seed"] = r.seed;
  j["return"] = r.ret;
  j["steps"] = r.steps;
  j["reached_goal"] = r.reached_goal;
  j["stuck"] = r.stuck;
  j["parametric_steps"] = r.usage.parametric;
  j["nonparametric_steps"] = r.usage.nonparametric;
  return j.dump();
}

}  // namespace moeope
