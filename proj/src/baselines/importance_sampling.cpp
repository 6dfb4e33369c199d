#include "moeope/baselines/importance_sampling.hpp"

#include "moeope/core/error.hpp"

#include <cmath>

namespace moeope {

const char* to_string(ISVariant v) {
  switch (v) {
    case ISVariant::IS:
      return "IS";
    case ISVariant::WIS:
      return "WIS";
    case ISVariant::PDIS:
      return "PDIS";
    case ISVariant::CWPDIS:
      return "CWPDIS";
    case ISVariant::DR:
      return "DR";
    case ISVariant::WDR:
      return "WDR";
  }
  return "unknown";
}

ISVariant is_variant_from_string(const std::string& s) {
  for (auto v : {ISVariant::IS, ISVariant::WIS, ISVariant::PDIS, ISVariant::CWPDIS, ISVariant::DR,
                 ISVariant::WDR})
    if (s == to_string(v)) return v;
  throw ConfigError("estimators", "unknown importance sampling variant '" + s + "'");
}

std::size_t ISInput::horizon() const {
  std::size_t h = 0;
  for (const auto& t : trajectories) h = std::max(h, t.size());
  return h;
}

void ISInput::validate() const {
  if (trajectories.empty()) throw Error("importance sampling needs at least one trajectory");
  for (const auto& traj : trajectories)
    for (const auto& s : traj) {
      if (!(s.pb > 0.0)) throw CoverageViolation("coverage violation: behavior probability is 0");
      if (!(s.pe >= 0.0 && s.pe <= 1.0)) throw Error("evaluation probability outside [0, 1]");
    }
}

ISInput make_is_input(const Dataset& ds, const Policy& eval, double gamma) {
  ISInput in;
  in.gamma = gamma;
  for (const auto& traj : ds.trajectories()) {
    std::vector<ISStep> steps;
    for (const auto& tr : traj.transitions) {
      if (!tr.behavior_prob)
        throw CoverageViolation("coverage violation: transition has no logged behavior probability");
      steps.push_back(ISStep{tr.x, tr.a, tr.r, *tr.behavior_prob, eval.probability(tr.x, tr.a)});
    }
    in.trajectories.push_back(std::move(steps));
  }
  in.validate();
  return in;
}

ModelValueModel::ModelValueModel(ModelPtr model, PolicyPtr eval, double gamma,
                                 std::function<bool(const StateVec&)> is_terminal)
    : model_(std::move(model)), eval_(std::move(eval)), gamma_(gamma),
      is_terminal_(std::move(is_terminal)) {
  if (!model_ || !eval_) throw Error("value model needs a dynamics model and a policy");
}

double ModelValueModel::v(const StateVec& x, std::size_t remaining) const {
  if (remaining == 0 || (is_terminal_ && is_terminal_(x))) return 0.0;
  const auto p = eval_->probabilities(x);
  double total = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a)
    if (p[a] > 0.0) total += p[a] * q(x, ActionId(static_cast<std::uint32_t>(a)), remaining);
  return total;
}

double ModelValueModel::q(const StateVec& x, ActionId a, std::size_t remaining) const {
  if (remaining == 0 || (is_terminal_ && is_terminal_(x))) return 0.0;
  if (!model_->supports(a)) return 0.0;
  const auto pred = model_->predict(x, a);
  return pred.reward + gamma_ * v(pred.next, remaining - 1);
}

namespace {

/// rho[i][t] for t < H, padded with the final weight.
std::vector<std::vector<double>> cumulative_weights(const ISInput& in, std::size_t H) {
  std::vector<std::vector<double>> rho(in.trajectories.size(), std::vector<double>(H, 1.0));
  for (std::size_t i = 0; i < in.trajectories.size(); ++i) {
    double w = 1.0;
    const auto& traj = in.trajectories[i];
    for (std::size_t t = 0; t < H; ++t) {
      if (t < traj.size()) w *= traj[t].pe / traj[t].pb;
      rho[i][t] = w;
    }
  }
  return rho;
}

double reward_at(const std::vector<ISStep>& traj, std::size_t t) {
  return t < traj.size() ? traj[t].r : 0.0;
}

}  // namespace

std::vector<double> is_terms(const ISInput& input) {
  input.validate();
  std::vector<double> out;
  for (const auto& traj : input.trajectories) {
    double w = 1.0, g = 0.0, discount = 1.0;
    for (const auto& s : traj) {
      w *= s.pe / s.pb;
      g += discount * s.r;
      discount *= input.gamma;
    }
    out.push_back(w * g);
  }
  return out;
}

double is_estimate(const ISInput& input, ISVariant variant, const ValueModel* values,
                   std::size_t horizon) {
  input.validate();
  const std::size_t n = input.trajectories.size();
  const double nd = static_cast<double>(n);
  const std::size_t H = input.horizon();
  const auto rho = cumulative_weights(input, std::max<std::size_t>(H, 1));
  const std::size_t value_horizon = horizon > 0 ? horizon : H;

  switch (variant) {
    case ISVariant::IS: {
      double s = 0.0;
      for (double term : is_terms(input)) s += term;
      return s / nd;
    }
    case ISVariant::WIS: {
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double g = 0.0, discount = 1.0;
        for (const auto& s : input.trajectories[i]) {
          g += discount * s.r;
          discount *= input.gamma;
        }
        const double w = H == 0 ? 1.0 : rho[i][H - 1];
        num += w * g;
        den += w;
      }
      return den > 0.0 ? num / den : 0.0;
    }
    case ISVariant::PDIS: {
      double s = 0.0, discount = 1.0;
      for (std::size_t t = 0; t < H; ++t) {
        for (std::size_t i = 0; i < n; ++i) s += discount * rho[i][t] * reward_at(input.trajectories[i], t);
        discount *= input.gamma;
      }
      return s / nd;
    }
    case ISVariant::CWPDIS: {
      double s = 0.0, discount = 1.0;
      for (std::size_t t = 0; t < H; ++t) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          num += rho[i][t] * reward_at(input.trajectories[i], t);
          den += rho[i][t];
        }
        if (den > 0.0) s += discount * num / den;
        discount *= input.gamma;
      }
      return s;
    }
    case ISVariant::DR:
    case ISVariant::WDR: {
      if (!values) throw Error(std::string(to_string(variant)) + " needs a value model");
      const bool weighted = variant == ISVariant::WDR;
      std::vector<double> norm(H, nd);
      if (weighted)
        for (std::size_t t = 0; t < H; ++t) {
          double s = 0.0;
          for (std::size_t i = 0; i < n; ++i) s += rho[i][t];
          norm[t] = s;
        }
      double total = 0.0, discount = 1.0;
      for (std::size_t t = 0; t < H; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
          const auto& traj = input.trajectories[i];
          if (t >= traj.size()) continue;
          const double w = norm[t] > 0.0 ? rho[i][t] / norm[t] : 0.0;
          const double w_prev =
              t == 0 ? 1.0 / nd : (norm[t - 1] > 0.0 ? rho[i][t - 1] / norm[t - 1] : 0.0);
          const std::size_t remaining = value_horizon > t ? value_horizon - t : 0;
          const auto& s = traj[t];
          total += discount * (w * s.r - w * values->q(s.x, s.a, remaining) +
                               w_prev * values->v(s.x, remaining));
        }
        discount *= input.gamma;
      }
      return total;
    }
  }
  throw Error("unknown importance sampling variant");
}

}  // namespace moeope
