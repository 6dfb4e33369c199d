#include "moeope/envs/windy2d.hpp"

#include "moeope/core/error.hpp"
#include "moeope/models/analytic.hpp"

#include <limits>

namespace moeope {

Windy2DConfig Windy2DConfig::defaults() {
  Windy2DConfig cfg;
  const double big = 1e6;
  cfg.goal = Box{(StateVec(2) << 7.5, 9.0).finished(), (StateVec(2) << big, big).finished()};
  cfg.start = Box{(StateVec(2) << 0.0, 0.0).finished(), (StateVec(2) << 0.5, 0.5).finished()};
  return cfg;
}

void Windy2DConfig::validate() const {
  if (!(step_size > 0.0)) throw ConfigError("env.step_size", "must be positive");
  if (!(wind_slope >= 0.0)) throw ConfigError("env.wind_slope", "must be nonnegative");
  goal.validate("env.goal");
  start.validate("env.start");
  if (goal.lo.size() != 2 || start.lo.size() != 2) throw ConfigError("env", "boxes must be 2-D");
  if (horizon < 1) throw ConfigError("env.horizon", "must be at least 1");
}

StateVec windy_direction(ActionId a) {
  switch (a.value) {
    case 0:
      return (StateVec(2) << 0.0, 1.0).finished();
    case 1:
      return (StateVec(2) << 0.0, -1.0).finished();
    case 2:
      return (StateVec(2) << -1.0, 0.0).finished();
    case 3:
      return (StateVec(2) << 1.0, 0.0).finished();
    default:
      throw Error("windy2d has no action " + std::to_string(a.value));
  }
}

Prediction windy2d_step(const Windy2DConfig& cfg, const StateVec& x, ActionId a) {
  if (x.size() != 2) throw DimensionMismatch("windy2d states are 2-D");
  StateVec next = x + cfg.step_size * windy_direction(a);
  next[0] -= cfg.wind_slope * x[1];
  return Prediction{next, -1.0};
}

Windy2D::Windy2D(Windy2DConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

PolicyPtr windy_eval_policy() {
  return std::make_shared<DeterministicPolicy>(
      4, [](const StateVec& x) { return x[0] < 8.0 ? windy::right : windy::up; });
}

PolicyPtr windy_behavior_policy() {
  return std::make_shared<DeterministicPolicy>(4, [](const StateVec& x) {
    if (x[1] < 6.0) return x[0] < 2.0 ? windy::right : windy::up;
    return x[0] < 8.0 ? windy::right : windy::up;
  });
}

ModelPtr windy_no_wind_model(const Windy2DConfig& cfg) {
  const double step = cfg.step_size;
  return std::make_shared<AnalyticModel>("windy2d_no_wind", 2, 4,
                                         [step](const StateVec& x, ActionId a) {
                                           return Prediction{x + step * windy_direction(a), -1.0};
                                         });
}

}  // namespace moeope
