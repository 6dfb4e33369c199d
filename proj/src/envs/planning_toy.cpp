#include "moeope/envs/planning_toy.hpp"

#include "moeope/core/error.hpp"
#include "moeope/models/analytic.hpp"

namespace moeope {

Prediction planning_toy_step(const StateVec& x, ActionId a) {
  if (x.size() != 2) throw DimensionMismatch("planning toy states are 2-D");
  if (a.value > 1) throw Error("planning toy has no action " + std::to_string(a.value));
  StateVec next = x;
  next[0] += 1.0;
  if (a == toy::d) next[1] += 1.0;
  return Prediction{next, x[0] + x[1]};
}

StateVec PlanningToy::sample_initial(Rng& rng) const {
  const auto starts = planning_toy_behavior_starts();
  return starts[std::uniform_int_distribution<std::size_t>(0, starts.size() - 1)(rng)];
}

ToyPolicies planning_toy_policies() {
  ToyPolicies p;
  p.eval = std::make_shared<DeterministicPolicy>(2, [](const StateVec& x) {
    return (x[0] >= 1.0 && x[0] <= 11.0) ? toy::r : toy::d;
  });
  p.behavior = std::make_shared<DeterministicPolicy>(2, [](const StateVec& x) {
    return (x[0] > 0.0 && x[1] == 0.0) ? toy::r : toy::d;
  });
  return p;
}

std::vector<StateVec> planning_toy_behavior_starts() {
  return {StateVec::Zero(2), (StateVec(2) << 1.0, 0.0).finished()};
}

StateVec planning_toy_eval_start() { return StateVec::Zero(2); }

double planning_toy_reward_model(ToyRewardModel variant, const StateVec& x) {
  if (variant == ToyRewardModel::inaccurate && x[0] >= 11.0) return -1.0;
  return x[0] + x[1];
}

ModelPtr planning_toy_parametric_model(ToyRewardModel variant) {
  return std::make_shared<AnalyticModel>(
      std::string("planning_toy_") + to_string(variant), 2, 2,
      [variant](const StateVec& x, ActionId) {
        StateVec next = x;
        next[0] += 1.0;
        next[1] += 0.5;
        return Prediction{next, planning_toy_reward_model(variant, x)};
      });
}

const char* to_string(ToyRewardModel variant) {
  return variant == ToyRewardModel::accurate ? "accurate" : "inaccurate";
}

}  // namespace moeope
