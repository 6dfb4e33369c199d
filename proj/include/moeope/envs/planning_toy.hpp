#pragma once

#include "moeope/envs/environment.hpp"

namespace moeope {

namespace toy {
inline constexpr ActionId r{0};  // (x1 + 1, x2)
inline constexpr ActionId d{1};  // (x1 + 1, x2 + 1)
}  // namespace toy

enum class ToyRewardModel { accurate, inaccurate };

/// Reward x1 + x2 of the current state.
Prediction planning_toy_step(const StateVec& x, ActionId a);

class PlanningToy final : public Environment {
 public:
  explicit PlanningToy(std::size_t horizon = 16) : horizon_(horizon) {}

  std::string name() const override { return "planning_toy"; }
  std::size_t dim() const override { return 2; }
  std::size_t n_actions() const override { return 2; }
  std::size_t horizon() const override { return horizon_; }
  Prediction step(const StateVec& x, ActionId a) const override { return planning_toy_step(x, a); }
  /// The behavior start states, alternately.
  StateVec sample_initial(Rng& rng) const override;

 private:
  std::size_t horizon_;
};

struct ToyPolicies {
  PolicyPtr eval;
  PolicyPtr behavior;
};

/// eval: r when 1 <= x1 <= 11, else d. behavior: r when x1 > 0 and x2 = 0, else d.
ToyPolicies planning_toy_policies();

/// (0,0) and (1,0).
std::vector<StateVec> planning_toy_behavior_starts();
StateVec planning_toy_eval_start();

double planning_toy_reward_model(ToyRewardModel variant, const StateVec& x);

/// (x1 + 1, x2 + 0.5) for every action, with the chosen reward model.
ModelPtr planning_toy_parametric_model(ToyRewardModel variant);

const char* to_string(ToyRewardModel variant);

}  // namespace moeope
