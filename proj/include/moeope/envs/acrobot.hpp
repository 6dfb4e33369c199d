#pragma once

#include "moeope/envs/environment.hpp"

namespace moeope {

struct AcrobotConfig {
  double m1 = 1.0, m2 = 1.0;
  double l1 = 1.0;
  double lc1 = 0.5, lc2 = 0.5;
  double I1 = 1.0, I2 = 1.0;
  double g = 9.8;
  double dt = 0.2;
  double max_vel1 = 4.0 * 3.14159265358979323846;
  double max_vel2 = 9.0 * 3.14159265358979323846;
  double goal_height = 1.0;
  /// Half-width of the uniform start distribution around the hanging state.
  double init_noise = 0.1;
  std::size_t horizon = 200;

  void validate() const;
};

/// Tip height -cos(theta1) - cos(theta1 + theta2).
double acrobot_tip_height(const StateVec& x);

/// Time derivative of (theta1, theta2, dtheta1, dtheta2) under `torque`.
StateVec acrobot_derivative(const AcrobotConfig& cfg, const StateVec& x, double torque);

/// `n` plain RK4 steps of size `h`, no angle wrapping or velocity clipping.
StateVec acrobot_integrate(const AcrobotConfig& cfg, const StateVec& x, double torque, double h,
                           std::size_t n);

/// One RK4 step of cfg.dt with torque a - 1, then wrap angles and clip velocities.
Prediction acrobot_step(const AcrobotConfig& cfg, const StateVec& x, ActionId a);

class Acrobot final : public Environment {
 public:
  explicit Acrobot(AcrobotConfig cfg);

  std::string name() const override { return "acrobot"; }
  std::size_t dim() const override { return 4; }
  std::size_t n_actions() const override { return 3; }
  std::size_t horizon() const override { return cfg_.horizon; }
  Prediction step(const StateVec& x, ActionId a) const override { return acrobot_step(cfg_, x, a); }
  bool is_terminal(const StateVec& x) const override {
    return acrobot_tip_height(x) >= cfg_.goal_height;
  }
  StateVec sample_initial(Rng& rng) const override;

  const AcrobotConfig& config() const noexcept { return cfg_; }

 private:
  AcrobotConfig cfg_;
};

/// Torque +1 while the second joint turns forward, -1 otherwise.
PolicyPtr acrobot_eval_policy();

/// Keeps transitions whose start state has tip height <= h_max.
Dataset filter_dataset_by_height(const Dataset& ds, double h_max);

}  // namespace moeope
