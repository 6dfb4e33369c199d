#pragma once

#include "moeope/envs/environment.hpp"

namespace moeope {

namespace windy {
inline constexpr ActionId up{0};
inline constexpr ActionId down{1};
inline constexpr ActionId left{2};
inline constexpr ActionId right{3};
}  // namespace windy

struct Windy2DConfig {
  double step_size = 1.0;
  /// Leftward wind per unit of y.
  double wind_slope = 0.05;
  Box goal{StateVec::Constant(1, 0.0), StateVec::Constant(1, 0.0)};
  Box start{StateVec::Constant(1, 0.0), StateVec::Constant(1, 0.0)};
  std::size_t horizon = 60;

  static Windy2DConfig defaults();
  void validate() const;
};

StateVec windy_direction(ActionId a);

/// x' = x + step_size u(a) + (-k y, 0), reward -1.
Prediction windy2d_step(const Windy2DConfig& cfg, const StateVec& x, ActionId a);

class Windy2D final : public Environment {
 public:
  explicit Windy2D(Windy2DConfig cfg);

  std::string name() const override { return "windy2d"; }
  std::size_t dim() const override { return 2; }
  std::size_t n_actions() const override { return 4; }
  std::size_t horizon() const override { return cfg_.horizon; }
  Prediction step(const StateVec& x, ActionId a) const override { return windy2d_step(cfg_, x, a); }
  bool is_terminal(const StateVec& x) const override { return cfg_.goal.contains(x); }
  StateVec sample_initial(Rng& rng) const override { return cfg_.start.sample(rng); }

  const Windy2DConfig& config() const noexcept { return cfg_; }

 private:
  Windy2DConfig cfg_;
};

/// Right until x >= 8, then up.
PolicyPtr windy_eval_policy();
/// Right until x >= 2 then up while y < 6; from y >= 6 on, as the evaluation policy.
PolicyPtr windy_behavior_policy();
/// Parametric model that knows each action's direction and step size but not the wind.
ModelPtr windy_no_wind_model(const Windy2DConfig& cfg);

}  // namespace moeope
