#include "moeope/envs/acrobot.hpp"

#include "moeope/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace moeope {

void AcrobotConfig::validate() const {
  for (double v : {m1, m2, l1, lc1, lc2, I1, I2})
    if (!(v > 0.0)) throw ConfigError("env", "acrobot masses, lengths and inertias must be positive");
  if (!(g >= 0.0)) throw ConfigError("env.g", "must be nonnegative");
  if (!(dt > 0.0)) throw ConfigError("env.dt", "must be positive");
  if (!(init_noise >= 0.0)) throw ConfigError("env.init_noise", "must be nonnegative");
  if (horizon < 1) throw ConfigError("env.horizon", "must be at least 1");
}

double acrobot_tip_height(const StateVec& x) { return -std::cos(x[0]) - std::cos(x[0] + x[1]); }

StateVec acrobot_derivative(const AcrobotConfig& c, const StateVec& s, double torque) {
  using std::cos;
  using std::sin;
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double t1 = s[0], t2 = s[1], d1 = s[2], d2 = s[3];
  const double D1 = c.m1 * c.lc1 * c.lc1 +
                    c.m2 * (c.l1 * c.l1 + c.lc2 * c.lc2 + 2.0 * c.l1 * c.lc2 * cos(t2)) + c.I1 +
                    c.I2;
  const double D2 = c.m2 * (c.lc2 * c.lc2 + c.l1 * c.lc2 * cos(t2)) + c.I2;
  const double phi2 = c.m2 * c.lc2 * c.g * cos(t1 + t2 - half_pi);
  const double phi1 = -c.m2 * c.l1 * c.lc2 * d2 * d2 * sin(t2) -
                      2.0 * c.m2 * c.l1 * c.lc2 * d2 * d1 * sin(t2) +
                      (c.m1 * c.lc1 + c.m2 * c.l1) * c.g * cos(t1 - half_pi) + phi2;
  const double dd2 = (torque + D2 / D1 * phi1 - c.m2 * c.l1 * c.lc2 * d1 * d1 * sin(t2) - phi2) /
                     (c.m2 * c.lc2 * c.lc2 + c.I2 - D2 * D2 / D1);
  const double dd1 = -(D2 * dd2 + phi1) / D1;
  return (StateVec(4) << d1, d2, dd1, dd2).finished();
}

StateVec acrobot_integrate(const AcrobotConfig& cfg, const StateVec& x, double torque, double h,
                           std::size_t n) {
  StateVec s = x;
  for (std::size_t i = 0; i < n; ++i) {
    const StateVec k1 = acrobot_derivative(cfg, s, torque);
    const StateVec k2 = acrobot_derivative(cfg, s + 0.5 * h * k1, torque);
    const StateVec k3 = acrobot_derivative(cfg, s + 0.5 * h * k2, torque);
    const StateVec k4 = acrobot_derivative(cfg, s + h * k3, torque);
    s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return s;
}

namespace {

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  double w = std::fmod(a + pi, 2.0 * pi);
  if (w < 0.0) w += 2.0 * pi;
  return w - pi;
}

}  // namespace

Prediction acrobot_step(const AcrobotConfig& cfg, const StateVec& x, ActionId a) {
  if (x.size() != 4) throw DimensionMismatch("acrobot states are 4-D");
  if (a.value > 2) throw Error("acrobot has no action " + std::to_string(a.value));
  StateVec next = acrobot_integrate(cfg, x, static_cast<double>(a.value) - 1.0, cfg.dt, 1);
  next[0] = wrap_angle(next[0]);
  next[1] = wrap_angle(next[1]);
  next[2] = std::clamp(next[2], -cfg.max_vel1, cfg.max_vel1);
  next[3] = std::clamp(next[3], -cfg.max_vel2, cfg.max_vel2);
  return Prediction{next, -1.0};
}

Acrobot::Acrobot(AcrobotConfig cfg) : cfg_(cfg) { cfg_.validate(); }

StateVec Acrobot::sample_initial(Rng& rng) const {
  StateVec x(4);
  std::uniform_real_distribution<double> u(-cfg_.init_noise, cfg_.init_noise);
  for (Eigen::Index i = 0; i < 4; ++i) x[i] = u(rng);
  return x;
}

PolicyPtr acrobot_eval_policy() {
  return std::make_shared<DeterministicPolicy>(
      3, [](const StateVec& x) { return x[3] > 0.0 ? ActionId(2) : ActionId(0); });
}

Dataset filter_dataset_by_height(const Dataset& ds, double h_max) {
  return ds.filtered([h_max](const Transition& tr) { return acrobot_tip_height(tr.x) <= h_max; });
}

}  // namespace moeope
