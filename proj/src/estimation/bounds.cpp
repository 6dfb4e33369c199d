#include "moeope/estimation/bounds.hpp"

#include "moeope/core/error.hpp"

#include <cmath>

namespace moeope {

void BoundParams::validate() const {
  if (!(L_t >= 0.0) || !std::isfinite(L_t)) throw ConfigError("bound.L_t", "must be finite and >= 0");
  if (!(L_r >= 0.0) || !std::isfinite(L_r)) throw ConfigError("bound.L_r", "must be finite and >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("bound.gamma", "must lie in (0, 1]");
}

double rollforward_state_error(double delta_prev, const BoundParams& p, double eps_t) {
  return p.L_t * delta_prev + eps_t;
}

double state_error_closed_form(std::span<const double> eps_t, double L_t, std::size_t t) {
  if (t > eps_t.size()) throw Error("closed form needs t <= number of transition errors");
  double sum = 0.0;
  for (std::size_t k = 0; k < t; ++k) sum += std::pow(L_t, static_cast<double>(k)) * eps_t[t - k - 1];
  return sum;
}

double return_error_bound(std::span<const double> eps_t, std::span<const double> eps_r,
                          const BoundParams& p) {
  if (eps_t.size() != eps_r.size())
    throw DimensionMismatch("transition and reward error sequences differ in length");
  double delta = 0.0;
  double discount = 1.0;
  double total = 0.0;
  for (std::size_t t = 0; t < eps_r.size(); ++t) {
    if (t > 0) delta = rollforward_state_error(delta, p, eps_t[t - 1]);
    total += discount * (p.L_r * delta + eps_r[t]);
    discount *= p.gamma;
  }
  return total;
}

}  // namespace moeope
