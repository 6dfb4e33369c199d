#pragma once

#include <span>

namespace moeope {

struct BoundParams {
  double L_t = 1.0;
  double L_r = 1.0;
  double gamma = 1.0;

  void validate() const;
};

/// One step of the state-error recursion: L_t * delta_prev + eps_t.
double rollforward_state_error(double delta_prev, const BoundParams& p, double eps_t);

/// delta(t) from the explicit sum  sum_{k=0}^{t-1} L_t^k eps_t[t-k-1].
double state_error_closed_form(std::span<const double> eps_t, double L_t, std::size_t t);

/// sum_t gamma^t (L_r delta(t) + eps_r[t]) with delta(0) = 0 and
/// delta(t) = L_t delta(t-1) + eps_t[t-1]. Both sequences have one entry per
/// simulated step; the last eps_t entry does not enter the sum.
double return_error_bound(std::span<const double> eps_t, std::span<const double> eps_r,
                          const BoundParams& p);

}  // namespace moeope
