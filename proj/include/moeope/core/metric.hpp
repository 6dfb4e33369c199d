#pragma once

#include "moeope/core/types.hpp"

namespace moeope {

/// Weighted Euclidean distance sqrt(sum_i (w_i (x_i - y_i))^2).
///
/// Each weight multiplies the coordinate difference before squaring, so a
/// weight of 20 makes a unit offset in that dimension count as distance 20.
class Metric {
 public:
  explicit Metric(std::size_t dim);
  explicit Metric(Eigen::VectorXd weights);

  double distance(const StateVec& x, const StateVec& y) const;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(weights_.size()); }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

 private:
  Eigen::VectorXd weights_;
};

inline double metric_distance(const Metric& m, const StateVec& x, const StateVec& y) {
  return m.distance(x, y);
}

}  // namespace moeope
