#include "moeope/core/metric.hpp"

#include "moeope/core/error.hpp"

namespace moeope {

Metric::Metric(std::size_t dim) : weights_(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim))) {}

Metric::Metric(Eigen::VectorXd weights) : weights_(std::move(weights)) {
  if (!weights_.allFinite() || (weights_.array() <= 0.0).any())
    throw Error("metric weights must be strictly positive and finite");
}

double Metric::distance(const StateVec& x, const StateVec& y) const {
  if (x.size() != weights_.size() || y.size() != weights_.size())
    throw DimensionMismatch("metric of dimension " + std::to_string(weights_.size()) +
                            " applied to states of dimension " + std::to_string(x.size()) +
                            " and " + std::to_string(y.size()));
  return (x - y).cwiseProduct(weights_).norm();
}

}  // namespace moeope
