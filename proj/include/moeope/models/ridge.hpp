#pragma once

#include "moeope/core/dataset.hpp"
#include "moeope/models/dynamics_model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace moeope {

/// Independent linear regressions (with intercept) of x' and r on x, one set per action.
class RidgeModel final : public DynamicsModel {
 public:
  struct ActionFit {
    /// (dim + 1) x dim: rows 0..dim-1 predict x', the last row predicts r.
    Eigen::MatrixXd coef;
    Eigen::VectorXd intercept;
  };

  RidgeModel(std::size_t dim, std::size_t n_actions, double lambda,
             std::vector<std::optional<ActionFit>> fits);

  /// Ridge penalty `lambda` applies to slopes only; lambda = 0 gives the
  /// minimum-norm least-squares solution.
  static RidgeModel fit(const Dataset& ds, double lambda);

  ModelKind kind() const override { return ModelKind::parametric; }
  std::size_t dim() const override { return dim_; }
  std::size_t n_actions() const override { return n_actions_; }
  bool supports(ActionId a) const override;
  Prediction predict(const StateVec& x, ActionId a) const override;
  std::string serialize() const override;

  double lambda() const noexcept { return lambda_; }
  const std::optional<ActionFit>& action_fit(ActionId a) const { return fits_.at(a.value); }

 private:
  std::size_t dim_;
  std::size_t n_actions_;
  double lambda_;
  std::vector<std::optional<ActionFit>> fits_;
};

}  // namespace moeope
