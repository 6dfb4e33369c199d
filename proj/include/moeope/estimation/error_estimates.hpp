#pragma once

#include "moeope/core/dataset.hpp"
#include "moeope/models/dynamics_model.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace moeope {

struct ErrorEstimate {
  double eps_t = 0.0;
  double eps_r = 0.0;
  /// False when no neighbor was available to base the estimate on.
  bool supported = true;
};

struct LipschitzEstimates {
  double L_t_hat = 0.0;
  double L_r_hat = 0.0;
  std::size_t n_pairs = 0;
};

/// Max of output-distance / input-distance over the pairs. Pairs with
/// coincident start states are skipped; throws InsufficientPairs if none remain.
LipschitzEstimates estimate_lipschitz(const std::vector<std::pair<Transition, Transition>>& pairs,
                                      const Metric& m);

/// Same estimate over every same-action pair drawn from `indices`.
std::optional<LipschitzEstimates> lipschitz_over(const Dataset& ds,
                                                 std::span<const std::size_t> indices,
                                                 const Metric& m);

/// Max over actions of the all-pairs estimate within that action.
std::optional<LipschitzEstimates> global_lipschitz(const Dataset& ds, const Metric& m);

/// Nearest-neighbor error L_hat * distance(x, x*), with L_hat estimated from
/// the same-action transitions within `c` of x (global estimate when fewer
/// than two usable ones).
ErrorEstimate np_error_estimate(const Dataset& ds, const StateVec& x, ActionId a, double c,
                                const Metric& m);

/// Largest residual of `model` over the same-action transitions within `c` of x.
ErrorEstimate p_error_estimate(const Dataset& ds, const DynamicsModel& model, const StateVec& x,
                               ActionId a, double c, const Metric& m);

/// Mean transition residual of `model` over the transitions it supports.
double mean_parametric_error(const Dataset& ds, const DynamicsModel& model, const Metric& m);

/// mean parametric error / global L_t_hat; infinity when L_t_hat is 0 or
/// cannot be estimated.
double choose_radius(const Dataset& ds, const DynamicsModel& model, const Metric& m);

using TrueDynamics = std::function<Prediction(const StateVec&, ActionId)>;

/// Exact error of `model` against the true dynamics.
ErrorEstimate true_error(const DynamicsModel& model, const TrueDynamics& truth, const StateVec& x,
                         ActionId a, const Metric& m);

/// Caches the dataset-wide quantities (global Lipschitz, residuals, radius)
/// so per-query estimates cost one neighborhood scan.
class ErrorContext {
 public:
  ErrorContext(std::shared_ptr<const Dataset> data, Metric metric, ModelPtr parametric,
               std::optional<double> radius_override = std::nullopt);

  ErrorEstimate np_error(const StateVec& x, ActionId a) const;
  /// Unsupported when no transition lies within the radius; the estimate then
  /// carries the dataset-wide mean residuals.
  ErrorEstimate p_error(const StateVec& x, ActionId a) const;

  double radius() const noexcept { return radius_; }
  double mean_parametric_error() const noexcept { return mean_p_error_; }
  const std::optional<LipschitzEstimates>& global() const noexcept { return global_; }
  const Dataset& data() const noexcept { return *data_; }
  const std::shared_ptr<const Dataset>& data_ptr() const noexcept { return data_; }
  const Metric& metric() const noexcept { return metric_; }
  const ModelPtr& parametric() const noexcept { return parametric_; }

 private:
  std::optional<LipschitzEstimates> local_lipschitz(ActionId a,
                                                    const std::vector<Neighbor>& nbs) const;

  std::shared_ptr<const Dataset> data_;
  Metric metric_;
  ModelPtr parametric_;
  std::optional<LipschitzEstimates> global_;
  std::vector<std::optional<LipschitzEstimates>> per_action_;
  /// Per-transition parametric residuals (NaN where the model has no support).
  std::vector<double> res_t_, res_r_;
  double mean_p_error_ = 0.0;
  double mean_p_reward_error_ = 0.0;
  double radius_ = 0.0;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::vector<std::size_t>, std::optional<LipschitzEstimates>> cache_;
};

}  // namespace moeope
