#pragma once

#include "moeope/core/dataset.hpp"
#include "moeope/models/dynamics_model.hpp"

namespace moeope {

/// Copies the recorded (x', r) of the closest same-action transition.
class NonparametricModel final : public DynamicsModel {
 public:
  NonparametricModel(std::shared_ptr<const Dataset> data, Metric metric);

  ModelKind kind() const override { return ModelKind::nonparametric; }
  std::size_t dim() const override { return data_->dim(); }
  std::size_t n_actions() const override { return data_->n_actions(); }
  bool supports(ActionId a) const override { return !data_->indices_for(a).empty(); }
  Prediction predict(const StateVec& x, ActionId a) const override;
  std::string serialize() const override;

  /// Neighbor used by predict(); empty when the action has no data.
  std::optional<Neighbor> source(const StateVec& x, ActionId a) const;

  const Dataset& data() const noexcept { return *data_; }
  const Metric& metric() const noexcept { return metric_; }

 private:
  std::shared_ptr<const Dataset> data_;
  Metric metric_;
};

}  // namespace moeope
