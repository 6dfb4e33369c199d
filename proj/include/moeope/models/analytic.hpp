#pragma once

#include "moeope/models/dynamics_model.hpp"

#include <functional>

namespace moeope {

/// Parametric model given in closed form rather than learned.
class AnalyticModel final : public DynamicsModel {
 public:
  using Fn = std::function<Prediction(const StateVec&, ActionId)>;

  AnalyticModel(std::string name, std::size_t dim, std::size_t n_actions, Fn fn);

  ModelKind kind() const override { return ModelKind::parametric; }
  std::size_t dim() const override { return dim_; }
  std::size_t n_actions() const override { return n_actions_; }
  bool supports(ActionId a) const override { return a.value < n_actions_; }
  Prediction predict(const StateVec& x, ActionId a) const override;
  std::string serialize() const override;

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  std::size_t dim_;
  std::size_t n_actions_;
  Fn fn_;
};

}  // namespace moeope
