#pragma once

#include "moeope/core/dataset.hpp"
#include "moeope/models/dynamics_model.hpp"

#include <cstdint>
#include <string>

namespace moeope {

enum class Learner { ridge_per_action, mlp };

struct ParametricFitConfig {
  Learner learner = Learner::ridge_per_action;
  double ridge_lambda = 0.0;
  /// Width of each hidden layer.
  std::size_t mlp_hidden = 64;
  /// 1 or 2 hidden layers.
  std::size_t mlp_layers = 1;
  std::size_t mlp_epochs = 2000;
  double mlp_learning_rate = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Fits the configured learner. Actions without samples are recorded as
/// unfitted; predicting them throws NoSupport.
ModelPtr fit_parametric(const Dataset& ds, const ParametricFitConfig& cfg);

/// Rebuilds a ridge or MLP model from DynamicsModel::serialize() output.
ModelPtr load_parametric_model(const std::string& json_text);

}  // namespace moeope
