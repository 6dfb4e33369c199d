#pragma once

#include "moeope/core/dataset.hpp"
#include "moeope/models/dynamics_model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace moeope {

enum class Activation { tanh, identity };

struct MlpArchitecture {
  std::size_t n_inputs = 1;
  std::vector<std::size_t> hidden;
  std::size_t n_outputs = 1;
  Activation activation = Activation::tanh;

  std::size_t n_params() const;
};

/// Fully connected network with a linear output layer. Parameters live in one
/// flat vector laid out layer by layer as [W (column-major, out x in), b].
class MlpNetwork {
 public:
  MlpNetwork(MlpArchitecture arch, Eigen::VectorXd params);

  /// Xavier-uniform weights, zero biases.
  static MlpNetwork random(const MlpArchitecture& arch, std::uint64_t seed);

  /// Columns of `inputs` are samples; returns n_outputs x n_samples.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& inputs) const;
  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;

  const MlpArchitecture& architecture() const noexcept { return arch_; }
  const Eigen::VectorXd& params() const noexcept { return params_; }
  Eigen::VectorXd& params() noexcept { return params_; }

 private:
  MlpArchitecture arch_;
  Eigen::VectorXd params_;
};

/// Columns are samples.
struct MlpBatch {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd targets;
};

/// Mean over samples of the squared prediction error norm.
double mlp_loss(const MlpNetwork& net, const MlpBatch& batch);

/// Gradient of mlp_loss with respect to every parameter, by backpropagation.
Eigen::VectorXd mlp_gradient(const MlpNetwork& net, const MlpBatch& batch);

/// One shared network over [standardized x, one-hot a] predicting the
/// standardized (x' - x, r).
class MlpModel final : public DynamicsModel {
 public:
  struct Scaling {
    Eigen::VectorXd in_mean, in_scale, out_mean, out_scale;
  };

  MlpModel(std::size_t dim, std::size_t n_actions, MlpNetwork net, Scaling scaling,
           std::vector<bool> fitted, std::uint64_t seed);

  ModelKind kind() const override { return ModelKind::parametric; }
  std::size_t dim() const override { return dim_; }
  std::size_t n_actions() const override { return n_actions_; }
  bool supports(ActionId a) const override;
  Prediction predict(const StateVec& x, ActionId a) const override;
  std::string serialize() const override;

  const MlpNetwork& network() const noexcept { return net_; }

 private:
  std::size_t dim_;
  std::size_t n_actions_;
  MlpNetwork net_;
  Scaling scaling_;
  std::vector<bool> fitted_;
  std::uint64_t seed_;
};

}  // namespace moeope
