#pragma once

#include "moeope/core/types.hpp"

#include <memory>
#include <string>

namespace moeope {

enum class ModelKind { parametric, nonparametric };

const char* to_string(ModelKind kind);

struct Prediction {
  StateVec next;
  double reward = 0.0;
};

/// Predicts (next state, reward) for a state-action pair. Implementations are
/// deterministic and immutable once built.
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;

  virtual ModelKind kind() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::size_t n_actions() const = 0;
  /// Whether predict() can answer for action `a`.
  virtual bool supports(ActionId a) const = 0;
  /// Throws NoSupport when supports(a) is false.
  virtual Prediction predict(const StateVec& x, ActionId a) const = 0;
  /// JSON description of the learned parameters.
  virtual std::string serialize() const = 0;
};

using ModelPtr = std::shared_ptr<const DynamicsModel>;

inline Prediction predict(const DynamicsModel& model, const StateVec& x, ActionId a) {
  return model.predict(x, a);
}

}  // namespace moeope
