#pragma once

#include "moeope/core/policy.hpp"
#include "moeope/estimation/bounds.hpp"
#include "moeope/estimation/error_estimates.hpp"
#include "moeope/models/dynamics_model.hpp"

#include <functional>
#include <iosfwd>
#include <memory>

namespace moeope {

enum class SelectorMode { greedy, mcts, parametric, nonparametric };

/// Which Lipschitz constant multiplies the rolled-forward state error in the
/// per-step return-error increment.
enum class DeltaMultiplier { L_r, L_t };

const char* to_string(SelectorMode mode);
SelectorMode selector_mode_from_string(const std::string& s);

struct SelectorConfig {
  SelectorMode mode = SelectorMode::greedy;
  double alpha_r = 0.0;
  std::size_t mcts_budget = 128;
  /// Planning horizon; 0 means the simulator's remaining horizon.
  std::size_t horizon = 0;
  bool use_true_errors = false;
  DeltaMultiplier delta_multiplier = DeltaMultiplier::L_r;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Everything a per-step model choice needs: both experts, the cached error
/// estimates, the evaluation policy and an optional ground-truth oracle.
struct SelectionContext {
  std::shared_ptr<const ErrorContext> errors;
  ModelPtr nonparametric;
  PolicyPtr eval_policy;
  BoundParams bound;
  /// Ground-truth dynamics; required when use_true_errors is set.
  TrueDynamics oracle;
  std::function<bool(const StateVec&)> is_terminal;
  /// Optional sink for one JSON line per MCTS decision.
  std::ostream* trace = nullptr;

  const DynamicsModel& parametric() const { return *errors->parametric(); }
  const DynamicsModel& model(ModelKind kind) const;
  bool terminal(const StateVec& x) const { return is_terminal && is_terminal(x); }

  /// Estimated or true error of `kind` at (x, a).
  ErrorEstimate error_of(ModelKind kind, const StateVec& x, ActionId a, bool use_true_errors) const;
};

}  // namespace moeope
