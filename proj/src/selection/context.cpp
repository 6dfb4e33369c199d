#include "moeope/selection/context.hpp"

#include "moeope/core/error.hpp"

namespace moeope {

const char* to_string(SelectorMode mode) {
  switch (mode) {
    case SelectorMode::greedy:
      return "greedy";
    case SelectorMode::mcts:
      return "mcts";
    case SelectorMode::parametric:
      return "parametric";
    case SelectorMode::nonparametric:
      return "nonparametric";
  }
  return "unknown";
}

SelectorMode selector_mode_from_string(const std::string& s) {
  if (s == "greedy") return SelectorMode::greedy;
  if (s == "mcts") return SelectorMode::mcts;
  if (s == "parametric") return SelectorMode::parametric;
  if (s == "nonparametric") return SelectorMode::nonparametric;
  throw ConfigError("selector.mode", "unknown mode '" + s + "'");
}

void SelectorConfig::validate() const {
  if (!(alpha_r >= 0.0)) throw ConfigError("selector.alpha_r", "must be nonnegative");
  if (mcts_budget < 1) throw ConfigError("selector.mcts_budget", "must be at least 1");
}

const DynamicsModel& SelectionContext::model(ModelKind kind) const {
  return kind == ModelKind::parametric ? parametric() : *nonparametric;
}

ErrorEstimate SelectionContext::error_of(ModelKind kind, const StateVec& x, ActionId a,
                                         bool use_true_errors) const {
  if (use_true_errors) {
    if (!oracle) throw Error("true-error mode needs an environment oracle");
    return true_error(model(kind), oracle, x, a, errors->metric());
  }
  return kind == ModelKind::parametric ? errors->p_error(x, a) : errors->np_error(x, a);
}

}  // namespace moeope
