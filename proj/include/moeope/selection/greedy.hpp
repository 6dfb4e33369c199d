#pragma once

#include "moeope/selection/context.hpp"

namespace moeope {

struct GreedyDecision {
  ModelKind model = ModelKind::parametric;
  /// Parametric chosen only because the nonparametric estimate was unsupported.
  bool fallback = false;
  ErrorEstimate np;
  ErrorEstimate p;
};

/// Nonparametric iff eps_t_np + alpha_r eps_r_np < eps_t_p + alpha_r eps_r_p.
/// An unsupported nonparametric estimate falls back to the parametric model;
/// the `*_usable` flags say whether each model can predict the action at all.
/// Throws NoSupport when neither model is usable.
GreedyDecision greedy_rule(const ErrorEstimate& np, const ErrorEstimate& p, double alpha_r,
                           bool parametric_usable = true, bool nonparametric_usable = true);

GreedyDecision greedy_decide(const SelectionContext& ctx, const SelectorConfig& cfg,
                             const StateVec& x, ActionId a);

ModelKind greedy_select(const SelectionContext& ctx, const SelectorConfig& cfg, const StateVec& x,
                        ActionId a);

}  // namespace moeope
