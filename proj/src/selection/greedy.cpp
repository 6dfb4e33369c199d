#include "moeope/selection/greedy.hpp"

#include "moeope/core/error.hpp"

namespace moeope {

GreedyDecision greedy_rule(const ErrorEstimate& np, const ErrorEstimate& p, double alpha_r,
                           bool parametric_usable, bool nonparametric_usable) {
  GreedyDecision d{ModelKind::parametric, false, np, p};
  if (!parametric_usable) {
    if (!nonparametric_usable)
      throw NoSupport("no support: neither model can predict this state-action pair");
    d.model = ModelKind::nonparametric;
    return d;
  }
  if (!np.supported || !nonparametric_usable) {
    d.fallback = true;
    return d;
  }
  if (!p.supported) {
    d.model = ModelKind::nonparametric;
    return d;
  }
  if (np.eps_t + alpha_r * np.eps_r < p.eps_t + alpha_r * p.eps_r) d.model = ModelKind::nonparametric;
  return d;
}

GreedyDecision greedy_decide(const SelectionContext& ctx, const SelectorConfig& cfg,
                             const StateVec& x, ActionId a) {
  return greedy_rule(ctx.error_of(ModelKind::nonparametric, x, a, cfg.use_true_errors),
                     ctx.error_of(ModelKind::parametric, x, a, cfg.use_true_errors), cfg.alpha_r,
                     ctx.parametric().supports(a), ctx.nonparametric->supports(a));
}

ModelKind greedy_select(const SelectionContext& ctx, const SelectorConfig& cfg, const StateVec& x,
                        ActionId a) {
  return greedy_decide(ctx, cfg, x, a).model;
}

}  // namespace moeope
