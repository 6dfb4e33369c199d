#pragma once

#include "moeope/selection/context.hpp"

#include <array>
#include <limits>
#include <optional>
#include <vector>

namespace moeope {

/// The search space of the planner: nodes are (state, action) pairs, edges
/// are model choices.
class PlanningProblem {
 public:
  struct Outcome {
    StateVec state;
    ActionId action;
    bool terminal = false;
  };

  virtual ~PlanningProblem() = default;
  virtual ErrorEstimate errors(const StateVec& x, ActionId a, ModelKind kind) const = 0;
  virtual Outcome advance(const StateVec& x, ActionId a, ModelKind kind) const = 0;
  /// Whether `kind` can predict action `a` at all.
  virtual bool usable(ActionId, ModelKind) const { return true; }
};

/// PlanningProblem backed by the experts of a SelectionContext.
class ModelPlanningProblem final : public PlanningProblem {
 public:
  ModelPlanningProblem(const SelectionContext& ctx, bool use_true_errors)
      : ctx_(ctx), use_true_errors_(use_true_errors) {}

  ErrorEstimate errors(const StateVec& x, ActionId a, ModelKind kind) const override;
  Outcome advance(const StateVec& x, ActionId a, ModelKind kind) const override;
  bool usable(ActionId a, ModelKind kind) const override;

 private:
  const SelectionContext& ctx_;
  bool use_true_errors_;
};

struct MctsConfig {
  std::size_t budget = 128;
  /// Steps left including the root's.
  std::size_t horizon = 1;
  double alpha_r = 0.0;
  BoundParams bound;
  DeltaMultiplier delta_multiplier = DeltaMultiplier::L_r;
};

struct PlanNode {
  StateVec state;
  ActionId action;
  std::optional<ModelKind> model;  // empty at the root
  std::size_t N = 0;
  double Q = 0.0;
  double Q_tilde = -std::numeric_limits<double>::infinity();
  std::size_t tau = 0;
  double delta = 0.0;
  double delta_g = 0.0;
  ErrorEstimate err;  // error of the edge leading into this node
  bool terminal = false;
  int parent = -1;
  std::array<int, 2> children{-1, -1};
  std::size_t n_children = 0;
  /// Models that can still be expanded, in expansion order.
  std::vector<ModelKind> untried;
  bool untried_ready = false;
};

struct MctsResult {
  ModelKind model = ModelKind::parametric;
  bool fell_back_to_greedy = false;
  std::size_t rollouts = 0;
  std::vector<PlanNode> tree;  // tree[0] is the root
  double exploration = 0.0;
};

/// UCT search over model-choice sequences minimizing the return-error bound.
MctsResult mcts_plan(const PlanningProblem& problem, const StateVec& x, ActionId a,
                     const MctsConfig& cfg);

ModelKind mcts_select(const SelectionContext& ctx, const SelectorConfig& cfg, const StateVec& x,
                      ActionId a, std::size_t remaining_horizon);

/// One JSON object describing the root of a finished search.
std::string mcts_trace_line(const MctsResult& result);

}  // namespace moeope
