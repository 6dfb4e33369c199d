#pragma once

#include "moeope/envs/environment.hpp"
#include "moeope/selection/context.hpp"

#include <optional>
#include <vector>

namespace moeope {

struct SimConfig {
  std::size_t n_rollouts = 10;
  std::size_t horizon = 60;
  double gamma = 1.0;
  SelectorConfig selector;
  std::uint64_t seed = 0;
  /// Start states to sample from instead of the dataset's initial states.
  std::vector<StateVec> initial_states;
  /// When set, a step the selected model cannot predict freezes the rollout
  /// and every remaining step earns this reward; otherwise NoSupport propagates.
  std::optional<double> stuck_reward;

  void validate() const;
};

struct ModelUsage {
  std::size_t parametric = 0;
  std::size_t nonparametric = 0;

  std::size_t total() const noexcept { return parametric + nonparametric; }
  void add(ModelKind kind) { ++(kind == ModelKind::parametric ? parametric : nonparametric); }
};

struct RolloutRecord {
  std::uint64_t seed = 0;
  double ret = 0.0;
  std::size_t steps = 0;
  bool reached_goal = false;
  /// The selected model could not predict and the rollout froze.
  bool stuck = false;
  ModelUsage usage;
  Trajectory trajectory;
  std::vector<ModelKind> choices;
};

struct ValueEstimate {
  double v_hat = 0.0;
  std::vector<double> per_rollout_returns;
  /// Rollouts that never reached a terminal state (0 when the domain has none).
  std::size_t n_unreached_goal = 0;
  ModelUsage model_usage;
  /// Counts per time step.
  std::vector<ModelUsage> usage_by_step;
  std::vector<RolloutRecord> rollouts;
};

/// Mean discounted return of simulated rollouts under the evaluation policy,
/// choosing an expert at every step according to cfg.selector.
ValueEstimate simulate_value(const SelectionContext& ctx, const SimConfig& cfg);

/// One simulated rollout from x0 with its own generator.
RolloutRecord simulate_rollout(const SelectionContext& ctx, const SimConfig& cfg,
                               const StateVec& x0, Rng& rng);

/// Sum over aligned time steps of the distance between simulated and true
/// states; the longer trajectory is truncated. Throws if the starts differ.
double trajectory_error(const Trajectory& sim, const Trajectory& truth, const Metric& m);

/// Mean return of `n` on-policy rollouts in the true environment. Rollout i
/// starts from starts[i % size] when given, else from the environment's start
/// distribution.
double evaluate_policy_true(const Environment& env, const Policy& policy, std::size_t n,
                            std::size_t horizon, double gamma, std::uint64_t seed,
                            const std::vector<StateVec>& starts = {});

std::string rollout_json_line(const RolloutRecord& r);

}  // namespace moeope
