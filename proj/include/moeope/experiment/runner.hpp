#pragma once

#include "moeope/experiment/config.hpp"
#include "moeope/selection/context.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace moeope {

/// The environment side of an experiment: true dynamics and both policies.
struct ExperimentEnv {
  EnvPtr env;
  PolicyPtr eval;
  PolicyPtr behavior;
  /// Fixed behavior start states (empty = environment start distribution).
  std::vector<StateVec> behavior_starts;
  /// Start states of the evaluation problem (empty = environment start distribution).
  std::vector<StateVec> eval_starts;
  std::size_t horizon = 1;
  double gamma = 1.0;
};

ExperimentEnv build_environment(const ExperimentConfig& cfg);

/// Behavior data for one repetition, before any filtering.
Dataset generate_behavior_data(const ExperimentConfig& cfg, const ExperimentEnv& env,
                               std::uint64_t rep_seed);

ModelPtr fit_experiment_model(const ExperimentConfig& cfg, const ExperimentEnv& env,
                              const Dataset& data, std::uint64_t rep_seed);

/// Everything fitted and cached for one repetition.
struct PreparedRepetition {
  std::shared_ptr<const Dataset> data;
  /// Data available to the nonparametric expert (after filtering).
  std::shared_ptr<const Dataset> np_data;
  ModelPtr parametric;
  ModelPtr nonparametric;
  std::shared_ptr<const ErrorContext> errors;
  SelectionContext selection;
};

PreparedRepetition prepare_repetition(const ExperimentConfig& cfg, const ExperimentEnv& env,
                                      std::uint64_t rep_seed);

struct EstimatorRecord {
  std::string name;
  double v_hat = 0.0;
  std::optional<double> eps_traj;
  std::size_t n_rollouts = 0;
  std::size_t n_unreached_goal = 0;
  std::size_t parametric_steps = 0;
  std::size_t nonparametric_steps = 0;
};

struct RepetitionRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t n_transitions = 0;
  std::size_t n_np_transitions = 0;
  double radius = 0.0;
  double L_t = 0.0;
  double L_r = 0.0;
  std::vector<EstimatorRecord> estimates;

  const EstimatorRecord& at(const std::string& name) const;
};

struct EstimatorAggregate {
  std::string name;
  double rmse = 0.0;
  double median_abs_error = 0.0;
  double mean_v_hat = 0.0;
  std::optional<double> relative_rmse;
  /// Repetitions in which no rollout reached the goal.
  std::size_t n_never_reached = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  double v_true = 0.0;
  std::vector<RepetitionRecord> repetitions;
  std::vector<EstimatorAggregate> aggregates;
  bool goal_domain = false;

  const EstimatorAggregate& aggregate(const std::string& name) const;
};

/// Seed of repetition i.
std::uint64_t repetition_seed(std::uint64_t master, std::size_t i);

RepetitionRecord run_repetition(const ExperimentConfig& cfg, const ExperimentEnv& env,
                                std::size_t index);

/// Runs every repetition (up to `jobs` at a time) and aggregates.
ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t jobs = 1);

std::vector<EstimatorAggregate> aggregate_records(const std::vector<RepetitionRecord>& reps,
                                                  const std::vector<std::string>& estimators,
                                                  double v_true, bool goal_domain);

std::string report_json(const ExperimentReport& report);

}  // namespace moeope
