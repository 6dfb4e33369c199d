#pragma once

#include "moeope/envs/acrobot.hpp"
#include "moeope/envs/ode.hpp"
#include "moeope/envs/planning_toy.hpp"
#include "moeope/envs/windy2d.hpp"
#include "moeope/models/fit.hpp"
#include "moeope/simulator/simulator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace moeope {

enum class EnvType { windy2d, planning_toy, acrobot, ode };

struct EnvSpec {
  EnvType type = EnvType::windy2d;
  Windy2DConfig windy = Windy2DConfig::defaults();
  std::size_t toy_horizon = 16;
  AcrobotConfig acrobot;
  ODESpec ode;
  /// Drop behavior transitions starting above this tip height (Acrobot only).
  std::optional<double> filter_height;
};

/// Applies eps-greedy noise only where state[dim] compares to threshold.
struct TriggerSpec {
  std::size_t dim = 0;
  bool greater = true;
  double threshold = 0.0;
};

struct PolicySpec {
  /// "eval", "behavior", "uniform" or "constant".
  std::string base = "behavior";
  std::size_t action = 0;
  double eps = 0.0;
  std::optional<TriggerSpec> trigger;
};

struct ModelSpec {
  /// "analytic" uses the environment's closed-form model.
  std::string learner = "analytic";
  ParametricFitConfig fit;
  /// Fixed initialization seed; derived from the repetition seed when absent.
  std::optional<std::uint64_t> seed;
  ToyRewardModel toy_reward = ToyRewardModel::accurate;
};

struct ErrorMapGrid {
  std::vector<double> lo, hi;
  std::vector<std::size_t> resolution;
};

struct ExperimentConfig {
  std::string name = "experiment";
  EnvSpec env;
  PolicySpec behavior;
  PolicySpec eval{"eval", 0, 0.0, std::nullopt};
  std::size_t n_behavior_trajectories = 10;
  /// 0 means the environment horizon.
  std::size_t behavior_horizon = 0;
  ModelSpec model;
  std::vector<double> metric_weights;
  std::optional<double> L_t, L_r;
  std::optional<double> radius;
  SelectorConfig selector;
  /// sim.horizon of 0 means the environment horizon; sim.gamma defaults to the environment's.
  SimConfig sim;
  std::optional<double> sim_gamma;
  /// Use the environment's evaluation start states instead of the dataset's.
  bool eval_from_env_starts = false;
  std::vector<std::string> estimators{"M_p", "M_np", "MoE"};
  std::size_t n_repetitions = 1;
  std::size_t true_value_rollouts = 100;
  std::uint64_t seed = 0;
  std::optional<ErrorMapGrid> error_map;
  /// The config as given, echoed into reports.
  std::string source_json = "{}";

  void validate() const;
};

/// Parses and validates; throws ConfigError naming the offending field.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

/// Every accepted key with its type, default and meaning.
std::string config_schema_reference();

const std::vector<std::string>& known_estimators();

}  // namespace moeope
