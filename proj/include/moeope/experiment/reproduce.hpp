#pragma once

#include "moeope/experiment/runner.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace moeope {

enum class ReproduceTarget { table1, table2, consistency };

ReproduceTarget reproduce_target_from_string(const std::string& s);

/// Names of the configs shipped with the tool (also under configs/).
const std::vector<std::string>& builtin_config_names();
std::string builtin_config_text(const std::string& name);
ExperimentConfig builtin_config(const std::string& name);

/// Per-repetition check of the windy 2-D sign pattern.
struct Table1Summary {
  std::size_t n_repetitions = 0;
  std::size_t np_never_reached = 0;
  std::size_t p_overestimates = 0;
  std::size_t moe_closest = 0;
  std::size_t all_hold = 0;

  double fraction_all_hold() const {
    return n_repetitions == 0 ? 0.0 : static_cast<double>(all_hold) / static_cast<double>(n_repetitions);
  }
};

Table1Summary summarize_table1(const ExperimentReport& report);

struct Table2Row {
  std::string variant;
  double v_true = 0.0;
  /// Absolute value error per estimator.
  std::map<std::string, double> abs_error;
  bool mcts_strictly_best = false;
  bool greedy_worse_than_mcts = false;
};

Table2Row summarize_table2(const std::string& variant, const ExperimentReport& report);

struct ConsistencyPoint {
  std::size_t n_trajectories = 0;
  double median_abs_error = 0.0;
  double rmse = 0.0;
};

/// Runs the greedy MoE estimator of the consistency config at each data size.
std::vector<ConsistencyPoint> run_consistency(const ExperimentConfig& base,
                                              const std::vector<std::size_t>& sizes, std::size_t jobs);

/// Runs the built-in experiments of `target` and returns the JSON report.
/// `seed` replaces every config's master seed.
std::string reproduce(ReproduceTarget target, std::optional<std::uint64_t> seed, std::size_t jobs);

}  // namespace moeope
