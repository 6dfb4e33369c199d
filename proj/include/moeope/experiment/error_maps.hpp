#pragma once

#include "moeope/experiment/runner.hpp"

#include <string>
#include <vector>

namespace moeope {

struct ErrorMapRow {
  StateVec x;
  ActionId action;
  ErrorEstimate true_np, est_np, true_p, est_p;
  ModelKind selected = ModelKind::parametric;
  bool fallback = false;
  bool correct = false;
};

/// "parametric", "nonparametric" or "parametric_fallback".
std::string selected_label(const ErrorMapRow& row);

/// Error estimates and the greedy choice at every grid point and action of a
/// 2-D environment, using the data and models of the first repetition.
std::vector<ErrorMapRow> emit_error_maps(const ExperimentConfig& cfg, const ErrorMapGrid& grid);

/// Same, at caller-chosen points against an already prepared repetition.
std::vector<ErrorMapRow> error_map_rows(const PreparedRepetition& prep, const SelectorConfig& selector,
                                        const std::vector<StateVec>& points);

std::string error_map_csv(const std::vector<ErrorMapRow>& rows);

/// Fraction of rows flagged correct.
double correct_fraction(const std::vector<ErrorMapRow>& rows);

}  // namespace moeope
