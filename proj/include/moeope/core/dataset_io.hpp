#pragma once

#include "moeope/core/dataset.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace moeope {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// CSV with header `traj_id,t,x_0..x_{d-1},a,r,y_0..y_{d-1}` and, when every
/// transition carries a behavior probability, a trailing `pb` column.
void write_dataset_csv(const Dataset& ds, std::ostream& out);

/// Sidecar descriptor {dim, n_actions, initial_states}.
std::string dataset_descriptor_json(const Dataset& ds);

void save_dataset(const Dataset& ds, const std::filesystem::path& csv_path);
/// Reads `csv_path` and its sidecar `<csv_path>.json`.
Dataset load_dataset(const std::filesystem::path& csv_path);
Dataset read_dataset(std::istream& csv, const std::string& descriptor_json);

}  // namespace moeope
