#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

namespace moeope {

/// A point in the environment's state space.
using StateVec = Eigen::VectorXd;

/// Index into an environment's discrete action set.
struct ActionId {
  std::uint32_t value = 0;

  constexpr ActionId() = default;
  constexpr explicit ActionId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(ActionId, ActionId) = default;
};

bool all_finite(const StateVec& x);

/// One observed step (x, a, r, x').
struct Transition {
  StateVec x;
  ActionId a;
  double r = 0.0;
  StateVec x_next;
  std::int64_t traj_id = 0;
  std::int64_t t = 0;
  /// pi_b(a | x) recorded at collection time, if known.
  std::optional<double> behavior_prob;
};

struct Trajectory {
  StateVec start;
  std::vector<Transition> transitions;
  /// True when a terminal condition was reached before the horizon.
  bool terminated = false;

  /// Visited states x_0 .. x_T (one more than the number of transitions).
  std::vector<StateVec> states() const;
  std::size_t size() const noexcept { return transitions.size(); }
};

/// Throws if consecutive transitions do not chain or time indices are not 0,1,2,...
void validate_trajectory(const Trajectory& traj);

/// Discounted return sum_t gamma^t r_t.
double trajectory_return(const Trajectory& traj, double gamma);

}  // namespace moeope
