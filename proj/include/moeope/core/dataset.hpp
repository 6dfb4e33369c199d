#pragma once

#include "moeope/core/metric.hpp"
#include "moeope/core/types.hpp"

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace moeope {

/// Position of a transition in a dataset together with its query distance.
struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Immutable batch of observed transitions.
///
/// Keeps a per-action index sorted by (traj_id, t) so that neighbor queries
/// scan only the same-action transitions, and ties resolve to the smallest
/// (traj_id, t).
class Dataset {
 public:
  Dataset(std::vector<Transition> transitions, std::vector<StateVec> initial_states,
          std::size_t dim, std::size_t n_actions);

  static Dataset from_trajectories(const std::vector<Trajectory>& trajectories, std::size_t dim,
                                   std::size_t n_actions);

  const std::vector<Transition>& transitions() const noexcept { return transitions_; }
  const Transition& operator[](std::size_t i) const { return transitions_[i]; }
  const std::vector<StateVec>& initial_states() const noexcept { return initial_states_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t n_actions() const noexcept { return n_actions_; }
  std::size_t size() const noexcept { return transitions_.size(); }
  bool empty() const noexcept { return transitions_.empty(); }

  /// Indices of transitions taking action `a`, ordered by (traj_id, t).
  std::span<const std::size_t> indices_for(ActionId a) const;

  /// Dataset keeping only the transitions for which `keep` is true.
  template <typename Pred>
  Dataset filtered(Pred keep) const {
    std::vector<Transition> kept;
    for (const auto& tr : transitions_)
      if (keep(tr)) kept.push_back(tr);
    return Dataset(std::move(kept), initial_states_, dim_, n_actions_);
  }

  /// Trajectories reassembled from transitions grouped by traj_id.
  std::vector<Trajectory> trajectories() const;

 private:
  std::vector<Transition> transitions_;
  std::vector<StateVec> initial_states_;
  std::size_t dim_;
  std::size_t n_actions_;
  std::vector<std::vector<std::size_t>> by_action_;
};

/// Same-action transition whose start state is closest to `x`.
std::optional<Neighbor> nearest_transition(const Dataset& ds, const StateVec& x, ActionId a,
                                           const Metric& m);

/// All same-action transitions starting within distance `c` of `x`, nearest first.
std::vector<Neighbor> neighbors_within(const Dataset& ds, const StateVec& x, ActionId a, double c,
                                       const Metric& m);

}  // namespace moeope
