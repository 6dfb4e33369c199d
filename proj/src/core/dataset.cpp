#include "moeope/core/dataset.hpp"

#include "moeope/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <map>
#include <numeric>
#include <string>

namespace moeope {

Dataset::Dataset(std::vector<Transition> transitions, std::vector<StateVec> initial_states,
                 std::size_t dim, std::size_t n_actions)
    : transitions_(std::move(transitions)),
      initial_states_(std::move(initial_states)),
      dim_(dim),
      n_actions_(n_actions),
      by_action_(n_actions) {
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& tr = transitions_[i];
    if (static_cast<std::size_t>(tr.x.size()) != dim_ ||
        static_cast<std::size_t>(tr.x_next.size()) != dim_)
      throw DimensionMismatch("transition " + std::to_string(i) + " does not have dimension " +
                              std::to_string(dim_));
    if (tr.a.value >= n_actions_)
      throw Error("transition " + std::to_string(i) + " has action " +
                  std::to_string(tr.a.value) + " >= n_actions " + std::to_string(n_actions_));
    if (!std::isfinite(tr.r) || !all_finite(tr.x) || !all_finite(tr.x_next))
      throw Error("transition " + std::to_string(i) + " is not finite");
    by_action_[tr.a.value].push_back(i);
  }
  for (const auto& s : initial_states_)
    if (static_cast<std::size_t>(s.size()) != dim_)
      throw DimensionMismatch("initial state does not have dimension " + std::to_string(dim_));
  for (auto& idx : by_action_) {
    std::stable_sort(idx.begin(), idx.end(), [this](std::size_t l, std::size_t r) {
      const auto& a = transitions_[l];
      const auto& b = transitions_[r];
      return std::tie(a.traj_id, a.t) < std::tie(b.traj_id, b.t);
    });
  }
}

Dataset Dataset::from_trajectories(const std::vector<Trajectory>& trajectories, std::size_t dim,
                                   std::size_t n_actions) {
  std::vector<Transition> all;
  std::vector<StateVec> starts;
  for (const auto& traj : trajectories) {
    starts.push_back(traj.transitions.empty() ? traj.start : traj.transitions.front().x);
    all.insert(all.end(), traj.transitions.begin(), traj.transitions.end());
  }
  return Dataset(std::move(all), std::move(starts), dim, n_actions);
}

std::span<const std::size_t> Dataset::indices_for(ActionId a) const {
  if (a.value >= n_actions_) return {};
  return by_action_[a.value];
}

std::vector<Trajectory> Dataset::trajectories() const {
  std::map<std::int64_t, Trajectory> grouped;
  for (const auto& tr : transitions_) grouped[tr.traj_id].transitions.push_back(tr);
  std::vector<Trajectory> out;
  out.reserve(grouped.size());
  for (auto& [id, traj] : grouped) {
    std::sort(traj.transitions.begin(), traj.transitions.end(),
              [](const Transition& l, const Transition& r) { return l.t < r.t; });
    traj.start = traj.transitions.front().x;
    out.push_back(std::move(traj));
  }
  return out;
}

std::optional<Neighbor> nearest_transition(const Dataset& ds, const StateVec& x, ActionId a,
                                           const Metric& m) {
  if (static_cast<std::size_t>(x.size()) != ds.dim())
    throw DimensionMismatch("query state has dimension " + std::to_string(x.size()) +
                            ", dataset has " + std::to_string(ds.dim()));
  std::optional<Neighbor> best;
  for (std::size_t i : ds.indices_for(a)) {
    const double d = m.distance(x, ds[i].x);
    // indices are in (traj_id, t) order, so strict < keeps the earliest on ties
    if (!best || d < best->distance) best = Neighbor{i, d};
  }
  return best;
}

std::vector<Neighbor> neighbors_within(const Dataset& ds, const StateVec& x, ActionId a, double c,
                                       const Metric& m) {
  if (static_cast<std::size_t>(x.size()) != ds.dim())
    throw DimensionMismatch("query state has dimension " + std::to_string(x.size()) +
                            ", dataset has " + std::to_string(ds.dim()));
  std::vector<Neighbor> out;
  for (std::size_t i : ds.indices_for(a)) {
    const double d = m.distance(x, ds[i].x);
    if (d <= c) out.push_back(Neighbor{i, d});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Neighbor& l, const Neighbor& r) { return l.distance < r.distance; });
  return out;
}

}  // namespace moeope
