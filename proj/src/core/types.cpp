#include "moeope/core/types.hpp"

#include "moeope/core/error.hpp"

#include <string>

namespace moeope {

bool all_finite(const StateVec& x) { return x.allFinite(); }

std::vector<StateVec> Trajectory::states() const {
  std::vector<StateVec> out;
  out.reserve(transitions.size() + 1);
  out.push_back(transitions.empty() ? start : transitions.front().x);
  for (const auto& tr : transitions) out.push_back(tr.x_next);
  return out;
}

void validate_trajectory(const Trajectory& traj) {
  for (std::size_t k = 0; k < traj.transitions.size(); ++k) {
    const auto& tr = traj.transitions[k];
    if (tr.x.size() != tr.x_next.size())
      throw DimensionMismatch("transition " + std::to_string(k) + " changes state dimension");
    if (tr.t != static_cast<std::int64_t>(k))
      throw Error("transition " + std::to_string(k) + " has time index " + std::to_string(tr.t));
    if (k + 1 < traj.transitions.size() && tr.x_next != traj.transitions[k + 1].x)
      throw Error("transitions " + std::to_string(k) + " and " + std::to_string(k + 1) +
                  " do not chain");
  }
}

double trajectory_return(const Trajectory& traj, double gamma) {
  double g = 0.0;
  double discount = 1.0;
  for (const auto& tr : traj.transitions) {
    g += discount * tr.r;
    discount *= gamma;
  }
  return g;
}

}  // namespace moeope
