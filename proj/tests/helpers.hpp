#pragma once

#include "moeope/core/dataset.hpp"

#include <initializer_list>
#include <vector>

namespace moeope::test {

inline StateVec vec(std::initializer_list<double> v) {
  StateVec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x[i++] = e;
  return x;
}

inline Transition tr(StateVec x, std::uint32_t a, double r, StateVec y, std::int64_t traj = 0,
                     std::int64_t t = 0) {
  Transition out;
  out.x = std::move(x);
  out.a = ActionId(a);
  out.r = r;
  out.x_next = std::move(y);
  out.traj_id = traj;
  out.t = t;
  return out;
}

inline Dataset dataset(std::vector<Transition> ts, std::size_t dim, std::size_t n_actions) {
  std::vector<StateVec> starts;
  for (const auto& t : ts)
    if (t.t == 0) starts.push_back(t.x);
  return Dataset(std::move(ts), std::move(starts), dim, n_actions);
}

}  // namespace moeope::test
