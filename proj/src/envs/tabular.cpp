#include "moeope/envs/tabular.hpp"

#include "moeope/core/error.hpp"

#include <cmath>

namespace moeope {

TabularMdp::TabularMdp(std::vector<std::vector<std::size_t>> next,
                       std::vector<std::vector<double>> reward, std::size_t horizon, double gamma)
    : next_(std::move(next)), reward_(std::move(reward)), horizon_(horizon), gamma_(gamma) {
  if (next_.empty() || next_.size() != reward_.size()) throw Error("tabular tables disagree in size");
  for (std::size_t s = 0; s < next_.size(); ++s) {
    if (next_[s].size() != next_.front().size() || reward_[s].size() != next_[s].size() ||
        next_[s].empty())
      throw Error("tabular tables must be rectangular");
    for (std::size_t n : next_[s])
      if (n >= next_.size()) throw Error("tabular transition leaves the state set");
  }
}

TabularMdp TabularMdp::random(std::size_t n_states, std::size_t n_actions, std::size_t horizon,
                              std::uint64_t seed, double gamma) {
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n_states - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<std::size_t>> next(n_states, std::vector<std::size_t>(n_actions));
  std::vector<std::vector<double>> reward(n_states, std::vector<double>(n_actions));
  for (std::size_t s = 0; s < n_states; ++s)
    for (std::size_t a = 0; a < n_actions; ++a) {
      next[s][a] = pick(rng);
      reward[s][a] = u(rng);
    }
  return TabularMdp(std::move(next), std::move(reward), horizon, gamma);
}

Prediction TabularMdp::step(const StateVec& x, ActionId a) const {
  const auto s = static_cast<std::size_t>(std::lround(x[0]));
  if (s >= n_states() || a.value >= n_actions()) throw Error("tabular state or action out of range");
  return Prediction{state(next_[s][a.value]), reward_[s][a.value]};
}

StateVec TabularMdp::sample_initial(Rng& rng) const {
  return state(std::uniform_int_distribution<std::size_t>(0, n_states() - 1)(rng));
}

double TabularMdp::exact_value(const Policy& policy) const {
  std::vector<double> v(n_states(), 0.0);
  for (std::size_t k = 0; k < horizon_; ++k) {
    std::vector<double> nv(n_states(), 0.0);
    for (std::size_t s = 0; s < n_states(); ++s) {
      const auto p = policy.probabilities(state(s));
      for (std::size_t a = 0; a < n_actions(); ++a)
        nv[s] += p[a] * (reward_[s][a] + gamma_ * v[next_[s][a]]);
    }
    v = std::move(nv);
  }
  double total = 0.0;
  for (double x : v) total += x;
  return total / static_cast<double>(n_states());
}

}  // namespace moeope
