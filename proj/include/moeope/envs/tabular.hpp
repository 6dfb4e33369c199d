#pragma once

#include "moeope/envs/environment.hpp"

#include <vector>

namespace moeope {

/// Finite deterministic MDP. The state is a 1-D vector holding the state index.
class TabularMdp final : public Environment {
 public:
  /// next[s][a] and reward[s][a]; start states drawn uniformly.
  TabularMdp(std::vector<std::vector<std::size_t>> next, std::vector<std::vector<double>> reward,
             std::size_t horizon, double gamma = 1.0);

  /// Random transitions and rewards in [0, 1] from `seed`.
  static TabularMdp random(std::size_t n_states, std::size_t n_actions, std::size_t horizon,
                           std::uint64_t seed, double gamma = 1.0);

  std::string name() const override { return "tabular"; }
  std::size_t dim() const override { return 1; }
  std::size_t n_actions() const override { return next_.front().size(); }
  std::size_t horizon() const override { return horizon_; }
  double gamma() const override { return gamma_; }
  Prediction step(const StateVec& x, ActionId a) const override;
  StateVec sample_initial(Rng& rng) const override;

  std::size_t n_states() const noexcept { return next_.size(); }
  static StateVec state(std::size_t s) { return StateVec::Constant(1, static_cast<double>(s)); }

  /// Expected return of `policy` by exhaustive enumeration over actions.
  double exact_value(const Policy& policy) const;

 private:
  std::vector<std::vector<std::size_t>> next_;
  std::vector<std::vector<double>> reward_;
  std::size_t horizon_;
  double gamma_;
};

}  // namespace moeope
