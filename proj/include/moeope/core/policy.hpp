#pragma once

#include "moeope/core/types.hpp"

#include <functional>
#include <memory>
#include <random>
#include <vector>

namespace moeope {

using Rng = std::mt19937_64;

/// Maps a state to a probability vector over the discrete actions.
///
/// Deterministic policies are the one-hot case. `sample` always consumes
/// exactly one uniform draw, so random streams stay aligned between runs that
/// differ only in which dynamics model is used.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::size_t n_actions() const = 0;
  virtual std::vector<double> probabilities(const StateVec& x) const = 0;

  double probability(const StateVec& x, ActionId a) const;
  ActionId sample(const StateVec& x, Rng& rng) const;
  /// Highest-probability action, lowest index on ties.
  ActionId most_likely(const StateVec& x) const;
};

using PolicyPtr = std::shared_ptr<const Policy>;

/// Throws unless `p` is a valid probability vector (nonnegative, sums to 1 within 1e-9).
void validate_probabilities(const std::vector<double>& p);

class DeterministicPolicy final : public Policy {
 public:
  using Rule = std::function<ActionId(const StateVec&)>;

  DeterministicPolicy(std::size_t n_actions, Rule rule);

  std::size_t n_actions() const override { return n_actions_; }
  std::vector<double> probabilities(const StateVec& x) const override;
  ActionId action(const StateVec& x) const { return rule_(x); }

 private:
  std::size_t n_actions_;
  Rule rule_;
};

class UniformPolicy final : public Policy {
 public:
  explicit UniformPolicy(std::size_t n_actions) : n_actions_(n_actions) {}
  std::size_t n_actions() const override { return n_actions_; }
  std::vector<double> probabilities(const StateVec& x) const override;

 private:
  std::size_t n_actions_;
};

/// Epsilon-greedy perturbation of a base policy.
///
/// Where the trigger holds (everywhere when no trigger is given) the base
/// policy's most likely action gets 1 - eps + eps/|A| and every other action
/// eps/|A|. Elsewhere the base policy is returned unchanged.
class EpsGreedyPolicy final : public Policy {
 public:
  using Trigger = std::function<bool(const StateVec&)>;

  EpsGreedyPolicy(PolicyPtr base, double eps, Trigger trigger = {});

  std::size_t n_actions() const override { return base_->n_actions(); }
  std::vector<double> probabilities(const StateVec& x) const override;
  double eps() const noexcept { return eps_; }

 private:
  PolicyPtr base_;
  double eps_;
  Trigger trigger_;
};

PolicyPtr make_eps_greedy(PolicyPtr base, double eps, EpsGreedyPolicy::Trigger trigger = {});

}  // namespace moeope
