#include "moeope/core/policy.hpp"

#include "moeope/core/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace moeope {

void validate_probabilities(const std::vector<double>& p) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error("policy returned a negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw Error("policy probabilities sum to " + std::to_string(total));
}

double Policy::probability(const StateVec& x, ActionId a) const {
  const auto p = probabilities(x);
  return a.value < p.size() ? p[a.value] : 0.0;
}

ActionId Policy::sample(const StateVec& x, Rng& rng) const {
  const auto p = probabilities(x);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    last_positive = i;
    acc += p[i];
    if (u < acc) return ActionId(static_cast<std::uint32_t>(i));
  }
  return ActionId(static_cast<std::uint32_t>(last_positive));
}

ActionId Policy::most_likely(const StateVec& x) const {
  const auto p = probabilities(x);
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[best]) best = i;
  return ActionId(static_cast<std::uint32_t>(best));
}

DeterministicPolicy::DeterministicPolicy(std::size_t n_actions, Rule rule)
    : n_actions_(n_actions), rule_(std::move(rule)) {}

std::vector<double> DeterministicPolicy::probabilities(const StateVec& x) const {
  const ActionId a = rule_(x);
  if (a.value >= n_actions_)
    throw Error("deterministic policy chose action " + std::to_string(a.value));
  std::vector<double> p(n_actions_, 0.0);
  p[a.value] = 1.0;
  return p;
}

std::vector<double> UniformPolicy::probabilities(const StateVec&) const {
  return std::vector<double>(n_actions_, 1.0 / static_cast<double>(n_actions_));
}

EpsGreedyPolicy::EpsGreedyPolicy(PolicyPtr base, double eps, Trigger trigger)
    : base_(std::move(base)), eps_(eps), trigger_(std::move(trigger)) {
  if (!(eps_ >= 0.0 && eps_ <= 1.0)) throw Error("eps must lie in [0, 1]");
}

std::vector<double> EpsGreedyPolicy::probabilities(const StateVec& x) const {
  if (trigger_ && !trigger_(x)) return base_->probabilities(x);
  const std::size_t n = base_->n_actions();
  const ActionId greedy = base_->most_likely(x);
  std::vector<double> p(n, eps_ / static_cast<double>(n));
  p[greedy.value] += 1.0 - eps_;
  return p;
}

PolicyPtr make_eps_greedy(PolicyPtr base, double eps, EpsGreedyPolicy::Trigger trigger) {
  return std::make_shared<EpsGreedyPolicy>(std::move(base), eps, std::move(trigger));
}

}  // namespace moeope
