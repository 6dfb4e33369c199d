#pragma once

#include "moeope/core/dataset.hpp"
#include "moeope/core/policy.hpp"
#include "moeope/models/dynamics_model.hpp"

#include <memory>
#include <string>

namespace moeope {

/// Deterministic ground-truth dynamics with a start distribution.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::size_t n_actions() const = 0;
  virtual std::size_t horizon() const = 0;
  virtual double gamma() const { return 1.0; }
  virtual Prediction step(const StateVec& x, ActionId a) const = 0;
  /// Episodes stop before acting from a terminal state.
  virtual bool is_terminal(const StateVec&) const { return false; }
  virtual StateVec sample_initial(Rng& rng) const = 0;
};

using EnvPtr = std::shared_ptr<const Environment>;

/// Runs `policy` from `x0` for at most `horizon` steps, stopping at terminal
/// states. Records pi(a|x) on every transition.
Trajectory rollout(const Environment& env, const Policy& policy, const StateVec& x0,
                   std::size_t horizon, Rng& rng, std::int64_t traj_id = 0);

/// Trajectory i starts from `starts[i % starts.size()]`, or from the
/// environment's start distribution when `starts` is empty, and uses its own
/// generator seeded with derive_seed(seed, i).
std::vector<Trajectory> generate_trajectories(const Environment& env, const Policy& behavior,
                                              std::size_t n, std::size_t horizon,
                                              std::uint64_t seed,
                                              const std::vector<StateVec>& starts = {});

Dataset generate_dataset(const Environment& env, const Policy& behavior, std::size_t n,
                         std::size_t horizon, std::uint64_t seed,
                         const std::vector<StateVec>& starts = {});

/// Axis-aligned box [lo, hi].
struct Box {
  StateVec lo;
  StateVec hi;

  bool contains(const StateVec& x) const;
  StateVec sample(Rng& rng) const;
  void validate(const std::string& path) const;
};

}  // namespace moeope
