#include "moeope/envs/environment.hpp"

#include "moeope/core/error.hpp"
#include "moeope/core/rng.hpp"

namespace moeope {

Trajectory rollout(const Environment& env, const Policy& policy, const StateVec& x0,
                   std::size_t horizon, Rng& rng, std::int64_t traj_id) {
  Trajectory traj;
  traj.start = x0;
  StateVec x = x0;
  for (std::size_t t = 0; t < horizon; ++t) {
    if (env.is_terminal(x)) {
      traj.terminated = true;
      return traj;
    }
    const ActionId a = policy.sample(x, rng);
    auto out = env.step(x, a);
    Transition tr;
    tr.x = x;
    tr.a = a;
    tr.r = out.reward;
    tr.x_next = out.next;
    tr.traj_id = traj_id;
    tr.t = static_cast<std::int64_t>(t);
    tr.behavior_prob = policy.probability(x, a);
    traj.transitions.push_back(std::move(tr));
    x = std::move(out.next);
  }
  traj.terminated = env.is_terminal(x);
  return traj;
}

std::vector<Trajectory> generate_trajectories(const Environment& env, const Policy& behavior,
                                              std::size_t n, std::size_t horizon,
                                              std::uint64_t seed,
                                              const std::vector<StateVec>& starts) {
  std::vector<Trajectory> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i));
    const StateVec x0 = starts.empty() ? env.sample_initial(rng) : starts[i % starts.size()];
    out.push_back(rollout(env, behavior, x0, horizon, rng, static_cast<std::int64_t>(i)));
  }
  return out;
}

Dataset generate_dataset(const Environment& env, const Policy& behavior, std::size_t n,
                         std::size_t horizon, std::uint64_t seed,
                         const std::vector<StateVec>& starts) {
  return Dataset::from_trajectories(generate_trajectories(env, behavior, n, horizon, seed, starts),
                                    env.dim(), env.n_actions());
}

bool Box::contains(const StateVec& x) const {
  return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

StateVec Box::sample(Rng& rng) const {
  StateVec x(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    x[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
  return x;
}

void Box::validate(const std::string& path) const {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw ConfigError(path, "lo and hi must be nonempty and of equal length");
  if (!(lo.array() < hi.array()).all()) throw ConfigError(path, "box is degenerate");
}

}  // namespace moeope
