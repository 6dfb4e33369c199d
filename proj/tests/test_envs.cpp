#include "helpers.hpp"

#include "moeope/core/error.hpp"
#include "moeope/envs/acrobot.hpp"
#include "moeope/envs/expression.hpp"
#include "moeope/envs/ode.hpp"
#include "moeope/envs/planning_toy.hpp"
#include "moeope/envs/tabular.hpp"
#include "moeope/envs/windy2d.hpp"
#include "moeope/experiment/reproduce.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

using namespace moeope;
using moeope::test::vec;

namespace {

Windy2DConfig windy_cfg(double k) {
  auto c = Windy2DConfig::defaults();
  c.wind_slope = k;
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(Windy, StepExamples) {
  const auto c = windy_cfg(0.1);
  const auto a = windy2d_step(c, vec({0, 0}), windy::up);
  EXPECT_EQ(a.next, vec({0, 1}));
  EXPECT_EQ(a.reward, -1.0);
  const auto b = windy2d_step(c, vec({0, 2}), windy::right);
  EXPECT_NEAR(b.next[0], 0.8, 1e-15);
  EXPECT_EQ(b.next[1], 2.0);
}

TEST(Windy, GoalIsTerminalAndReturnCountsSteps) {
  const Windy2D env(windy_cfg(0.0));
  EXPECT_TRUE(env.is_terminal(vec({8, 10})));
  EXPECT_FALSE(env.is_terminal(vec({8, 8})));
  Rng rng(0);
  const auto traj = rollout(env, *windy_eval_policy(), vec({0, 0}), 60, rng);
  EXPECT_TRUE(traj.terminated);
  EXPECT_EQ(trajectory_return(traj, 1.0), -double(traj.size()));
  EXPECT_EQ(traj.size(), 17u);
}

TEST(Windy, NoWindModelIsExactWithoutWind) {
  const auto c = windy_cfg(0.0);
  const auto model = windy_no_wind_model(c);
  for (std::uint32_t a = 0; a < 4; ++a)
    EXPECT_EQ(model->predict(vec({1.5, 3.0}), ActionId(a)).next, windy2d_step(c, vec({1.5, 3.0}), ActionId(a)).next);
}

TEST(Windy, ConfigValidation) {
  auto c = Windy2DConfig::defaults();
  c.step_size = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = Windy2DConfig::defaults();
  c.goal.hi = c.goal.lo;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(PlanningToy, StepExamples) {
  const auto a = planning_toy_step(vec({3, 0}), toy::r);
  EXPECT_EQ(a.next, vec({4, 0}));
  EXPECT_EQ(a.reward, 3.0);
  const auto b = planning_toy_step(vec({0, 0}), toy::d);
  EXPECT_EQ(b.next, vec({1, 1}));
  EXPECT_EQ(b.reward, 0.0);
}

TEST(PlanningToy, Policies) {
  const auto p = planning_toy_policies();
  EXPECT_EQ(p.eval->most_likely(vec({0, 0})), toy::d);
  EXPECT_EQ(p.eval->most_likely(vec({5, 3})), toy::r);
  EXPECT_EQ(p.eval->most_likely(vec({12, 3})), toy::d);
  EXPECT_EQ(p.behavior->most_likely(vec({2, 0})), toy::r);
  EXPECT_EQ(p.behavior->most_likely(vec({2, 1})), toy::d);
  EXPECT_EQ(p.behavior->most_likely(vec({0, 0})), toy::d);
  const auto starts = planning_toy_behavior_starts();
  ASSERT_EQ(starts.size(), 2u);
  EXPECT_EQ(starts[0], vec({0, 0}));
  EXPECT_EQ(starts[1], vec({1, 0}));
}

TEST(PlanningToy, RewardModels) {
  EXPECT_EQ(planning_toy_reward_model(ToyRewardModel::accurate, vec({12, 0})), 12.0);
  EXPECT_EQ(planning_toy_reward_model(ToyRewardModel::inaccurate, vec({12, 0})), -1.0);
  EXPECT_EQ(planning_toy_reward_model(ToyRewardModel::inaccurate, vec({10, 3})), 13.0);
}

TEST(PlanningToy, TrueReturnMatchesHandSteps) {
  const PlanningToy env(20);
  const auto p = planning_toy_policies();
  for (std::size_t T : {1u, 5u, 12u, 16u, 20u}) {
    double x1 = 0, x2 = 0, g = 0;
    for (std::size_t t = 0; t < T; ++t) {
      g += x1 + x2;
      const bool right = x1 >= 1 && x1 <= 11;
      x1 += 1;
      if (!right) x2 += 1;
    }
    Rng rng(0);
    EXPECT_EQ(trajectory_return(rollout(env, *p.eval, vec({0, 0}), T, rng), 1.0), g) << T;
  }
}

TEST(Acrobot, RestsWithoutGravityOrTorque) {
  AcrobotConfig c;
  c.g = 0.0;
  const auto p = acrobot_step(c, StateVec::Zero(4), ActionId(1));
  EXPECT_EQ(p.next, StateVec::Zero(4));
  EXPECT_EQ(p.reward, -1.0);
}

TEST(Acrobot, Rk4ConvergesAtFourthOrder) {
  const AcrobotConfig c;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 20; ++k) {
    const auto x = vec({u(rng) * 3, u(rng) * 3, u(rng) * 4, u(rng) * 4});
    const double torque = double(k % 3) - 1.0;
    const double h = 0.05;
    const double e1 = (acrobot_integrate(c, x, torque, h, 1) - acrobot_integrate(c, x, torque, h / 2, 2)).norm();
    const double e2 =
        (acrobot_integrate(c, x, torque, h / 2, 1) - acrobot_integrate(c, x, torque, h / 4, 2)).norm();
    EXPECT_GT(e1 / e2, 16.0) << k;
  }
}

TEST(Acrobot, GoalHeightThreshold) {
  const Acrobot env{AcrobotConfig{}};
  const double th = std::acos(-1.01 / 2.0);
  EXPECT_NEAR(acrobot_tip_height(vec({th, 0, 0, 0})), 1.01, 1e-12);
  EXPECT_TRUE(env.is_terminal(vec({th, 0, 0, 0})));
  EXPECT_FALSE(env.is_terminal(StateVec::Zero(4)));
  EXPECT_DOUBLE_EQ(acrobot_tip_height(StateVec::Zero(4)), -2.0);
}

TEST(Acrobot, StepWrapsAndClips) {
  const AcrobotConfig c;
  const auto p = acrobot_step(c, vec({3.1, -3.1, 12.0, 28.0}), ActionId(2));
  EXPECT_LE(std::abs(p.next[0]), std::numbers::pi);
  EXPECT_LE(std::abs(p.next[1]), std::numbers::pi);
  EXPECT_LE(std::abs(p.next[2]), c.max_vel1);
  EXPECT_LE(std::abs(p.next[3]), c.max_vel2);
}

TEST(Acrobot, HeightFilter) {
  const Acrobot env{AcrobotConfig{}};
  const auto ds = generate_dataset(env, *make_eps_greedy(acrobot_eval_policy(), 0.3), 5, 200, 2);
  EXPECT_EQ(filter_dataset_by_height(ds, std::numeric_limits<double>::infinity()).size(), ds.size());
  const auto none = filter_dataset_by_height(ds, -3.0);
  EXPECT_TRUE(none.empty());
  EXPECT_EQ(none.initial_states().size(), ds.initial_states().size());
  std::size_t count = 0;
  for (const auto& t : ds.transitions()) count += acrobot_tip_height(t.x) <= -1.0;
  const auto mixed = filter_dataset_by_height(ds, -1.0);
  EXPECT_EQ(mixed.size(), count);
  EXPECT_GT(count, 0u);
  EXPECT_LT(count, ds.size());
}

TEST(Expression, ParsesAndEvaluates) {
  const auto e = Expression::parse("2*x^2 - max(y, 3) / 4 + exp(0) - -1", {"x", "y"});
  const double vals[] = {3.0, 8.0};
  EXPECT_DOUBLE_EQ(e.evaluate(vals), 18.0 - 2.0 + 1.0 + 1.0);
  const auto f = Expression::parse("log10(100) + sqrt(16) + abs(-2) + pow(2, 3)", {});
  EXPECT_DOUBLE_EQ(f.evaluate({}), 2.0 + 4.0 + 2.0 + 8.0);
  const auto g = Expression::parse("-x^2", {"x"});
  const double x[] = {3.0};
  EXPECT_DOUBLE_EQ(g.evaluate(x), -9.0);
  EXPECT_THROW(Expression::parse("x +", {"x"}), Error);
  EXPECT_THROW(Expression::parse("z", {"x"}), Error);
  EXPECT_THROW(Expression::parse("foo(1)", {}), Error);
}

TEST(Ode, LinearDecayMatchesSolution) {
  ODESpec s;
  s.state_names = {"x"};
  s.rhs = {"-x"};
  s.actions = {OdeAction{"none", {}, {}}};
  s.dt = 0.01;
  s.steps_per_decision = 100;
  s.initial_state = {2.0};
  const OdeEnv env(s);
  EXPECT_NEAR(env.step(vec({2.0}), ActionId(0)).next[0], 2.0 * std::exp(-1.0), 1e-6);
}

TEST(Ode, ZeroRhsAndImpulse) {
  ODESpec s;
  s.state_names = {"a", "b"};
  s.rhs = {"0", "0"};
  s.actions = {OdeAction{"none", {}, {}}, OdeAction{"kick", {}, {{"b", 1.5}}}};
  s.reward = "a + b";
  s.initial_state = {1.0, 2.0};
  const OdeEnv env(s);
  const auto p = env.step(vec({1.0, 2.0}), ActionId(0));
  EXPECT_EQ(p.next, vec({1.0, 2.0}));
  EXPECT_DOUBLE_EQ(p.reward, 3.0);
  EXPECT_EQ(env.step(vec({1.0, 2.0}), ActionId(1)).next, vec({1.0, 3.5}));
}

TEST(Ode, ActionParametersApply) {
  ODESpec s;
  s.state_names = {"x"};
  s.params = {{"u", 0.0}};
  s.rhs = {"u"};
  s.actions = {OdeAction{"off", {}, {}}, OdeAction{"on", {{"u", 2.0}}, {}}};
  s.dt = 0.1;
  s.steps_per_decision = 10;
  s.initial_state = {0.0};
  const OdeEnv env(s);
  EXPECT_NEAR(env.step(vec({0.0}), ActionId(1)).next[0], 2.0, 1e-12);
  EXPECT_EQ(env.step(vec({0.0}), ActionId(0)).next[0], 0.0);
}

TEST(Ode, DivergenceIsReported) {
  ODESpec s;
  s.state_names = {"x"};
  s.rhs = {"x*x"};
  s.actions = {OdeAction{"none", {}, {}}};
  s.dt = 0.01;
  s.steps_per_decision = 300;
  s.initial_state = {1.0};
  const OdeEnv env(s);
  EXPECT_THROW(env.step(vec({1.0}), ActionId(0)), Diverged);
}

TEST(Ode, SpecValidation) {
  ODESpec s;
  s.state_names = {"x"};
  s.rhs = {"-x", "x"};
  s.actions = {OdeAction{"none", {}, {}}};
  s.initial_state = {1.0};
  EXPECT_THROW(s.validate(), ConfigError);
  s.rhs = {"-x"};
  s.dt = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Ode, HivStepHalvingConverges) {
  const auto cfg = builtin_config("hiv_ode");
  const auto env = ode_env(cfg.env.ode);
  const auto* ode = dynamic_cast<const OdeEnv*>(env.get());
  ASSERT_NE(ode, nullptr);
  const auto& spec = ode->spec();
  Rng rng(0);
  StateVec x = env->sample_initial(rng);
  for (std::uint32_t k = 0; k < 6; ++k) {
    const ActionId a(k % 4);
    const StateVec raw = ode->to_raw(x);
    const StateVec coarse = ode->integrate(raw, a, spec.dt, spec.steps_per_decision);
    const StateVec fine = ode->integrate(raw, a, spec.dt / 2, 2 * spec.steps_per_decision);
    for (Eigen::Index i = 0; i < raw.size(); ++i)
      EXPECT_LT(std::abs(coarse[i] - fine[i]) / std::abs(fine[i]), 1e-5) << "step " << k << " var " << i;
    x = env->step(x, a).next;
  }
}

TEST(Ode, ShippedConfigMatchesBuiltin) {
  EXPECT_EQ(read_file(std::string(MOEOPE_SOURCE_DIR) + "/configs/hiv_ode.json"), builtin_config_text("hiv_ode"));
}

TEST(Tabular, ExactValueMatchesMonteCarlo) {
  const auto mdp = TabularMdp::random(3, 2, 5, 4);
  const UniformPolicy uniform(2);
  const Policy* pol = &uniform;
  double sum = 0.0;
  const int n = 20000;
  Rng rng(6);
  for (int i = 0; i < n; ++i) sum += trajectory_return(rollout(mdp, *pol, mdp.sample_initial(rng), 5, rng), 1.0);
  EXPECT_NEAR(sum / n, mdp.exact_value(*pol), 0.05);
}

TEST(Environments, StepIsBitwiseDeterministic) {
  const Windy2D w(windy_cfg(0.05));
  const Acrobot a{AcrobotConfig{}};
  const auto xw = vec({1.234, 5.678});
  const auto xa = vec({0.3, -0.2, 1.1, -0.7});
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(w.step(xw, windy::right).next, w.step(xw, windy::right).next);
    EXPECT_EQ(a.step(xa, ActionId(2)).next, a.step(xa, ActionId(2)).next);
  }
}

TEST(Environments, LoggedBehaviorProbabilitiesMatchPolicy) {
  const Windy2D env(windy_cfg(0.05));
  const auto behavior = make_eps_greedy(windy_behavior_policy(), 0.3);
  const auto ds = generate_dataset(env, *behavior, 5, 60, 9);
  for (const auto& t : ds.transitions()) {
    ASSERT_TRUE(t.behavior_prob);
    EXPECT_DOUBLE_EQ(*t.behavior_prob, behavior->probability(t.x, t.a));
    double total = 0.0;
    for (double p : behavior->probabilities(t.x)) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}
