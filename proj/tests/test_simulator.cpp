#include "helpers.hpp"

#include "moeope/core/error.hpp"
#include "moeope/core/rng.hpp"
#include "moeope/envs/planning_toy.hpp"
#include "moeope/envs/windy2d.hpp"
#include "moeope/models/analytic.hpp"
#include "moeope/models/nonparametric.hpp"
#include "moeope/simulator/simulator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace moeope;
using moeope::test::tr;
using moeope::test::vec;

namespace {

struct ToySetup {
  std::shared_ptr<const Dataset> data;
  SelectionContext ctx;
};

ToySetup toy_setup(ModelPtr parametric, std::size_t behavior_len = 20) {
  const auto pol = planning_toy_policies();
  const PlanningToy env(behavior_len);
  ToySetup s;
  s.data = std::make_shared<const Dataset>(
      generate_dataset(env, *pol.behavior, 2, behavior_len, 1, planning_toy_behavior_starts()));
  s.ctx.errors = std::make_shared<const ErrorContext>(s.data, Metric(2), parametric);
  s.ctx.nonparametric = std::make_shared<NonparametricModel>(s.data, Metric(2));
  s.ctx.eval_policy = pol.eval;
  s.ctx.oracle = [](const StateVec& x, ActionId a) { return planning_toy_step(x, a); };
  return s;
}

ModelPtr toy_truth_model() {
  return std::make_shared<AnalyticModel>("truth", 2, 2, planning_toy_step);
}

SimConfig sim(SelectorMode mode, std::size_t horizon, std::size_t n = 4) {
  SimConfig c;
  c.n_rollouts = n;
  c.horizon = horizon;
  c.selector.mode = mode;
  c.seed = 17;
  c.initial_states = {planning_toy_eval_start()};
  return c;
}

}  // namespace

TEST(Simulator, PerfectModelsGiveTrueValue) {
  auto s = toy_setup(toy_truth_model());
  s.ctx.nonparametric = toy_truth_model();
  const PlanningToy env(16);
  const auto pol = planning_toy_policies();
  const double v = evaluate_policy_true(env, *pol.eval, 1, 16, 1.0, 0, {planning_toy_eval_start()});
  for (auto mode : {SelectorMode::parametric, SelectorMode::nonparametric, SelectorMode::greedy,
                    SelectorMode::mcts}) {
    auto c = sim(mode, 16, 2);
    c.selector.mcts_budget = 16;
    EXPECT_DOUBLE_EQ(simulate_value(s.ctx, c).v_hat, v) << to_string(mode);
  }
}

TEST(Simulator, NonparametricPathMatchesHandSteppedOracle) {
  const auto s = toy_setup(planning_toy_parametric_model(ToyRewardModel::accurate));
  const auto pol = planning_toy_policies();
  const auto est = simulate_value(s.ctx, sim(SelectorMode::nonparametric, 16, 1));
  StateVec x = planning_toy_eval_start();
  std::vector<StateVec> oracle{x};
  double g = 0.0;
  for (int t = 0; t < 16; ++t) {
    const ActionId a = pol.eval->most_likely(x);
    const Transition* best = nullptr;
    double bd = 0.0;
    for (const auto& t2 : s.data->transitions()) {
      if (t2.a != a) continue;
      const double d = (t2.x - x).norm();
      if (!best || d < bd) {
        best = &t2;
        bd = d;
      }
    }
    ASSERT_NE(best, nullptr);
    g += best->r;
    x = best->x_next;
    oracle.push_back(x);
  }
  EXPECT_EQ(est.rollouts[0].trajectory.states(), oracle);
  EXPECT_DOUBLE_EQ(est.v_hat, g);
}

TEST(Simulator, SingleExpertModesMatchStandaloneModels) {
  const auto s = toy_setup(planning_toy_parametric_model(ToyRewardModel::inaccurate));
  const auto est = simulate_value(s.ctx, sim(SelectorMode::parametric, 16, 1));
  StateVec x = planning_toy_eval_start();
  double g = 0.0;
  const auto pol = planning_toy_policies();
  const auto model = planning_toy_parametric_model(ToyRewardModel::inaccurate);
  for (int t = 0; t < 16; ++t) {
    const auto p = model->predict(x, pol.eval->most_likely(x));
    g += p.reward;
    x = p.next;
  }
  EXPECT_DOUBLE_EQ(est.v_hat, g);
  EXPECT_EQ(est.model_usage.parametric, 16u);
  EXPECT_EQ(est.model_usage.nonparametric, 0u);
}

TEST(Simulator, UsageSumsToStepsAndMeanIsAverage) {
  const auto s = toy_setup(planning_toy_parametric_model(ToyRewardModel::accurate));
  auto c = sim(SelectorMode::greedy, 12, 5);
  c.initial_states.clear();
  const auto est = simulate_value(s.ctx, c);
  std::size_t steps = 0;
  for (const auto& r : est.rollouts) steps += r.steps;
  EXPECT_EQ(est.model_usage.total(), steps);
  std::size_t by_step = 0;
  for (const auto& u : est.usage_by_step) by_step += u.total();
  EXPECT_EQ(by_step, steps);
  const double mean = std::accumulate(est.per_rollout_returns.begin(), est.per_rollout_returns.end(), 0.0) /
                      double(est.per_rollout_returns.size());
  EXPECT_DOUBLE_EQ(est.v_hat, mean);
}

TEST(Simulator, SeedDeterminismAndOrderInvariance) {
  const auto s = toy_setup(planning_toy_parametric_model(ToyRewardModel::accurate));
  auto c = sim(SelectorMode::greedy, 10, 6);
  c.initial_states.clear();
  const auto a = simulate_value(s.ctx, c);
  const auto b = simulate_value(s.ctx, c);
  EXPECT_EQ(a.per_rollout_returns, b.per_rollout_returns);
  auto returns = a.per_rollout_returns;
  std::reverse(returns.begin(), returns.end());
  EXPECT_DOUBLE_EQ(std::accumulate(returns.begin(), returns.end(), 0.0) / 6.0, a.v_hat);
  for (const auto& r : a.rollouts) {
    Rng rng(r.seed);
    const auto& starts = s.data->initial_states();
    const auto pick = std::uniform_int_distribution<std::size_t>(0, starts.size() - 1)(rng);
    const auto again = simulate_rollout(s.ctx, c, starts[pick], rng);
    EXPECT_EQ(again.ret, r.ret);
  }
}

TEST(Simulator, WindyNonparametricNeverReachesGoal) {
  const auto cfg = Windy2DConfig::defaults();
  const Windy2D env(cfg);
  auto data = std::make_shared<const Dataset>(generate_dataset(env, *windy_behavior_policy(), 10, 60, 3));
  SelectionContext ctx;
  ctx.errors = std::make_shared<const ErrorContext>(data, Metric(2), windy_no_wind_model(cfg));
  ctx.nonparametric = std::make_shared<NonparametricModel>(data, Metric(2));
  ctx.eval_policy = windy_eval_policy();
  ctx.is_terminal = [&env](const StateVec& x) { return env.is_terminal(x); };
  SimConfig c;
  c.n_rollouts = 10;
  c.horizon = 60;
  c.selector.mode = SelectorMode::nonparametric;
  const auto est = simulate_value(ctx, c);
  EXPECT_EQ(est.n_unreached_goal, 10u);
  EXPECT_DOUBLE_EQ(est.v_hat, -60.0);
}

TEST(Simulator, MissingSupportThrowsOrFreezes) {
  auto data = std::make_shared<const Dataset>(test::dataset({tr(vec({0, 0}), 1, 1.0, vec({1, 1}))}, 2, 2));
  SelectionContext ctx;
  ctx.errors = std::make_shared<const ErrorContext>(data, Metric(2), planning_toy_parametric_model(ToyRewardModel::accurate));
  ctx.nonparametric = std::make_shared<NonparametricModel>(data, Metric(2));
  ctx.eval_policy = std::make_shared<DeterministicPolicy>(2, [](const StateVec&) { return toy::r; });
  SimConfig c;
  c.n_rollouts = 2;
  c.horizon = 5;
  c.selector.mode = SelectorMode::nonparametric;
  EXPECT_THROW(simulate_value(ctx, c), NoSupport);
  c.stuck_reward = -1.0;
  const auto est = simulate_value(ctx, c);
  EXPECT_DOUBLE_EQ(est.v_hat, -5.0);
  EXPECT_TRUE(est.rollouts[0].stuck);
  c.selector.mode = SelectorMode::greedy;
  c.stuck_reward.reset();
  EXPECT_EQ(simulate_value(ctx, c).model_usage.parametric, 10u);
}

TEST(TrajectoryError, Examples) {
  Trajectory a;
  a.start = vec({0, 0});
  Trajectory b = a;
  for (int t = 0; t < 9; ++t) {
    a.transitions.push_back(tr(vec({double(t), 0}), 0, 0, vec({double(t + 1), 0}), 0, t));
    const double off = 0.1;
    b.transitions.push_back(tr(vec({double(t), t == 0 ? 0.0 : off}), 0, 0, vec({double(t + 1), off}), 0, t));
  }
  EXPECT_EQ(trajectory_error(a, a, Metric(2)), 0.0);
  EXPECT_NEAR(trajectory_error(a, b, Metric(2)), 0.9, 1e-12);
  Trajectory c;
  c.start = vec({1, 0});
  EXPECT_THROW(trajectory_error(a, c, Metric(2)), Error);
  Trajectory shorter = b;
  shorter.transitions.resize(4);
  EXPECT_NEAR(trajectory_error(a, shorter, Metric(2)), 0.4, 1e-12);
}

TEST(TrajectoryError, RecomputedFromLoggedStates) {
  const auto s = toy_setup(planning_toy_parametric_model(ToyRewardModel::accurate));
  const auto est = simulate_value(s.ctx, sim(SelectorMode::greedy, 16, 1));
  const PlanningToy env(16);
  Rng rng(0);
  const auto truth = rollout(env, *planning_toy_policies().eval, planning_toy_eval_start(), 16, rng);
  const auto sim_states = est.rollouts[0].trajectory.states();
  const auto true_states = truth.states();
  double sum = 0.0;
  for (std::size_t t = 0; t < std::min(sim_states.size(), true_states.size()); ++t)
    sum += std::hypot(sim_states[t][0] - true_states[t][0], sim_states[t][1] - true_states[t][1]);
  EXPECT_NEAR(trajectory_error(est.rollouts[0].trajectory, truth, Metric(2)), sum, 1e-12);
}

TEST(TrueValue, Examples) {
  const PlanningToy env(6);
  const auto pol = planning_toy_policies();
  StateVec x = planning_toy_eval_start();
  double g = 0.0;
  for (int t = 0; t < 6; ++t) {
    const auto p = planning_toy_step(x, pol.eval->most_likely(x));
    g += p.reward;
    x = p.next;
  }
  EXPECT_DOUBLE_EQ(evaluate_policy_true(env, *pol.eval, 7, 6, 1.0, 3, {planning_toy_eval_start()}), g);

  auto cfg = Windy2DConfig::defaults();
  cfg.wind_slope = 0.0;
  const Windy2D windy(cfg);
  const auto up = std::make_shared<DeterministicPolicy>(4, [](const StateVec&) { return windy::up; });
  const auto start = vec({8, 0});
  EXPECT_DOUBLE_EQ(evaluate_policy_true(windy, *up, 3, 60, 1.0, 0, {start}), -9.0);
}

TEST(RolloutJson, HasExpectedFields) {
  RolloutRecord r;
  r.seed = 4;
  r.ret = -3.5;
  r.steps = 2;
  const auto line = rollout_json_line(r);
  EXPECT_EQ(line, "{\"seed\":4,\"return\":-3.5,\"steps\":2,\"reached_goal\":false,\"stuck\":false,"
                  "\"parametric_steps\":0,\"nonparametric_steps\":0}");
}
