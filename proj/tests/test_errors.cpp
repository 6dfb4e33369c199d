#include "helpers.hpp"

#include "moeope/core/error.hpp"
#include "moeope/envs/windy2d.hpp"
#include "moeope/estimation/bounds.hpp"
#include "moeope/estimation/error_estimates.hpp"
#include "moeope/models/analytic.hpp"
#include "moeope/models/ridge.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace moeope;
using moeope::test::tr;
using moeope::test::vec;

namespace {

ModelPtr shift_model(double dx, double r = 0.0) {
  return std::make_shared<AnalyticModel>("shift", 1, 1, [dx, r](const StateVec& x, ActionId) {
    return Prediction{x.array() + dx, r};
  });
}

Dataset random_2d(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<Transition> ts;
  for (int i = 0; i < n; ++i) {
    const auto x = vec({u(rng), u(rng)});
    const auto y = vec({std::sin(x[0]) + x[1], 0.5 * x[0] * x[1]});
    ts.push_back(tr(x, std::uint32_t(i % 2), std::cos(x[0]), y, i, 0));
  }
  return test::dataset(ts, 2, 2);
}

}  // namespace

TEST(Bounds, RollforwardExamples) {
  BoundParams p;
  double d = 0.0;
  for (int t = 0; t < 5; ++t) d = rollforward_state_error(d, p, 0.0);
  EXPECT_EQ(d, 0.0);
  d = 0.0;
  for (int t = 0; t < 7; ++t) d = rollforward_state_error(d, p, 0.3);
  EXPECT_NEAR(d, 7 * 0.3, 1e-12);
  p.L_t = 2.0;
  EXPECT_DOUBLE_EQ(rollforward_state_error(rollforward_state_error(0.0, p, 1.0), p, 1.0), 3.0);
}

TEST(Bounds, ReturnBoundExamples) {
  const std::vector<double> zero(4, 0.0);
  EXPECT_EQ(return_error_bound(zero, zero, BoundParams{}), 0.0);
  const std::vector<double> et{0.5, 0.0}, er{0.1, 0.2};
  EXPECT_NEAR(return_error_bound(et, er, BoundParams{}), 0.8, 1e-15);
}

TEST(Bounds, ClosedFormMatchesRecursion) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 20; ++k) {
    BoundParams p;
    p.L_t = 0.5 + 1.5 * u(rng);
    std::vector<double> e(10);
    for (auto& v : e) v = u(rng);
    double d = 0.0;
    for (std::size_t t = 1; t <= e.size(); ++t) {
      d = rollforward_state_error(d, p, e[t - 1]);
      EXPECT_NEAR(d, state_error_closed_form(e, p.L_t, t), 1e-12 * std::max(1.0, d));
    }
  }
}

TEST(Bounds, ParameterValidation) {
  BoundParams p;
  p.gamma = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.L_t = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Lipschitz, ConstantRatio) {
  std::vector<std::pair<Transition, Transition>> pairs;
  for (double a : {0.0, 1.0, 3.0})
    for (double b : {0.5, 2.0}) pairs.push_back({tr(vec({a}), 0, 0, vec({2 * a})), tr(vec({b}), 0, 0, vec({2 * b}))});
  EXPECT_DOUBLE_EQ(estimate_lipschitz(pairs, Metric(1)).L_t_hat, 2.0);
}

TEST(Lipschitz, SinglePair) {
  const auto est = estimate_lipschitz({{tr(vec({0}), 0, 0, vec({0})), tr(vec({1}), 0, 1.5, vec({3}))}}, Metric(1));
  EXPECT_DOUBLE_EQ(est.L_t_hat, 3.0);
  EXPECT_DOUBLE_EQ(est.L_r_hat, 1.5);
  EXPECT_EQ(est.n_pairs, 1u);
}

TEST(Lipschitz, CoincidentStartsAreSkipped) {
  const auto a = tr(vec({1}), 0, 0, vec({0}));
  const auto b = tr(vec({1}), 0, 0, vec({5}));
  EXPECT_THROW(estimate_lipschitz({{a, b}}, Metric(1)), InsufficientPairs);
  EXPECT_THROW(estimate_lipschitz({}, Metric(1)), InsufficientPairs);
}

TEST(Lipschitz, GlobalMatchesBruteForce) {
  const auto ds = random_2d(60, 4);
  const Metric m(2);
  double best_t = 0.0, best_r = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = 0; j < ds.size(); ++j) {
      if (i == j || ds[i].a != ds[j].a) continue;
      const double dx = m.distance(ds[i].x, ds[j].x);
      if (dx == 0.0) continue;
      best_t = std::max(best_t, m.distance(ds[i].x_next, ds[j].x_next) / dx);
      best_r = std::max(best_r, std::abs(ds[i].r - ds[j].r) / dx);
    }
  const auto g = global_lipschitz(ds, m);
  ASSERT_TRUE(g);
  EXPECT_DOUBLE_EQ(g->L_t_hat, best_t);
  EXPECT_DOUBLE_EQ(g->L_r_hat, best_r);
}

TEST(NpError, ZeroAtObservedStart) {
  const auto ds = random_2d(30, 5);
  const auto e = np_error_estimate(ds, ds[3].x, ds[3].a, 10.0, Metric(2));
  EXPECT_TRUE(e.supported);
  EXPECT_EQ(e.eps_t, 0.0);
  EXPECT_EQ(e.eps_r, 0.0);
}

TEST(NpError, ProductOfLocalLipschitzAndDistance) {
  const auto ds = test::dataset({tr(vec({0}), 0, 0, vec({0}), 0, 0), tr(vec({1}), 0, 0, vec({2}), 1, 0)}, 1, 1);
  const auto e = np_error_estimate(ds, vec({1.5}), ActionId(0), 10.0, Metric(1));
  EXPECT_TRUE(e.supported);
  EXPECT_DOUBLE_EQ(e.eps_t, 1.0);
}

TEST(NpError, UnsupportedWithoutNeighbors) {
  const auto ds = random_2d(30, 6);
  EXPECT_FALSE(np_error_estimate(ds, vec({50, 50}), ActionId(0), 1.0, Metric(2)).supported);
}

TEST(NpError, FallsBackToGlobalLipschitzWithOneNeighbor) {
  const auto ds = test::dataset({tr(vec({0}), 0, 0, vec({0}), 0, 0), tr(vec({1}), 0, 0, vec({4}), 1, 0),
                                 tr(vec({10}), 0, 0, vec({10}), 2, 0)},
                                1, 1);
  const auto g = global_lipschitz(ds, Metric(1));
  ASSERT_TRUE(g);
  EXPECT_DOUBLE_EQ(g->L_t_hat, 4.0);
  const auto e = np_error_estimate(ds, vec({10.5}), ActionId(0), 1.0, Metric(1));
  EXPECT_TRUE(e.supported);
  EXPECT_DOUBLE_EQ(e.eps_t, 4.0 * 0.5);
}

TEST(PError, ExactModelHasZeroError) {
  const auto ds = test::dataset({tr(vec({0}), 0, 0, vec({1}), 0, 0), tr(vec({1}), 0, 0, vec({2}), 1, 0)}, 1, 1);
  const auto e = p_error_estimate(ds, *shift_model(1.0), vec({0.5}), ActionId(0), 5.0, Metric(1));
  EXPECT_TRUE(e.supported);
  EXPECT_EQ(e.eps_t, 0.0);
}

TEST(PError, SingleNeighborResidual) {
  const auto ds = test::dataset({tr(vec({0}), 0, 0, vec({1.3}), 0, 0), tr(vec({9}), 0, 0, vec({10}), 1, 0)}, 1, 1);
  const auto e = p_error_estimate(ds, *shift_model(1.0), vec({0.2}), ActionId(0), 1.0, Metric(1));
  EXPECT_TRUE(e.supported);
  EXPECT_NEAR(e.eps_t, 0.3, 1e-12);
  EXPECT_FALSE(p_error_estimate(ds, *shift_model(1.0), vec({5}), ActionId(0), 1.0, Metric(1)).supported);
}

TEST(PError, RidgeMatchesLinearScan) {
  const auto ds = random_2d(80, 7);
  const auto model = RidgeModel::fit(ds, 0.1);
  const Metric m(2);
  const auto q = vec({0.3, -0.4});
  const double c = 1.1;
  for (std::uint32_t a = 0; a < 2; ++a) {
    double best_t = 0.0, best_r = 0.0;
    for (const auto& t : ds.transitions()) {
      if (t.a != ActionId(a) || m.distance(t.x, q) > c) continue;
      const auto p = model.predict(t.x, t.a);
      best_t = std::max(best_t, m.distance(p.next, t.x_next));
      best_r = std::max(best_r, std::abs(p.reward - t.r));
    }
    const auto e = p_error_estimate(ds, model, q, ActionId(a), c, m);
    EXPECT_DOUBLE_EQ(e.eps_t, best_t);
    EXPECT_DOUBLE_EQ(e.eps_r, best_r);
  }
}

TEST(Radius, RatioOfMeanErrorAndLipschitz) {
  const auto ds = test::dataset({tr(vec({0}), 0, 0, vec({2}), 0, 0), tr(vec({1}), 0, 0, vec({6}), 1, 0)}, 1, 1);
  EXPECT_DOUBLE_EQ(mean_parametric_error(ds, *shift_model(0.0), Metric(1)), 3.5);
  EXPECT_DOUBLE_EQ(choose_radius(ds, *shift_model(0.0), Metric(1)), 3.5 / 4.0);
  const auto perfect = test::dataset({tr(vec({0}), 0, 0, vec({1}), 0, 0), tr(vec({1}), 0, 0, vec({2}), 1, 0)}, 1, 1);
  EXPECT_EQ(choose_radius(perfect, *shift_model(1.0), Metric(1)), 0.0);
  const auto flat = test::dataset({tr(vec({0}), 0, 0, vec({5}), 0, 0), tr(vec({1}), 0, 0, vec({5}), 1, 0)}, 1, 1);
  EXPECT_EQ(choose_radius(flat, *shift_model(1.0), Metric(1)), std::numeric_limits<double>::infinity());
}

TEST(Radius, WindyDatasetRecomputation) {
  const auto cfg = Windy2DConfig::defaults();
  const Windy2D env(cfg);
  const auto ds = generate_dataset(env, *windy_behavior_policy(), 10, 60, 42);
  const auto model = windy_no_wind_model(cfg);
  const Metric m(2);
  double sum = 0.0;
  for (const auto& t : ds.transitions()) sum += m.distance(model->predict(t.x, t.a).next, t.x_next);
  double lip = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = i + 1; j < ds.size(); ++j) {
      if (ds[i].a != ds[j].a) continue;
      const double dx = m.distance(ds[i].x, ds[j].x);
      if (dx > 0) lip = std::max(lip, m.distance(ds[i].x_next, ds[j].x_next) / dx);
    }
  EXPECT_NEAR(choose_radius(ds, *model, m), sum / double(ds.size()) / lip, 1e-12);
}

TEST(TrueError, ExactAgainstOracle) {
  const auto truth = [](const StateVec& x, ActionId) { return Prediction{x.array() + 1.0, 2.0}; };
  const auto e = true_error(*shift_model(0.5, 1.5), truth, vec({0}), ActionId(0), Metric(1));
  EXPECT_DOUBLE_EQ(e.eps_t, 0.5);
  EXPECT_DOUBLE_EQ(e.eps_r, 0.5);
}

TEST(ErrorContext, AgreesWithFreeFunctions) {
  auto ds = std::make_shared<const Dataset>(random_2d(70, 8));
  const Metric m(2);
  const ModelPtr model = std::make_shared<RidgeModel>(RidgeModel::fit(*ds, 0.0));
  const ErrorContext ctx(ds, m, model);
  EXPECT_DOUBLE_EQ(ctx.radius(), choose_radius(*ds, *model, m));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int i = 0; i < 40; ++i) {
    const auto q = vec({u(rng), u(rng)});
    const ActionId a(std::uint32_t(i % 2));
    const auto np = ctx.np_error(q, a);
    const auto np_ref = np_error_estimate(*ds, q, a, ctx.radius(), m);
    EXPECT_EQ(np.supported, np_ref.supported);
    if (np.supported) {
      EXPECT_NEAR(np.eps_t, np_ref.eps_t, 1e-12);
      EXPECT_NEAR(np.eps_r, np_ref.eps_r, 1e-12);
    }
    const auto p = ctx.p_error(q, a);
    const auto p_ref = p_error_estimate(*ds, *model, q, a, ctx.radius(), m);
    EXPECT_EQ(p.supported, p_ref.supported);
    if (p.supported) EXPECT_NEAR(p.eps_t, p_ref.eps_t, 1e-12);
  }
}

TEST(ErrorContext, EmptyNeighborhoodCarriesMeanResidual) {
  auto ds = std::make_shared<const Dataset>(
      test::dataset({tr(vec({0}), 0, 0, vec({2}), 0, 0), tr(vec({1}), 0, 0, vec({6}), 1, 0)}, 1, 1));
  const ErrorContext ctx(ds, Metric(1), shift_model(0.0), 0.1);
  const auto p = ctx.p_error(vec({50}), ActionId(0));
  EXPECT_FALSE(p.supported);
  EXPECT_DOUBLE_EQ(p.eps_t, 3.5);
  EXPECT_FALSE(ctx.np_error(vec({50}), ActionId(0)).supported);
}
