#include "helpers.hpp"

#include "moeope/core/error.hpp"
#include "moeope/envs/planning_toy.hpp"
#include "moeope/envs/environment.hpp"
#include "moeope/models/fit.hpp"
#include "moeope/models/mlp.hpp"
#include "moeope/models/nonparametric.hpp"
#include "moeope/models/ridge.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace moeope;
using moeope::test::tr;
using moeope::test::vec;

namespace {

Dataset line_data(int n) {
  std::vector<Transition> ts;
  for (int i = 0; i < n; ++i) {
    const double x = -2.0 + 0.37 * i;
    ts.push_back(tr(vec({x}), 0, 2.0 * x, vec({x + 1.0}), i, 0));
  }
  return test::dataset(ts, 1, 2);
}

double fd_max_rel_error(MlpNetwork net, const MlpBatch& batch) {
  const Eigen::VectorXd g = mlp_gradient(net, batch);
  Eigen::VectorXd fd(g.size());
  const double h = 1e-5;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double keep = net.params()[i];
    net.params()[i] = keep + h;
    const double up = mlp_loss(net, batch);
    net.params()[i] = keep - h;
    const double down = mlp_loss(net, batch);
    net.params()[i] = keep;
    fd[i] = (up - down) / (2 * h);
  }
  return (g - fd).norm() / std::max(1e-12, std::max(g.norm(), fd.norm()));
}

}  // namespace

TEST(Ridge, RecoversLinearDynamicsExactly) {
  const auto m = RidgeModel::fit(line_data(12), 0.0);
  for (double x : {-1.5, 0.0, 0.9, 2.0}) {
    const auto p = m.predict(vec({x}), ActionId(0));
    EXPECT_NEAR(p.next[0], x + 1.0, 1e-8);
    EXPECT_NEAR(p.reward, 2.0 * x, 1e-8);
  }
}

TEST(Ridge, UnfittedActionRaises) {
  const auto m = RidgeModel::fit(line_data(5), 0.0);
  EXPECT_FALSE(m.supports(ActionId(1)));
  EXPECT_THROW(m.predict(vec({0}), ActionId(1)), NoSupport);
}

TEST(Ridge, SingleTransitionIsInterpolated) {
  const auto ds = test::dataset({tr(vec({0.3, -1.0}), 0, 4.0, vec({2.0, 5.0}))}, 2, 1);
  const auto p = RidgeModel::fit(ds, 0.0).predict(vec({0.3, -1.0}), ActionId(0));
  EXPECT_NEAR(p.next[0], 2.0, 1e-12);
  EXPECT_NEAR(p.next[1], 5.0, 1e-12);
  EXPECT_NEAR(p.reward, 4.0, 1e-12);
}

TEST(Ridge, MatchesNormalEquationsOnPlanningToyData) {
  const auto pol = planning_toy_policies();
  const PlanningToy env(20);
  const auto ds = generate_dataset(env, *pol.behavior, 2, 20, 3, planning_toy_behavior_starts());
  const auto m = RidgeModel::fit(ds, 0.0);
  for (std::uint32_t a = 0; a < 2; ++a) {
    const auto idx = ds.indices_for(ActionId(a));
    if (idx.size() < 4) continue;
    Eigen::MatrixXd X(idx.size(), 3);
    Eigen::MatrixXd Y(idx.size(), 3);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto& t = ds[idx[i]];
      X.row(Eigen::Index(i)) << 1.0, t.x[0], t.x[1];
      Y.row(Eigen::Index(i)) << t.x_next[0], t.x_next[1], t.r;
    }
    const Eigen::MatrixXd beta = X.completeOrthogonalDecomposition().solve(Y);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto& t = ds[idx[i]];
      const Eigen::RowVectorXd oracle = X.row(Eigen::Index(i)) * beta;
      const auto p = m.predict(t.x, ActionId(a));
      EXPECT_NEAR(p.next[0], oracle[0], 1e-8);
      EXPECT_NEAR(p.next[1], oracle[1], 1e-8);
      EXPECT_NEAR(p.reward, oracle[2], 1e-8);
    }
  }
}

TEST(Ridge, PenaltyShrinksSlopes) {
  const auto a = RidgeModel::fit(line_data(12), 0.0);
  const auto b = RidgeModel::fit(line_data(12), 50.0);
  EXPECT_LT(b.action_fit(ActionId(0))->coef.norm(), a.action_fit(ActionId(0))->coef.norm());
}

TEST(Ridge, SerializeRoundTrip) {
  const auto m = RidgeModel::fit(line_data(8), 0.1);
  const auto back = load_parametric_model(m.serialize());
  const auto x = vec({0.77});
  EXPECT_EQ(back->predict(x, ActionId(0)).next, m.predict(x, ActionId(0)).next);
  EXPECT_FALSE(back->supports(ActionId(1)));
}

TEST(Nonparametric, CopiesObservedTransition) {
  auto data = std::make_shared<const Dataset>(test::dataset(
      {tr(vec({0, 0}), 0, 3.0, vec({1, 2}), 0, 0), tr(vec({4, 4}), 0, 7.0, vec({9, 9}), 1, 0)}, 2, 2));
  const NonparametricModel m(data, Metric(2));
  const auto p = m.predict(vec({0, 0}), ActionId(0));
  EXPECT_EQ(p.next, vec({1, 2}));
  EXPECT_EQ(p.reward, 3.0);
  EXPECT_EQ(m.predict(vec({3.9, 4.2}), ActionId(0)).reward, 7.0);
  EXPECT_THROW(m.predict(vec({0, 0}), ActionId(1)), NoSupport);
}

TEST(Nonparametric, PlanningToySupportMatchesOracle) {
  const auto pol = planning_toy_policies();
  const PlanningToy env(10);
  auto data = std::make_shared<const Dataset>(
      generate_dataset(env, *pol.behavior, 2, 10, 1, planning_toy_behavior_starts()));
  const NonparametricModel m(data, Metric(2));
  EXPECT_EQ(m.predict(vec({0, 0}), toy::d).next, planning_toy_step(vec({0, 0}), toy::d).next);
}

TEST(PlanningToyModel, AnalyticPrediction) {
  const auto m = planning_toy_parametric_model(ToyRewardModel::accurate);
  for (auto a : {toy::r, toy::d}) EXPECT_EQ(m->predict(vec({3, 0}), a).next, vec({4, 0.5}));
}

TEST(Mlp, ZeroCaseHasZeroGradient) {
  MlpArchitecture arch{3, {4}, 2, Activation::tanh};
  const MlpNetwork net(arch, Eigen::VectorXd::Zero(Eigen::Index(arch.n_params())));
  const MlpBatch batch{Eigen::MatrixXd::Zero(3, 5), Eigen::MatrixXd::Zero(2, 5)};
  EXPECT_EQ(mlp_gradient(net, batch).norm(), 0.0);
}

TEST(Mlp, LinearSingleSampleMatchesLeastSquaresGradient) {
  MlpArchitecture arch{2, {}, 1, Activation::identity};
  Eigen::VectorXd params(3);
  params << 0.5, -1.0, 0.25;  // W (1x2) then b
  const MlpNetwork net(arch, params);
  Eigen::MatrixXd x(2, 1);
  x << 2.0, 3.0;
  Eigen::MatrixXd y(1, 1);
  y << 1.0;
  const double residual = 0.5 * 2.0 - 1.0 * 3.0 + 0.25 - 1.0;
  const Eigen::VectorXd g = mlp_gradient(net, {x, y});
  EXPECT_NEAR(g[0], 2 * residual * 2.0, 1e-12);
  EXPECT_NEAR(g[1], 2 * residual * 3.0, 1e-12);
  EXPECT_NEAR(g[2], 2 * residual, 1e-12);
}

TEST(Mlp, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int k = 0; k < 5; ++k) {
    MlpArchitecture arch{3, {4}, 2, Activation::tanh};
    const auto net = MlpNetwork::random(arch, std::uint64_t(k));
    MlpBatch batch{Eigen::MatrixXd(3, 6), Eigen::MatrixXd(2, 6)};
    for (Eigen::Index i = 0; i < batch.inputs.size(); ++i) batch.inputs.data()[i] = n(rng);
    for (Eigen::Index i = 0; i < batch.targets.size(); ++i) batch.targets.data()[i] = n(rng);
    EXPECT_LT(fd_max_rel_error(net, batch), 1e-4);
  }
}

TEST(Mlp, FitReducesErrorAndRoundTrips) {
  ParametricFitConfig cfg;
  cfg.learner = Learner::mlp;
  cfg.mlp_hidden = 8;
  cfg.mlp_epochs = 400;
  cfg.seed = 9;
  const auto ds = line_data(20);
  const auto m = fit_parametric(ds, cfg);
  double err = 0.0;
  for (const auto& t : ds.transitions()) err += (m->predict(t.x, t.a).next - t.x_next).norm();
  EXPECT_LT(err / double(ds.size()), 0.2);
  EXPECT_EQ(fit_parametric(ds, cfg)->serialize(), m->serialize());
  const auto back = load_parametric_model(m->serialize());
  EXPECT_EQ(back->predict(vec({0.4}), ActionId(0)).next, m->predict(vec({0.4}), ActionId(0)).next);
  EXPECT_THROW(m->predict(vec({0.4}), ActionId(1)), NoSupport);
}

TEST(Fit, ConfigValidation) {
  ParametricFitConfig cfg;
  cfg.ridge_lambda = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.mlp_learning_rate = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.mlp_hidden = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Fit, DivergenceIsReported) {
  ParametricFitConfig cfg;
  cfg.learner = Learner::mlp;
  cfg.mlp_hidden = 4;
  cfg.mlp_epochs = 200;
  cfg.mlp_learning_rate = 1e6;
  EXPECT_THROW(fit_parametric(line_data(10), cfg), Diverged);
}
