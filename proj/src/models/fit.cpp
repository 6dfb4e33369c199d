#include "moeope/models/fit.hpp"

#include "moeope/core/error.hpp"
#include "moeope/models/mlp.hpp"
#include "moeope/models/ridge.hpp"

#include <json.hpp>

#include <cmath>

namespace moeope {

void ParametricFitConfig::validate() const {
  if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda))
    throw ConfigError("model.ridge_lambda", "must be a finite nonnegative number");
  if (mlp_hidden < 1) throw ConfigError("model.mlp_hidden", "must be at least 1");
  if (mlp_layers < 1 || mlp_layers > 2) throw ConfigError("model.mlp_layers", "must be 1 or 2");
  if (!(mlp_learning_rate > 0.0) || !std::isfinite(mlp_learning_rate))
    throw ConfigError("model.mlp_learning_rate", "must be positive");
}

namespace {

ModelPtr fit_mlp(const Dataset& ds, const ParametricFitConfig& cfg) {
  const auto d = static_cast<Eigen::Index>(ds.dim());
  const auto na = static_cast<Eigen::Index>(ds.n_actions());
  const auto n = static_cast<Eigen::Index>(ds.size());

  Eigen::MatrixXd xs(d, n), outs(d + 1, n);
  std::vector<bool> fitted(ds.n_actions(), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& tr = ds[static_cast<std::size_t>(i)];
    xs.col(i) = tr.x;
    outs.col(i).head(d) = tr.x_next - tr.x;
    outs(d, i) = tr.r;
    fitted[tr.a.value] = true;
  }

  const auto stats = [n](const Eigen::MatrixXd& m, Eigen::VectorXd& mean, Eigen::VectorXd& scale) {
    mean = m.rowwise().mean();
    scale = ((m.colwise() - mean).array().square().rowwise().sum() / static_cast<double>(n))
                .sqrt()
                .matrix();
    for (Eigen::Index k = 0; k < scale.size(); ++k)
      if (!(scale[k] > 1e-12)) scale[k] = 1.0;
  };
  MlpModel::Scaling scaling;
  stats(xs, scaling.in_mean, scaling.in_scale);
  stats(outs, scaling.out_mean, scaling.out_scale);

  MlpBatch batch;
  batch.inputs = Eigen::MatrixXd::Zero(d + na, n);
  batch.inputs.topRows(d) =
      (xs.colwise() - scaling.in_mean).array().colwise() / scaling.in_scale.array();
  for (Eigen::Index i = 0; i < n; ++i) batch.inputs(d + ds[static_cast<std::size_t>(i)].a.value, i) = 1.0;
  batch.targets = (outs.colwise() - scaling.out_mean).array().colwise() / scaling.out_scale.array();

  MlpArchitecture arch;
  arch.n_inputs = static_cast<std::size_t>(d + na);
  arch.hidden.assign(cfg.mlp_layers, cfg.mlp_hidden);
  arch.n_outputs = static_cast<std::size_t>(d + 1);
  arch.activation = Activation::tanh;

  MlpNetwork net = MlpNetwork::random(arch, cfg.seed);
  for (std::size_t epoch = 0; epoch < cfg.mlp_epochs; ++epoch) {
    net.params() -= cfg.mlp_learning_rate * mlp_gradient(net, batch);
    if (!all_finite(net.params())) throw Diverged("mlp training diverged at epoch " + std::to_string(epoch));
  }
  return std::make_shared<MlpModel>(ds.dim(), ds.n_actions(), std::move(net), std::move(scaling),
                                    std::move(fitted), cfg.seed);
}

Eigen::VectorXd to_vec(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

ModelPtr fit_parametric(const Dataset& ds, const ParametricFitConfig& cfg) {
  cfg.validate();
  if (ds.empty()) throw Error("cannot fit a parametric model to an empty dataset");
  switch (cfg.learner) {
    case Learner::ridge_per_action:
      return std::make_shared<RidgeModel>(RidgeModel::fit(ds, cfg.ridge_lambda));
    case Learner::mlp:
      return fit_mlp(ds, cfg);
  }
  throw Error("unknown learner");
}

ModelPtr load_parametric_model(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  const std::string learner = j.at("learner").get<std::string>();
  const auto dim = j.at("dim").get<std::size_t>();
  const auto n_actions = j.at("n_actions").get<std::size_t>();
  if (learner == "ridge_per_action") {
    std::vector<std::optional<RidgeModel::ActionFit>> fits;
    for (const auto& fa : j.at("actions")) {
      if (fa.is_null()) {
        fits.emplace_back();
        continue;
      }
      RidgeModel::ActionFit f;
      const auto& coef = fa.at("coef");
      f.coef.resize(static_cast<Eigen::Index>(coef.size()),
                    static_cast<Eigen::Index>(coef.empty() ? 0 : coef[0].size()));
      for (std::size_t r = 0; r < coef.size(); ++r)
        f.coef.row(static_cast<Eigen::Index>(r)) = to_vec(coef[r]).transpose();
      f.intercept = to_vec(fa.at("intercept"));
      fits.push_back(std::move(f));
    }
    return std::make_shared<RidgeModel>(dim, n_actions, j.at("ridge_lambda").get<double>(),
                                        std::move(fits));
  }
  if (learner == "mlp") {
    MlpArchitecture arch;
    arch.n_inputs = dim + n_actions;
    arch.hidden = j.at("hidden").get<std::vector<std::size_t>>();
    arch.n_outputs = dim + 1;
    arch.activation = j.at("activation").get<std::string>() == "tanh" ? Activation::tanh
                                                                      : Activation::identity;
    MlpModel::Scaling s{to_vec(j.at("in_mean")), to_vec(j.at("in_scale")),
                        to_vec(j.at("out_mean")), to_vec(j.at("out_scale"))};
    return std::make_shared<MlpModel>(dim, n_actions, MlpNetwork(arch, to_vec(j.at("params"))),
                                      std::move(s), j.at("fitted").get<std::vector<bool>>(),
                                      j.at("seed").get<std::uint64_t>());
  }
  throw Error("cannot load a model with learner '" + learner + "'");
}

}  // namespace moeope
