#include "moeope/models/ridge.hpp"

#include "moeope/core/error.hpp"

#include <json.hpp>

#include <string>

namespace moeope {

RidgeModel::RidgeModel(std::size_t dim, std::size_t n_actions, double lambda,
                       std::vector<std::optional<ActionFit>> fits)
    : dim_(dim), n_actions_(n_actions), lambda_(lambda), fits_(std::move(fits)) {
  if (fits_.size() != n_actions_) throw Error("ridge model needs one fit slot per action");
  for (const auto& f : fits_) {
    if (!f) continue;
    if (static_cast<std::size_t>(f->coef.rows()) != dim_ + 1 ||
        static_cast<std::size_t>(f->coef.cols()) != dim_ ||
        static_cast<std::size_t>(f->intercept.size()) != dim_ + 1)
      throw DimensionMismatch("ridge coefficients do not match dimension " + std::to_string(dim_));
  }
}

RidgeModel RidgeModel::fit(const Dataset& ds, double lambda) {
  if (!(lambda >= 0.0)) throw Error("ridge_lambda must be nonnegative");
  const std::size_t d = ds.dim();
  std::vector<std::optional<ActionFit>> fits(ds.n_actions());
  for (std::size_t a = 0; a < ds.n_actions(); ++a) {
    const auto idx = ds.indices_for(ActionId(static_cast<std::uint32_t>(a)));
    if (idx.empty()) continue;
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd X(n, d);
    Eigen::MatrixXd Y(n, d + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& tr = ds[idx[static_cast<std::size_t>(i)]];
      X.row(i) = tr.x.transpose();
      Y.row(i).head(d) = tr.x_next.transpose();
      Y(i, static_cast<Eigen::Index>(d)) = tr.r;
    }
    const Eigen::RowVectorXd x_mean = X.colwise().mean();
    const Eigen::RowVectorXd y_mean = Y.colwise().mean();
    const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
    const Eigen::MatrixXd Yc = Y.rowwise() - y_mean;
    Eigen::MatrixXd B;  // d x (d+1)
    if (lambda == 0.0) {
      B = Xc.completeOrthogonalDecomposition().solve(Yc);
    } else {
      Eigen::MatrixXd gram = Xc.transpose() * Xc;
      gram.diagonal().array() += lambda;
      B = gram.ldlt().solve(Xc.transpose() * Yc);
    }
    ActionFit f;
    f.coef = B.transpose();
    f.intercept = (y_mean - x_mean * B).transpose();
    fits[a] = std::move(f);
  }
  return RidgeModel(d, ds.n_actions(), lambda, std::move(fits));
}

bool RidgeModel::supports(ActionId a) const {
  return a.value < fits_.size() && fits_[a.value].has_value();
}

Prediction RidgeModel::predict(const StateVec& x, ActionId a) const {
  if (!supports(a))
    throw NoSupport("parametric model was not fitted for action " + std::to_string(a.value));
  if (static_cast<std::size_t>(x.size()) != dim_)
    throw DimensionMismatch("ridge model expects dimension " + std::to_string(dim_));
  const auto& f = *fits_[a.value];
  const Eigen::VectorXd out = f.coef * x + f.intercept;
  return Prediction{out.head(static_cast<Eigen::Index>(dim_)), out(static_cast<Eigen::Index>(dim_))};
}

std::string RidgeModel::serialize() const {
  nlohmann::ordered_json j;
  j["learner"] = "ridge_per_action";
  j["dim"] = dim_;
  j["n_actions"] = n_actions_;
  j["ridge_lambda"] = lambda_;
  auto actions = nlohmann::ordered_json::array();
  for (const auto& f : fits_) {
    if (!f) {
      actions.push_back(nullptr);
      continue;
    }
    auto coef = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < f->coef.rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(f->coef.cols()));
      for (Eigen::Index c = 0; c < f->coef.cols(); ++c) row[static_cast<std::size_t>(c)] = f->coef(r, c);
      coef.push_back(row);
    }
    nlohmann::ordered_json fa;
    fa["coef"] = coef;
    fa["intercept"] = std::vector<double>(f->intercept.data(), f->intercept.data() + f->intercept.size());
    actions.push_back(fa);
  }
  j["actions"] = actions;
  return j.dump();
}

}  // namespace moeope
