#include "moeope/estimation/error_estimates.hpp"

#include "moeope/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace moeope {

namespace {

void accumulate_pair(const Transition& i, const Transition& j, const Metric& m,
                     LipschitzEstimates& est) {
  const double d = m.distance(i.x, j.x);
  if (d == 0.0) return;
  est.L_t_hat = std::max(est.L_t_hat, m.distance(i.x_next, j.x_next) / d);
  est.L_r_hat = std::max(est.L_r_hat, std::abs(i.r - j.r) / d);
  ++est.n_pairs;
}

std::optional<LipschitzEstimates> max_of(std::optional<LipschitzEstimates> a,
                                         const std::optional<LipschitzEstimates>& b) {
  if (!b) return a;
  if (!a) return b;
  a->L_t_hat = std::max(a->L_t_hat, b->L_t_hat);
  a->L_r_hat = std::max(a->L_r_hat, b->L_r_hat);
  a->n_pairs += b->n_pairs;
  return a;
}

ErrorEstimate scaled(const LipschitzEstimates& L, double distance) {
  if (distance == 0.0) return ErrorEstimate{0.0, 0.0, true};
  return ErrorEstimate{L.L_t_hat * distance, L.L_r_hat * distance, true};
}

std::vector<std::size_t> indices_of(const std::vector<Neighbor>& nbs) {
  std::vector<std::size_t> idx;
  idx.reserve(nbs.size());
  for (const auto& nb : nbs) idx.push_back(nb.index);
  return idx;
}

}  // namespace

LipschitzEstimates estimate_lipschitz(const std::vector<std::pair<Transition, Transition>>& pairs,
                                      const Metric& m) {
  LipschitzEstimates est;
  for (const auto& [i, j] : pairs) accumulate_pair(i, j, m, est);
  if (est.n_pairs == 0) throw InsufficientPairs("insufficient pairs: no pair with distinct start states");
  return est;
}

std::optional<LipschitzEstimates> lipschitz_over(const Dataset& ds,
                                                 std::span<const std::size_t> indices,
                                                 const Metric& m) {
  LipschitzEstimates est;
  for (std::size_t p = 0; p < indices.size(); ++p)
    for (std::size_t q = p + 1; q < indices.size(); ++q) {
      const auto& i = ds[indices[p]];
      const auto& j = ds[indices[q]];
      if (i.a == j.a) accumulate_pair(i, j, m, est);
    }
  if (est.n_pairs == 0) return std::nullopt;
  return est;
}

std::optional<LipschitzEstimates> global_lipschitz(const Dataset& ds, const Metric& m) {
  std::optional<LipschitzEstimates> out;
  for (std::size_t a = 0; a < ds.n_actions(); ++a)
    out = max_of(out, lipschitz_over(ds, ds.indices_for(ActionId(static_cast<std::uint32_t>(a))), m));
  return out;
}

ErrorEstimate np_error_estimate(const Dataset& ds, const StateVec& x, ActionId a, double c,
                                const Metric& m) {
  const auto nbs = neighbors_within(ds, x, a, c, m);
  if (nbs.empty()) return ErrorEstimate{0.0, 0.0, false};
  auto L = lipschitz_over(ds, indices_of(nbs), m);
  if (!L) L = global_lipschitz(ds, m);
  if (!L) return ErrorEstimate{0.0, 0.0, false};
  return scaled(*L, nbs.front().distance);
}

ErrorEstimate p_error_estimate(const Dataset& ds, const DynamicsModel& model, const StateVec& x,
                               ActionId a, double c, const Metric& m) {
  if (!model.supports(a)) return ErrorEstimate{0.0, 0.0, false};
  const auto nbs = neighbors_within(ds, x, a, c, m);
  if (nbs.empty()) return ErrorEstimate{0.0, 0.0, false};
  ErrorEstimate est;
  for (const auto& nb : nbs) {
    const auto& tr = ds[nb.index];
    const auto pred = model.predict(tr.x, tr.a);
    est.eps_t = std::max(est.eps_t, m.distance(pred.next, tr.x_next));
    est.eps_r = std::max(est.eps_r, std::abs(pred.reward - tr.r));
  }
  return est;
}

double mean_parametric_error(const Dataset& ds, const DynamicsModel& model, const Metric& m) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& tr : ds.transitions()) {
    if (!model.supports(tr.a)) continue;
    sum += m.distance(model.predict(tr.x, tr.a).next, tr.x_next);
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

namespace {

double radius_from(double mean_error, const std::optional<LipschitzEstimates>& global) {
  if (!global || global->L_t_hat == 0.0) return std::numeric_limits<double>::infinity();
  return mean_error / global->L_t_hat;
}

}  // namespace

double choose_radius(const Dataset& ds, const DynamicsModel& model, const Metric& m) {
  return radius_from(mean_parametric_error(ds, model, m), global_lipschitz(ds, m));
}

ErrorEstimate true_error(const DynamicsModel& model, const TrueDynamics& truth, const StateVec& x,
                         ActionId a, const Metric& m) {
  if (!model.supports(a)) return ErrorEstimate{0.0, 0.0, false};
  const auto pred = model.predict(x, a);
  const auto real = truth(x, a);
  return ErrorEstimate{m.distance(pred.next, real.next), std::abs(pred.reward - real.reward), true};
}

ErrorContext::ErrorContext(std::shared_ptr<const Dataset> data, Metric metric, ModelPtr parametric,
                           std::optional<double> radius_override)
    : data_(std::move(data)), metric_(std::move(metric)), parametric_(std::move(parametric)) {
  if (!data_) throw Error("error context needs a dataset");
  if (!parametric_) throw Error("error context needs a parametric model");
  per_action_.resize(data_->n_actions());
  for (std::size_t a = 0; a < data_->n_actions(); ++a) {
    per_action_[a] =
        lipschitz_over(*data_, data_->indices_for(ActionId(static_cast<std::uint32_t>(a))), metric_);
    global_ = max_of(global_, per_action_[a]);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  res_t_.assign(data_->size(), nan);
  res_r_.assign(data_->size(), nan);
  double sum = 0.0, sum_r = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < data_->size(); ++i) {
    const auto& tr = (*data_)[i];
    if (!parametric_->supports(tr.a)) continue;
    const auto pred = parametric_->predict(tr.x, tr.a);
    res_t_[i] = metric_.distance(pred.next, tr.x_next);
    res_r_[i] = std::abs(pred.reward - tr.r);
    sum += res_t_[i];
    sum_r += res_r_[i];
    ++n;
  }
  mean_p_error_ = n == 0 ? 0.0 : sum / static_cast<double>(n);
  mean_p_reward_error_ = n == 0 ? 0.0 : sum_r / static_cast<double>(n);
  radius_ = radius_override ? *radius_override : radius_from(mean_p_error_, global_);
  if (!(radius_ >= 0.0)) throw ConfigError("errors.radius", "must be nonnegative");
}

std::optional<LipschitzEstimates> ErrorContext::local_lipschitz(
    ActionId a, const std::vector<Neighbor>& nbs) const {
  if (nbs.size() == data_->indices_for(a).size()) return per_action_[a.value];
  auto key = indices_of(nbs);
  std::sort(key.begin(), key.end());
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto L = lipschitz_over(*data_, key, metric_);
  std::lock_guard lock(cache_mutex_);
  cache_.emplace(std::move(key), L);
  return L;
}

ErrorEstimate ErrorContext::np_error(const StateVec& x, ActionId a) const {
  const auto nbs = neighbors_within(*data_, x, a, radius_, metric_);
  if (nbs.empty()) return ErrorEstimate{0.0, 0.0, false};
  auto L = local_lipschitz(a, nbs);
  if (!L) L = global_;
  if (!L) return ErrorEstimate{0.0, 0.0, false};
  return scaled(*L, nbs.front().distance);
}

ErrorEstimate ErrorContext::p_error(const StateVec& x, ActionId a) const {
  if (!parametric_->supports(a)) return ErrorEstimate{0.0, 0.0, false};
  const auto nbs = neighbors_within(*data_, x, a, radius_, metric_);
  if (nbs.empty()) return ErrorEstimate{mean_p_error_, mean_p_reward_error_, false};
  ErrorEstimate est;
  for (const auto& nb : nbs) {
    est.eps_t = std::max(est.eps_t, res_t_[nb.index]);
    est.eps_r = std::max(est.eps_r, res_r_[nb.index]);
  }
  return est;
}

}  // namespace moeope
