#include "moeope/models/analytic.hpp"

#include "moeope/core/error.hpp"

#include <json.hpp>

namespace moeope {

AnalyticModel::AnalyticModel(std::string name, std::size_t dim, std::size_t n_actions, Fn fn)
    : name_(std::move(name)), dim_(dim), n_actions_(n_actions), fn_(std::move(fn)) {
  if (!fn_) throw Error("analytic model needs a function");
}

Prediction AnalyticModel::predict(const StateVec& x, ActionId a) const {
  if (!supports(a)) throw NoSupport("analytic model has no action " + std::to_string(a.value));
  if (static_cast<std::size_t>(x.size()) != dim_)
    throw DimensionMismatch("analytic model expects dimension " + std::to_string(dim_));
  return fn_(x, a);
}

std::string AnalyticModel::serialize() const {
  nlohmann::ordered_json j;
  j["learner"] = "analytic";
  j["name"] = name_;
  j["dim"] = dim_;
  j["n_actions"] = n_actions_;
  return j.dump();
}

}  // namespace moeope
