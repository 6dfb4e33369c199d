#include "moeope/models/nonparametric.hpp"

#include "moeope/core/error.hpp"

#include <json.hpp>

#include <string>

namespace moeope {

NonparametricModel::NonparametricModel(std::shared_ptr<const Dataset> data, Metric metric)
    : data_(std::move(data)), metric_(std::move(metric)) {
  if (!data_) throw Error("nonparametric model needs a dataset");
  if (metric_.dim() != data_->dim())
    throw DimensionMismatch("metric dimension " + std::to_string(metric_.dim()) +
                            " does not match dataset dimension " + std::to_string(data_->dim()));
}

std::optional<Neighbor> NonparametricModel::source(const StateVec& x, ActionId a) const {
  return nearest_transition(*data_, x, a, metric_);
}

Prediction NonparametricModel::predict(const StateVec& x, ActionId a) const {
  const auto nb = source(x, a);
  if (!nb) throw NoSupport("no support: dataset has no transition for action " +
                           std::to_string(a.value));
  const auto& tr = (*data_)[nb->index];
  return Prediction{tr.x_next, tr.r};
}

std::string NonparametricModel::serialize() const {
  nlohmann::ordered_json j;
  j["learner"] = "nearest_neighbor";
  j["dim"] = data_->dim();
  j["n_actions"] = data_->n_actions();
  j["n_transitions"] = data_->size();
  j["metric_weights"] = std::vector<double>(metric_.weights().data(),
                                            metric_.weights().data() + metric_.weights().size());
  return j.dump();
}

}  // namespace moeope
