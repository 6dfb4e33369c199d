#pragma once

#include "moeope/core/dataset.hpp"
#include "moeope/core/policy.hpp"
#include "moeope/models/dynamics_model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace moeope {

enum class ISVariant { IS, WIS, PDIS, CWPDIS, DR, WDR };

const char* to_string(ISVariant v);
ISVariant is_variant_from_string(const std::string& s);

struct ISStep {
  StateVec x;
  ActionId a;
  double r = 0.0;
  double pb = 1.0;
  double pe = 1.0;
};

struct ISInput {
  std::vector<std::vector<ISStep>> trajectories;
  double gamma = 1.0;

  /// Longest trajectory length.
  std::size_t horizon() const;
  /// Throws CoverageViolation on a nonpositive behavior probability.
  void validate() const;
};

/// Pairs the logged behavior probabilities with pi_e(a_t | x_t). Throws
/// CoverageViolation when a transition has no logged probability.
ISInput make_is_input(const Dataset& ds, const Policy& eval, double gamma);

/// State and action values for the doubly robust variants; `remaining` is the
/// number of steps left in the horizon.
class ValueModel {
 public:
  virtual ~ValueModel() = default;
  virtual double v(const StateVec& x, std::size_t remaining) const = 0;
  virtual double q(const StateVec& x, ActionId a, std::size_t remaining) const = 0;
};

class ZeroValueModel final : public ValueModel {
 public:
  double v(const StateVec&, std::size_t) const override { return 0.0; }
  double q(const StateVec&, ActionId, std::size_t) const override { return 0.0; }
};

/// Values from rolling a dynamics model forward under pi_e, taking the exact
/// expectation over every action with positive probability.
class ModelValueModel final : public ValueModel {
 public:
  ModelValueModel(ModelPtr model, PolicyPtr eval, double gamma,
                  std::function<bool(const StateVec&)> is_terminal = {});

  double v(const StateVec& x, std::size_t remaining) const override;
  double q(const StateVec& x, ActionId a, std::size_t remaining) const override;

 private:
  ModelPtr model_;
  PolicyPtr eval_;
  double gamma_;
  std::function<bool(const StateVec&)> is_terminal_;
};

/// Standard estimators. Trajectories that end early are padded with zero
/// reward and their final cumulative weight. `values` is required for DR and
/// WDR (and horizon-aware via `horizon`, defaulting to the longest trajectory).
///
///   IS     (1/n) sum_i rho_{T-1}^i g^i
///   WIS    sum_i rho_{T-1}^i g^i / sum_i rho_{T-1}^i
///   PDIS   (1/n) sum_i sum_t gamma^t rho_t^i r_t^i
///   CWPDIS sum_t gamma^t sum_i rho_t^i r_t^i / sum_i rho_t^i
///   DR     (1/n) sum_i sum_t gamma^t [rho_t r_t - rho_t Q(x_t,a_t) + rho_{t-1} V(x_t)]
///   WDR    DR with rho_t^i / n replaced by w_t^i = rho_t^i / sum_j rho_t^j
double is_estimate(const ISInput& input, ISVariant variant, const ValueModel* values = nullptr,
                   std::size_t horizon = 0);

/// Per-trajectory IS terms rho_{T-1}^i g^i (their mean is the IS estimate).
std::vector<double> is_terms(const ISInput& input);

}  // namespace moeope
