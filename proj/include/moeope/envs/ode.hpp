#pragma once

#include "moeope/envs/environment.hpp"
#include "moeope/envs/expression.hpp"

#include <map>
#include <string>
#include <vector>

namespace moeope {

struct OdeAction {
  std::string name;
  /// Parameter values that apply while this action is active.
  std::map<std::string, double> params;
  /// Amounts added to named state variables at the start of the decision.
  std::map<std::string, double> impulse;
};

/// Declarative ODE environment: one right-hand-side expression per state
/// variable, integrated with fixed-step RK4 between decisions.
struct ODESpec {
  std::string name = "ode";
  std::vector<std::string> state_names;
  std::map<std::string, double> params;
  std::vector<std::string> rhs;
  std::vector<OdeAction> actions;
  std::string reward = "0";
  /// Evaluate the reward at the post-decision state rather than the pre-decision one.
  bool reward_at_next = true;
  double dt = 0.01;
  std::size_t steps_per_decision = 100;
  std::vector<double> initial_state;
  /// Each initial coordinate is scaled by 1 + U(-noise, noise).
  double initial_noise = 0.0;
  std::size_t horizon = 50;
  double gamma = 1.0;
  /// Expose log10 of the ODE state as the environment state.
  bool log10_state = false;

  void validate() const;
};

/// Parses the JSON object form of an ODESpec.
ODESpec ode_spec_from_json(const std::string& json_text);

class OdeEnv final : public Environment {
 public:
  explicit OdeEnv(ODESpec spec);

  std::string name() const override { return spec_.name; }
  std::size_t dim() const override { return spec_.state_names.size(); }
  std::size_t n_actions() const override { return spec_.actions.size(); }
  std::size_t horizon() const override { return spec_.horizon; }
  double gamma() const override { return spec_.gamma; }
  Prediction step(const StateVec& x, ActionId a) const override;
  StateVec sample_initial(Rng& rng) const override;

  /// Integrates the raw (non-log) ODE state under action `a`; throws Diverged
  /// on a non-finite state.
  StateVec integrate(const StateVec& raw, ActionId a, double dt, std::size_t steps) const;
  double reward(const StateVec& raw, ActionId a) const;

  StateVec to_raw(const StateVec& x) const;
  StateVec from_raw(const StateVec& raw) const;
  const ODESpec& spec() const noexcept { return spec_; }

 private:
  StateVec derivative(const StateVec& raw, const std::vector<double>& params,
                      std::vector<double>& scratch) const;

  ODESpec spec_;
  std::vector<Expression> rhs_;
  Expression reward_;
  /// Per action: values of every parameter, in variable order after the state.
  std::vector<std::vector<double>> action_params_;
  std::vector<StateVec> impulses_;
};

EnvPtr ode_env(ODESpec spec);

}  // namespace moeope
