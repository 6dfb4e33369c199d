#include "moeope/envs/ode.hpp"

#include "moeope/core/error.hpp"

#include <json.hpp>

#include <cmath>
#include <algorithm>
#include <set>

namespace moeope {

void ODESpec::validate() const {
  if (state_names.empty()) throw ConfigError("env.state_names", "must be nonempty");
  if (rhs.size() != state_names.size())
    throw ConfigError("env.rhs", "needs one expression per state variable");
  if (actions.empty()) throw ConfigError("env.actions", "must be nonempty");
  if (!(dt > 0.0)) throw ConfigError("env.dt", "must be positive");
  if (steps_per_decision < 1) throw ConfigError("env.steps_per_decision", "must be at least 1");
  if (initial_state.size() != state_names.size())
    throw ConfigError("env.initial_state", "must have one value per state variable");
  if (!(initial_noise >= 0.0 && initial_noise < 1.0))
    throw ConfigError("env.initial_noise", "must lie in [0, 1)");
  if (horizon < 1) throw ConfigError("env.horizon", "must be at least 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("env.gamma", "must lie in (0, 1]");
  if (log10_state)
    for (double v : initial_state)
      if (!(v > 0.0)) throw ConfigError("env.initial_state", "must be positive with log10_state");
}

ODESpec ode_spec_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  ODESpec s;
  try {
    s.name = j.value("name", s.name);
    s.state_names = j.at("state_names").get<std::vector<std::string>>();
    s.params = j.value("params", s.params);
    s.rhs = j.at("rhs").get<std::vector<std::string>>();
    for (const auto& aj : j.at("actions")) {
      OdeAction a;
      a.name = aj.value("name", std::string());
      a.params = aj.value("params", a.params);
      a.impulse = aj.value("impulse", a.impulse);
      s.actions.push_back(std::move(a));
    }
    s.reward = j.value("reward", s.reward);
    s.reward_at_next = j.value("reward_at_next", s.reward_at_next);
    s.dt = j.value("dt", s.dt);
    s.steps_per_decision = j.value("steps_per_decision", s.steps_per_decision);
    s.initial_state = j.at("initial_state").get<std::vector<double>>();
    s.initial_noise = j.value("initial_noise", s.initial_noise);
    s.horizon = j.value("horizon", s.horizon);
    s.gamma = j.value("gamma", s.gamma);
    s.log10_state = j.value("log10_state", s.log10_state);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("env", e.what());
  }
  s.validate();
  return s;
}

OdeEnv::OdeEnv(ODESpec spec) : spec_(std::move(spec)), reward_(Expression::parse("0", {})) {
  spec_.validate();
  std::set<std::string> names(spec_.state_names.begin(), spec_.state_names.end());
  if (names.size() != spec_.state_names.size())
    throw ConfigError("env.state_names", "names must be distinct");

  std::vector<std::string> param_names;
  for (const auto& [k, v] : spec_.params) param_names.push_back(k);
  for (const auto& a : spec_.actions)
    for (const auto& [k, v] : a.params)
      if (!spec_.params.count(k) &&
          std::find(param_names.begin(), param_names.end(), k) == param_names.end())
        param_names.push_back(k);
  for (const auto& p : param_names)
    if (names.count(p)) throw ConfigError("env.params", "'" + p + "' is also a state name");

  std::vector<std::string> vars = spec_.state_names;
  vars.insert(vars.end(), param_names.begin(), param_names.end());
  for (std::size_t i = 0; i < spec_.rhs.size(); ++i) {
    try {
      rhs_.push_back(Expression::parse(spec_.rhs[i], vars));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("env.rhs[" + std::to_string(i) + "]", e.what());
    }
  }
  try {
    reward_ = Expression::parse(spec_.reward, vars);
  } catch (const Error& e) {
    throw ConfigError("env.reward", e.what());
  }

  for (std::size_t ai = 0; ai < spec_.actions.size(); ++ai) {
    const auto& a = spec_.actions[ai];
    std::vector<double> values;
    for (const auto& p : param_names) {
      if (auto it = a.params.find(p); it != a.params.end())
        values.push_back(it->second);
      else if (auto g = spec_.params.find(p); g != spec_.params.end())
        values.push_back(g->second);
      else
        throw ConfigError("env.actions[" + std::to_string(ai) + "].params",
                          "missing value for '" + p + "'");
    }
    action_params_.push_back(std::move(values));
    StateVec imp = StateVec::Zero(static_cast<Eigen::Index>(dim()));
    for (const auto& [k, v] : a.impulse) {
      const auto pos = std::find(spec_.state_names.begin(), spec_.state_names.end(), k);
      if (pos == spec_.state_names.end())
        throw ConfigError("env.actions[" + std::to_string(ai) + "].impulse",
                          "unknown state '" + k + "'");
      imp[pos - spec_.state_names.begin()] = v;
    }
    impulses_.push_back(std::move(imp));
  }
}

StateVec OdeEnv::derivative(const StateVec& raw, const std::vector<double>& params,
                            std::vector<double>& scratch) const {
  const std::size_t d = dim();
  scratch.resize(d + params.size());
  for (std::size_t i = 0; i < d; ++i) scratch[i] = raw[static_cast<Eigen::Index>(i)];
  std::copy(params.begin(), params.end(), scratch.begin() + static_cast<std::ptrdiff_t>(d));
  StateVec out(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) out[static_cast<Eigen::Index>(i)] = rhs_[i].evaluate(scratch);
  return out;
}

StateVec OdeEnv::integrate(const StateVec& raw, ActionId a, double dt, std::size_t steps) const {
  if (a.value >= n_actions()) throw Error("ode env has no action " + std::to_string(a.value));
  const auto& params = action_params_[a.value];
  std::vector<double> scratch;
  StateVec s = raw + impulses_[a.value];
  for (std::size_t i = 0; i < steps; ++i) {
    const StateVec k1 = derivative(s, params, scratch);
    const StateVec k2 = derivative(s + 0.5 * dt * k1, params, scratch);
    const StateVec k3 = derivative(s + 0.5 * dt * k2, params, scratch);
    const StateVec k4 = derivative(s + dt * k3, params, scratch);
    s += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!all_finite(s)) throw Diverged("ode state diverged after " + std::to_string(i + 1) + " steps");
  }
  return s;
}

double OdeEnv::reward(const StateVec& raw, ActionId a) const {
  std::vector<double> scratch(raw.data(), raw.data() + raw.size());
  const auto& params = action_params_.at(a.value);
  scratch.insert(scratch.end(), params.begin(), params.end());
  return reward_.evaluate(scratch);
}

StateVec OdeEnv::to_raw(const StateVec& x) const {
  if (!spec_.log10_state) return x;
  return x.unaryExpr([](double v) { return std::pow(10.0, v); });
}

StateVec OdeEnv::from_raw(const StateVec& raw) const {
  if (!spec_.log10_state) return raw;
  if (!(raw.array() > 0.0).all()) throw Diverged("ode state left the positive orthant");
  return raw.array().log10().matrix();
}

Prediction OdeEnv::step(const StateVec& x, ActionId a) const {
  if (static_cast<std::size_t>(x.size()) != dim())
    throw DimensionMismatch("ode env expects dimension " + std::to_string(dim()));
  const StateVec raw = to_raw(x);
  const StateVec next = integrate(raw, a, spec_.dt, spec_.steps_per_decision);
  const double r = reward(spec_.reward_at_next ? next : raw, a);
  if (!std::isfinite(r)) throw Diverged("ode reward is not finite");
  return Prediction{from_raw(next), r};
}

StateVec OdeEnv::sample_initial(Rng& rng) const {
  StateVec raw(static_cast<Eigen::Index>(dim()));
  std::uniform_real_distribution<double> u(-spec_.initial_noise, spec_.initial_noise);
  for (std::size_t i = 0; i < dim(); ++i) {
    const double scale = spec_.initial_noise > 0.0 ? 1.0 + u(rng) : 1.0;
    raw[static_cast<Eigen::Index>(i)] = spec_.initial_state[i] * scale;
  }
  return from_raw(raw);
}

EnvPtr ode_env(ODESpec spec) { return std::make_shared<OdeEnv>(std::move(spec)); }

}  // namespace moeope
