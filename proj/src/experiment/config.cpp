#include "moeope/experiment/config.hpp"

#include "moeope/core/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace moeope {

namespace {

using nlohmann::json;

struct Field {
  const char* path;
  const char* type;
  const char* fallback;
  const char* meaning;
};

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = {
      {"name", "string", "\"experiment\"", "label copied into reports"},
      {"seed", "u64", "0", "master seed; repetition i uses a seed derived from (seed, i)"},
      {"n_repetitions", "int >= 1", "1", "independent repetitions"},
      {"n_behavior_trajectories", "int >= 1", "10", "behavior trajectories per repetition"},
      {"behavior_horizon", "int", "0", "behavior trajectory length cap; 0 = env horizon"},
      {"true_value_rollouts", "int >= 1", "100", "on-policy rollouts for the reference value"},
      {"estimators", "list of string", "[\"M_p\",\"M_np\",\"MoE\"]",
       "any of M_p, M_np, MoE, MCTS-MoE, MoE-true, MCTS-MoE-true, IS, WIS, PDIS, CWPDIS, DR, WDR"},
      {"metric_weights", "list of real > 0", "all 1", "per-dimension distance weights"},
      {"radius", "real >= 0", "auto", "neighborhood radius C; auto = mean parametric error / global L_t"},
      {"eval_from_env_starts", "bool", "false",
       "simulate from the environment's evaluation start states instead of the dataset's"},
      {"env.type", "string", "\"windy2d\"", "windy2d, planning_toy, acrobot or ode"},
      {"env.horizon", "int >= 1", "per env", "episode length cap (windy2d 60, planning_toy 16, acrobot 200)"},
      {"env.step_size", "real > 0", "1", "windy2d: distance moved per action"},
      {"env.wind_slope", "real >= 0", "0.05", "windy2d: leftward wind per unit y"},
      {"env.goal.lo", "[x, y]", "[7.5, 9]", "windy2d: goal box lower corner"},
      {"env.goal.hi", "[x, y]", "[1e6, 1e6]", "windy2d: goal box upper corner"},
      {"env.start.lo", "[x, y]", "[0, 0]", "windy2d: start box lower corner"},
      {"env.start.hi", "[x, y]", "[0.5, 0.5]", "windy2d: start box upper corner"},
      {"env.dt", "real > 0", "0.2", "acrobot: integration step"},
      {"env.g", "real >= 0", "9.8", "acrobot: gravity"},
      {"env.goal_height", "real", "1.0", "acrobot: tip height that ends an episode"},
      {"env.init_noise", "real >= 0", "0.1", "acrobot: start state half-width"},
      {"env.filter_height", "real", "none", "acrobot: drop behavior transitions starting above this tip height"},
      {"env.ode", "object", "required for ode", "ODE definition (state_names, params, rhs, actions, reward, "
                                             "reward_at_next, dt, steps_per_decision, initial_state, "
                                             "initial_noise, horizon, gamma, log10_state)"},
      {"behavior.base", "string", "\"behavior\"", "eval, behavior, uniform or constant"},
      {"behavior.action", "int", "0", "action of the constant base policy"},
      {"behavior.eps", "real in [0,1]", "0", "epsilon-greedy noise around the base policy"},
      {"behavior.trigger.dim", "int", "none", "apply noise only where state[dim] passes the test"},
      {"behavior.trigger.op", "\">\" or \"<\"", "\">\"", "comparison of the trigger"},
      {"behavior.trigger.threshold", "real", "0", "threshold of the trigger"},
      {"eval.base", "string", "\"eval\"", "as behavior.base"},
      {"eval.action", "int", "0", "as behavior.action"},
      {"eval.eps", "real in [0,1]", "0", "as behavior.eps"},
      {"eval.trigger.dim", "int", "none", "as behavior.trigger.dim"},
      {"eval.trigger.op", "string", "\">\"", "as behavior.trigger.op"},
      {"eval.trigger.threshold", "real", "0", "as behavior.trigger.threshold"},
      {"model.learner", "string", "\"analytic\"", "analytic, ridge_per_action or mlp"},
      {"model.ridge_lambda", "real >= 0", "0", "ridge penalty on slopes"},
      {"model.mlp_hidden", "int >= 1", "64", "hidden units per layer"},
      {"model.mlp_layers", "1 or 2", "1", "hidden layers"},
      {"model.mlp_epochs", "int", "2000", "full-batch gradient steps"},
      {"model.mlp_learning_rate", "real > 0", "0.05", "gradient step size"},
      {"model.seed", "u64", "derived", "initialization seed; derived from the repetition seed if absent"},
      {"model.toy_reward", "string", "\"accurate\"", "planning_toy analytic reward model: accurate or inaccurate"},
      {"bound.L_t", "real >= 0", "global estimate", "transition Lipschitz constant used by the planner"},
      {"bound.L_r", "real >= 0", "global estimate", "reward Lipschitz constant used by the planner"},
      {"selector.alpha_r", "real >= 0", "0", "weight of the reward error in the greedy rule"},
      {"selector.mcts_budget", "int >= 1", "128", "rollouts per planning decision"},
      {"selector.horizon", "int", "0", "planning lookahead; 0 = remaining simulation horizon"},
      {"selector.delta_multiplier", "string", "\"L_r\"", "constant multiplying the state error: L_r or L_t"},
      {"sim.n_rollouts", "int >= 1", "10", "simulated rollouts per estimate"},
      {"sim.horizon", "int", "0", "simulation length; 0 = env horizon"},
      {"sim.gamma", "real in (0,1]", "env gamma", "discount"},
      {"sim.stuck_reward", "real", "none", "reward per remaining step once the selected model cannot predict"},
      {"error_map.lo", "[x, y]", "none", "grid lower corner"},
      {"error_map.hi", "[x, y]", "none", "grid upper corner"},
      {"error_map.resolution", "[nx, ny]", "none", "grid points per axis"},
  };
  return fields;
}

void check_keys(const json& obj, const std::string& prefix) {
  if (!obj.is_object()) throw ConfigError(prefix.empty() ? "<root>" : prefix, "expected an object");
  std::set<std::string> allowed;
  const std::string p = prefix.empty() ? "" : prefix + ".";
  for (const auto& f : schema()) {
    const std::string path = f.path;
    if (path.rfind(p, 0) != 0) continue;
    const std::string rest = path.substr(p.size());
    allowed.insert(rest.substr(0, rest.find('.')));
  }
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError(p + k, "unknown key");
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

template <typename T>
T get(const json& obj, const std::string& prefix, const std::string& key, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(join(prefix, key), std::string("wrong type: ") + e.what());
  }
}

template <typename T>
std::optional<T> get_opt(const json& obj, const std::string& prefix, const std::string& key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return get<T>(obj, prefix, key, T{});
}

std::size_t get_count(const json& obj, const std::string& prefix, const std::string& key,
                      std::size_t fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(join(prefix, key), "expected a nonnegative integer");
  return v.get<std::size_t>();
}

StateVec to_state(const std::vector<double>& v) {
  return Eigen::Map<const StateVec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Box parse_box(const json& obj, const std::string& path, const Box& fallback) {
  check_keys(obj, path);
  Box b = fallback;
  if (auto lo = get_opt<std::vector<double>>(obj, path, "lo")) b.lo = to_state(*lo);
  if (auto hi = get_opt<std::vector<double>>(obj, path, "hi")) b.hi = to_state(*hi);
  b.validate(path);
  return b;
}

PolicySpec parse_policy(const json& obj, const std::string& path, PolicySpec spec) {
  check_keys(obj, path);
  spec.base = get<std::string>(obj, path, "base", spec.base);
  if (spec.base != "eval" && spec.base != "behavior" && spec.base != "uniform" &&
      spec.base != "constant")
    throw ConfigError(path + ".base", "must be eval, behavior, uniform or constant");
  spec.action = get_count(obj, path, "action", spec.action);
  spec.eps = get<double>(obj, path, "eps", spec.eps);
  if (!(spec.eps >= 0.0 && spec.eps <= 1.0)) throw ConfigError(path + ".eps", "must lie in [0, 1]");
  if (obj.contains("trigger") && !obj.at("trigger").is_null()) {
    const auto& t = obj.at("trigger");
    const std::string tp = path + ".trigger";
    check_keys(t, tp);
    TriggerSpec ts;
    if (!t.contains("dim")) throw ConfigError(tp + ".dim", "is required");
    ts.dim = get_count(t, tp, "dim", 0);
    const auto op = get<std::string>(t, tp, "op", ">");
    if (op != ">" && op != "<") throw ConfigError(tp + ".op", "must be \">\" or \"<\"");
    ts.greater = op == ">";
    ts.threshold = get<double>(t, tp, "threshold", 0.0);
    spec.trigger = ts;
  }
  return spec;
}

EnvSpec parse_env(const json& obj) {
  check_keys(obj, "env");
  EnvSpec env;
  const auto type = get<std::string>(obj, "env", "type", "windy2d");
  if (type == "windy2d") {
    env.type = EnvType::windy2d;
    auto& w = env.windy;
    w.horizon = get_count(obj, "env", "horizon", w.horizon);
    w.step_size = get<double>(obj, "env", "step_size", w.step_size);
    w.wind_slope = get<double>(obj, "env", "wind_slope", w.wind_slope);
    if (obj.contains("goal")) w.goal = parse_box(obj.at("goal"), "env.goal", w.goal);
    if (obj.contains("start")) w.start = parse_box(obj.at("start"), "env.start", w.start);
    w.validate();
  } else if (type == "planning_toy") {
    env.type = EnvType::planning_toy;
    env.toy_horizon = get_count(obj, "env", "horizon", env.toy_horizon);
    if (env.toy_horizon < 1) throw ConfigError("env.horizon", "must be at least 1");
  } else if (type == "acrobot") {
    env.type = EnvType::acrobot;
    auto& a = env.acrobot;
    a.horizon = get_count(obj, "env", "horizon", a.horizon);
    a.dt = get<double>(obj, "env", "dt", a.dt);
    a.g = get<double>(obj, "env", "g", a.g);
    a.goal_height = get<double>(obj, "env", "goal_height", a.goal_height);
    a.init_noise = get<double>(obj, "env", "init_noise", a.init_noise);
    a.validate();
  } else if (type == "ode") {
    env.type = EnvType::ode;
    if (!obj.contains("ode")) throw ConfigError("env.ode", "is required for ode environments");
    env.ode = ode_spec_from_json(obj.at("ode").dump());
    if (obj.contains("horizon")) {
      env.ode.horizon = get_count(obj, "env", "horizon", env.ode.horizon);
      env.ode.validate();
    }
  } else {
    throw ConfigError("env.type", "unknown environment '" + type + "'");
  }
  env.filter_height = get_opt<double>(obj, "env", "filter_height");
  if (env.filter_height && env.type != EnvType::acrobot)
    throw ConfigError("env.filter_height", "applies to acrobot only");
  if (type != "windy2d")
    for (const char* k : {"step_size", "wind_slope", "goal", "start"})
      if (obj.contains(k)) throw ConfigError(std::string("env.") + k, "applies to windy2d only");
  if (type != "acrobot")
    for (const char* k : {"dt", "g", "goal_height", "init_noise"})
      if (obj.contains(k)) throw ConfigError(std::string("env.") + k, "applies to acrobot only");
  if (type != "ode" && obj.contains("ode")) throw ConfigError("env.ode", "applies to ode only");
  return env;
}

}  // namespace

const std::vector<std::string>& known_estimators() {
  static const std::vector<std::string> names = {"M_p", "M_np", "MoE", "MCTS-MoE", "MoE-true",
                                                 "MCTS-MoE-true", "IS", "WIS", "PDIS", "CWPDIS",
                                                 "DR", "WDR"};
  return names;
}

void ExperimentConfig::validate() const {
  if (n_repetitions < 1) throw ConfigError("n_repetitions", "must be at least 1");
  if (n_behavior_trajectories < 1) throw ConfigError("n_behavior_trajectories", "must be at least 1");
  if (true_value_rollouts < 1) throw ConfigError("true_value_rollouts", "must be at least 1");
  if (estimators.empty()) throw ConfigError("estimators", "must be nonempty");
  std::set<std::string> seen;
  for (const auto& e : estimators) {
    if (std::find(known_estimators().begin(), known_estimators().end(), e) == known_estimators().end())
      throw ConfigError("estimators", "unknown estimator '" + e + "'");
    if (!seen.insert(e).second) throw ConfigError("estimators", "duplicate estimator '" + e + "'");
  }
  for (double w : metric_weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("metric_weights", "must be positive and finite");
  if (radius && !(*radius >= 0.0)) throw ConfigError("radius", "must be nonnegative");
  if (L_t && !(*L_t >= 0.0)) throw ConfigError("bound.L_t", "must be nonnegative");
  if (L_r && !(*L_r >= 0.0)) throw ConfigError("bound.L_r", "must be nonnegative");
  if (sim_gamma && !(*sim_gamma > 0.0 && *sim_gamma <= 1.0))
    throw ConfigError("sim.gamma", "must lie in (0, 1]");
  if (sim.n_rollouts < 1) throw ConfigError("sim.n_rollouts", "must be at least 1");
  selector.validate();
  model.fit.validate();
  if (model.learner != "analytic" && model.learner != "ridge_per_action" && model.learner != "mlp")
    throw ConfigError("model.learner", "must be analytic, ridge_per_action or mlp");
  if (model.learner == "analytic" && env.type != EnvType::windy2d && env.type != EnvType::planning_toy)
    throw ConfigError("model.learner", "analytic models exist for windy2d and planning_toy only");
  if (env.type == EnvType::ode && (eval.base == "eval" || eval.base == "behavior" ||
                                   behavior.base == "eval" || behavior.base == "behavior"))
    throw ConfigError(eval.base == "eval" || eval.base == "behavior" ? "eval.base" : "behavior.base",
                      "ode environments need a uniform or constant policy");
  if (error_map) {
    if (error_map->lo.size() != 2 || error_map->hi.size() != 2 || error_map->resolution.size() != 2)
      throw ConfigError("error_map", "lo, hi and resolution must have two entries");
    for (std::size_t r : error_map->resolution)
      if (r < 1) throw ConfigError("error_map.resolution", "must be at least 1");
  }
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  check_keys(root, "");
  ExperimentConfig cfg;
  cfg.source_json = root.dump();
  cfg.name = get<std::string>(root, "", "name", cfg.name);
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned() && !root.at("seed").is_number_integer())
      throw ConfigError("seed", "expected an unsigned integer");
    cfg.seed = root.at("seed").get<std::uint64_t>();
  }
  cfg.n_repetitions = get_count(root, "", "n_repetitions", cfg.n_repetitions);
  cfg.n_behavior_trajectories = get_count(root, "", "n_behavior_trajectories", cfg.n_behavior_trajectories);
  cfg.behavior_horizon = get_count(root, "", "behavior_horizon", cfg.behavior_horizon);
  cfg.true_value_rollouts = get_count(root, "", "true_value_rollouts", cfg.true_value_rollouts);
  cfg.estimators = get<std::vector<std::string>>(root, "", "estimators", cfg.estimators);
  cfg.metric_weights = get<std::vector<double>>(root, "", "metric_weights", cfg.metric_weights);
  cfg.radius = get_opt<double>(root, "", "radius");
  cfg.eval_from_env_starts = get<bool>(root, "", "eval_from_env_starts", cfg.eval_from_env_starts);

  if (root.contains("env")) cfg.env = parse_env(root.at("env"));
  if (root.contains("behavior")) cfg.behavior = parse_policy(root.at("behavior"), "behavior", cfg.behavior);
  if (root.contains("eval")) cfg.eval = parse_policy(root.at("eval"), "eval", cfg.eval);

  if (root.contains("model")) {
    const auto& m = root.at("model");
    check_keys(m, "model");
    cfg.model.learner = get<std::string>(m, "model", "learner", cfg.model.learner);
    auto& f = cfg.model.fit;
    f.learner = cfg.model.learner == "mlp" ? Learner::mlp : Learner::ridge_per_action;
    f.ridge_lambda = get<double>(m, "model", "ridge_lambda", f.ridge_lambda);
    f.mlp_hidden = get_count(m, "model", "mlp_hidden", f.mlp_hidden);
    f.mlp_layers = get_count(m, "model", "mlp_layers", f.mlp_layers);
    f.mlp_epochs = get_count(m, "model", "mlp_epochs", f.mlp_epochs);
    f.mlp_learning_rate = get<double>(m, "model", "mlp_learning_rate", f.mlp_learning_rate);
    cfg.model.seed = get_opt<std::uint64_t>(m, "model", "seed");
    const auto tr = get<std::string>(m, "model", "toy_reward", "accurate");
    if (tr == "accurate")
      cfg.model.toy_reward = ToyRewardModel::accurate;
    else if (tr == "inaccurate")
      cfg.model.toy_reward = ToyRewardModel::inaccurate;
    else
      throw ConfigError("model.toy_reward", "must be accurate or inaccurate");
  }
  if (root.contains("bound")) {
    const auto& b = root.at("bound");
    check_keys(b, "bound");
    cfg.L_t = get_opt<double>(b, "bound", "L_t");
    cfg.L_r = get_opt<double>(b, "bound", "L_r");
  }
  if (root.contains("selector")) {
    const auto& s = root.at("selector");
    check_keys(s, "selector");
    cfg.selector.alpha_r = get<double>(s, "selector", "alpha_r", cfg.selector.alpha_r);
    cfg.selector.mcts_budget = get_count(s, "selector", "mcts_budget", cfg.selector.mcts_budget);
    cfg.selector.horizon = get_count(s, "selector", "horizon", cfg.selector.horizon);
    const auto dm = get<std::string>(s, "selector", "delta_multiplier", "L_r");
    if (dm == "L_r")
      cfg.selector.delta_multiplier = DeltaMultiplier::L_r;
    else if (dm == "L_t")
      cfg.selector.delta_multiplier = DeltaMultiplier::L_t;
    else
      throw ConfigError("selector.delta_multiplier", "must be L_r or L_t");
  }
  if (root.contains("sim")) {
    const auto& s = root.at("sim");
    check_keys(s, "sim");
    cfg.sim.n_rollouts = get_count(s, "sim", "n_rollouts", cfg.sim.n_rollouts);
    cfg.sim.horizon = get_count(s, "sim", "horizon", 0);
    cfg.sim_gamma = get_opt<double>(s, "sim", "gamma");
    cfg.sim.stuck_reward = get_opt<double>(s, "sim", "stuck_reward");
  } else {
    cfg.sim.horizon = 0;
  }
  if (root.contains("error_map")) {
    const auto& e = root.at("error_map");
    check_keys(e, "error_map");
    ErrorMapGrid g;
    g.lo = get<std::vector<double>>(e, "error_map", "lo", {});
    g.hi = get<std::vector<double>>(e, "error_map", "hi", {});
    g.resolution = get<std::vector<std::size_t>>(e, "error_map", "resolution", {});
    cfg.error_map = g;
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

std::string config_schema_reference() {
  std::ostringstream out;
  out << "Experiment config reference (JSON). Keys are nested by '.'.\n\n";
  for (const auto& f : schema())
    out << f.path << "\n  type: " << f.type << "\n  default: " << f.fallback << "\n  " << f.meaning
        << "\n";
  return out.str();
}

}  // namespace moeope
