#include "moeope/experiment/runner.hpp"

#include "moeope/baselines/importance_sampling.hpp"
#include "moeope/core/error.hpp"
#include "moeope/core/rng.hpp"
#include "moeope/models/nonparametric.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

namespace moeope {

namespace {

PolicyPtr make_policy(const PolicySpec& spec, const std::string& path, PolicyPtr eval,
                      PolicyPtr behavior, std::size_t n_actions, std::size_t dim) {
  PolicyPtr base;
  if (spec.base == "eval") {
    base = eval;
  } else if (spec.base == "behavior") {
    base = behavior;
  } else if (spec.base == "uniform") {
    base = std::make_shared<UniformPolicy>(n_actions);
  } else {
    if (spec.action >= n_actions) throw ConfigError(path + ".action", "is not a valid action");
    const ActionId a(static_cast<std::uint32_t>(spec.action));
    base = std::make_shared<DeterministicPolicy>(n_actions, [a](const StateVec&) { return a; });
  }
  if (!base) throw ConfigError(path + ".base", "this environment has no such policy");
  if (spec.eps == 0.0) return base;
  EpsGreedyPolicy::Trigger trigger;
  if (spec.trigger) {
    const auto t = *spec.trigger;
    if (t.dim >= dim) throw ConfigError(path + ".trigger.dim", "exceeds the state dimension");
    trigger = [t](const StateVec& x) {
      const double v = x[static_cast<Eigen::Index>(t.dim)];
      return t.greater ? v > t.threshold : v < t.threshold;
    };
  }
  return make_eps_greedy(base, spec.eps, std::move(trigger));
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool is_model_estimator(const std::string& name) {
  return name == "M_p" || name == "M_np" || name == "MoE" || name == "MCTS-MoE" ||
         name == "MoE-true" || name == "MCTS-MoE-true";
}

}  // namespace

ExperimentEnv build_environment(const ExperimentConfig& cfg) {
  ExperimentEnv out;
  PolicyPtr eval, behavior;
  switch (cfg.env.type) {
    case EnvType::windy2d:
      out.env = std::make_shared<Windy2D>(cfg.env.windy);
      eval = windy_eval_policy();
      behavior = windy_behavior_policy();
      break;
    case EnvType::planning_toy: {
      out.env = std::make_shared<PlanningToy>(cfg.env.toy_horizon);
      const auto p = planning_toy_policies();
      eval = p.eval;
      behavior = p.behavior;
      out.behavior_starts = planning_toy_behavior_starts();
      out.eval_starts = {planning_toy_eval_start()};
      break;
    }
    case EnvType::acrobot:
      out.env = std::make_shared<Acrobot>(cfg.env.acrobot);
      eval = acrobot_eval_policy();
      behavior = eval;
      break;
    case EnvType::ode:
      out.env = ode_env(cfg.env.ode);
      break;
  }
  const auto n_actions = out.env->n_actions();
  const auto dim = out.env->dim();
  out.eval = make_policy(cfg.eval, "eval", eval, behavior, n_actions, dim);
  out.behavior = make_policy(cfg.behavior, "behavior", eval, behavior, n_actions, dim);
  out.horizon = cfg.sim.horizon > 0 ? cfg.sim.horizon : out.env->horizon();
  out.gamma = cfg.sim_gamma ? *cfg.sim_gamma : out.env->gamma();
  if (!cfg.metric_weights.empty() && cfg.metric_weights.size() != dim)
    throw ConfigError("metric_weights", "needs one weight per state dimension");
  return out;
}

Dataset generate_behavior_data(const ExperimentConfig& cfg, const ExperimentEnv& env,
                               std::uint64_t rep_seed) {
  const std::size_t horizon = cfg.behavior_horizon > 0 ? cfg.behavior_horizon : env.env->horizon();
  return generate_dataset(*env.env, *env.behavior, cfg.n_behavior_trajectories, horizon,
                          derive_seed(rep_seed, 1), env.behavior_starts);
}

ModelPtr fit_experiment_model(const ExperimentConfig& cfg, const ExperimentEnv& env,
                              const Dataset& data, std::uint64_t rep_seed) {
  if (cfg.model.learner == "analytic") {
    if (cfg.env.type == EnvType::windy2d) return windy_no_wind_model(cfg.env.windy);
    if (cfg.env.type == EnvType::planning_toy) return planning_toy_parametric_model(cfg.model.toy_reward);
    throw ConfigError("model.learner", "no analytic model for environment " + env.env->name());
  }
  ParametricFitConfig fit = cfg.model.fit;
  fit.seed = cfg.model.seed ? *cfg.model.seed : derive_seed(rep_seed, 2);
  return fit_parametric(data, fit);
}

PreparedRepetition prepare_repetition(const ExperimentConfig& cfg, const ExperimentEnv& env,
                                      std::uint64_t rep_seed) {
  PreparedRepetition p;
  p.data = std::make_shared<const Dataset>(generate_behavior_data(cfg, env, rep_seed));
  p.np_data = cfg.env.filter_height
                  ? std::make_shared<const Dataset>(filter_dataset_by_height(*p.data, *cfg.env.filter_height))
                  : p.data;
  const Metric metric = cfg.metric_weights.empty()
                            ? Metric(env.env->dim())
                            : Metric(Eigen::Map<const Eigen::VectorXd>(
                                  cfg.metric_weights.data(),
                                  static_cast<Eigen::Index>(cfg.metric_weights.size())));
  p.parametric = fit_experiment_model(cfg, env, *p.data, rep_seed);
  p.nonparametric = std::make_shared<NonparametricModel>(p.np_data, metric);
  p.errors = std::make_shared<const ErrorContext>(p.np_data, metric, p.parametric, cfg.radius);

  auto& s = p.selection;
  s.errors = p.errors;
  s.nonparametric = p.nonparametric;
  s.eval_policy = env.eval;
  const auto& global = p.errors->global();
  s.bound.L_t = cfg.L_t ? *cfg.L_t : (global ? global->L_t_hat : 1.0);
  s.bound.L_r = cfg.L_r ? *cfg.L_r : (global ? global->L_r_hat : 1.0);
  s.bound.gamma = env.gamma;
  s.bound.validate();
  EnvPtr e = env.env;
  s.oracle = [e](const StateVec& x, ActionId a) { return e->step(x, a); };
  if (cfg.env.type == EnvType::windy2d || cfg.env.type == EnvType::acrobot)
    s.is_terminal = [e](const StateVec& x) { return e->is_terminal(x); };
  return p;
}

std::uint64_t repetition_seed(std::uint64_t master, std::size_t i) { return derive_seed(master, i); }

const EstimatorRecord& RepetitionRecord::at(const std::string& name) const {
  for (const auto& e : estimates)
    if (e.name == name) return e;
  throw Error("repetition has no estimator '" + name + "'");
}

const EstimatorAggregate& ExperimentReport::aggregate(const std::string& name) const {
  for (const auto& a : aggregates)
    if (a.name == name) return a;
  throw Error("report has no estimator '" + name + "'");
}

RepetitionRecord run_repetition(const ExperimentConfig& cfg, const ExperimentEnv& env,
                                std::size_t index) {
  RepetitionRecord rec;
  rec.index = index;
  rec.seed = repetition_seed(cfg.seed, index);
  const auto prep = prepare_repetition(cfg, env, rec.seed);
  rec.n_transitions = prep.data->size();
  rec.n_np_transitions = prep.np_data->size();
  rec.radius = prep.errors->radius();
  rec.L_t = prep.selection.bound.L_t;
  rec.L_r = prep.selection.bound.L_r;

  SimConfig sim = cfg.sim;
  sim.horizon = env.horizon;
  sim.gamma = env.gamma;
  sim.seed = derive_seed(rec.seed, 3);
  sim.selector = cfg.selector;
  if (cfg.eval_from_env_starts) sim.initial_states = env.eval_starts;

  std::optional<ISInput> is_input;
  std::optional<ModelValueModel> values;

  for (const auto& name : cfg.estimators) {
    EstimatorRecord er;
    er.name = name;
    if (is_model_estimator(name)) {
      SimConfig s = sim;
      s.selector.use_true_errors = name.size() > 5 && name.substr(name.size() - 5) == "-true";
      if (name == "M_p")
        s.selector.mode = SelectorMode::parametric;
      else if (name == "M_np")
        s.selector.mode = SelectorMode::nonparametric;
      else if (name.rfind("MCTS", 0) == 0)
        s.selector.mode = SelectorMode::mcts;
      else
        s.selector.mode = SelectorMode::greedy;
      const auto est = simulate_value(prep.selection, s);
      er.v_hat = est.v_hat;
      er.n_rollouts = est.per_rollout_returns.size();
      er.n_unreached_goal = est.n_unreached_goal;
      er.parametric_steps = est.model_usage.parametric;
      er.nonparametric_steps = est.model_usage.nonparametric;
      double total = 0.0;
      const auto& starts = s.initial_states.empty() ? prep.errors->data().initial_states()
                                                    : s.initial_states;
      for (const auto& r : est.rollouts) {
        Rng rng(r.seed);
        std::uniform_int_distribution<std::size_t>(0, starts.size() - 1)(rng);
        const auto truth = rollout(*env.env, *env.eval, r.trajectory.start, env.horizon, rng);
        total += trajectory_error(r.trajectory, truth, prep.errors->metric());
      }
      er.eps_traj = total / static_cast<double>(est.rollouts.size());
    } else {
      if (!is_input) is_input = make_is_input(*prep.data, *env.eval, env.gamma);
      const auto variant = is_variant_from_string(name);
      if ((variant == ISVariant::DR || variant == ISVariant::WDR) && !values) {
        std::function<bool(const StateVec&)> term;
        if (prep.selection.is_terminal) term = prep.selection.is_terminal;
        values.emplace(prep.parametric, env.eval, env.gamma, term);
      }
      er.v_hat = is_estimate(*is_input, variant, values ? &*values : nullptr, env.horizon);
    }
    rec.estimates.push_back(std::move(er));
  }
  return rec;
}

std::vector<EstimatorAggregate> aggregate_records(const std::vector<RepetitionRecord>& reps,
                                                  const std::vector<std::string>& estimators,
                                                  double v_true, bool goal_domain) {
  std::vector<EstimatorAggregate> out;
  for (const auto& name : estimators) {
    EstimatorAggregate a;
    a.name = name;
    std::vector<double> abs_err;
    double sq = 0.0, sum = 0.0;
    for (const auto& r : reps) {
      const auto& e = r.at(name);
      const double err = e.v_hat - v_true;
      sq += err * err;
      sum += e.v_hat;
      abs_err.push_back(std::abs(err));
      if (goal_domain && e.n_rollouts > 0 && e.n_unreached_goal == e.n_rollouts) ++a.n_never_reached;
    }
    const double n = static_cast<double>(reps.size());
    a.rmse = std::sqrt(sq / n);
    a.mean_v_hat = sum / n;
    a.median_abs_error = median(abs_err);
    out.push_back(std::move(a));
  }
  for (auto& a : out)
    for (const auto& b : out)
      if (b.name == "IS" && b.rmse > 0.0) a.relative_rmse = a.rmse / b.rmse;
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t jobs) {
  cfg.validate();
  const ExperimentEnv env = build_environment(cfg);
  ExperimentReport report;
  report.config = cfg;
  report.goal_domain = cfg.env.type == EnvType::windy2d || cfg.env.type == EnvType::acrobot;
  report.v_true = evaluate_policy_true(*env.env, *env.eval, cfg.true_value_rollouts, env.horizon,
                                       env.gamma, derive_seed(cfg.seed, 0xffffffffULL),
                                       env.eval_starts);
  report.repetitions.resize(cfg.n_repetitions);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_index = 0;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.n_repetitions) return;
      try {
        report.repetitions[i] = run_repetition(cfg, env, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure || i < failed_index) {
          failure = std::current_exception();
          failed_index = i;
        }
        next = cfg.n_repetitions;
        return;
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(jobs, cfg.n_repetitions));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw Error("repetition " + std::to_string(failed_index) + " (seed " +
                  std::to_string(repetition_seed(cfg.seed, failed_index)) + ") failed: " + e.what());
    }
  }
  report.aggregates = aggregate_records(report.repetitions, cfg.estimators, report.v_true,
                                        report.goal_domain);
  return report;
}

std::string report_json(const ExperimentReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  ordered_json meta;
  meta["tool"] = "moeope";
  meta["version"] = "1.0.0";
  meta["name"] = report.config.name;
  meta["master_seed"] = report.config.seed;
  meta["config"] = nlohmann::json::parse(report.config.source_json);
  j["metadata"] = meta;
  j["v_true"] = report.v_true;

  ordered_json reps = ordered_json::array();
  for (const auto& r : report.repetitions) {
    ordered_json rj;
    rj["index"] = r.index;
    rj["seed"] = r.seed;
    rj["n_transitions"] = r.n_transitions;
    rj["n_np_transitions"] = r.n_np_transitions;
    rj["radius"] = std::isfinite(r.radius) ? ordered_json(r.radius) : ordered_json("inf");
    rj["L_t"] = r.L_t;
    rj["L_r"] = r.L_r;
    ordered_json est = ordered_json::object();
    for (const auto& e : r.estimates) {
      ordered_json ej;
      ej["v_hat"] = e.v_hat;
      if (e.eps_traj) ej["eps_traj"] = *e.eps_traj;
      if (e.n_rollouts > 0) {
        ej["n_rollouts"] = e.n_rollouts;
        ej["n_unreached_goal"] = e.n_unreached_goal;
        ej["parametric_steps"] = e.parametric_steps;
        ej["nonparametric_steps"] = e.nonparametric_steps;
        if (report.goal_domain && e.n_unreached_goal == e.n_rollouts)
          ej["display"] = "-inf (capped at " + nlohmann::json(e.v_hat).dump() + ")";
      }
      est[e.name] = ej;
    }
    rj["estimates"] = est;
    reps.push_back(rj);
  }
  j["repetitions"] = reps;

  ordered_json agg = ordered_json::object();
  for (const auto& a : report.aggregates) {
    ordered_json aj;
    aj["rmse"] = a.rmse;
    aj["median_abs_error"] = a.median_abs_error;
    aj["mean_v_hat"] = a.mean_v_hat;
    if (a.relative_rmse) aj["relative_rmse_vs_IS"] = *a.relative_rmse;
    if (report.goal_domain) aj["n_never_reached"] = a.n_never_reached;
    agg[a.name] = aj;
  }
  j["aggregates"] = agg;
  return j.dump(2);
}

}  // namespace moeope
