#include "moeope/experiment/reproduce.hpp"

#include "moeope/builtin_configs.hpp"
#include "moeope/core/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace moeope {

namespace {

using nlohmann::ordered_json;

const std::vector<std::size_t>& consistency_sizes() {
  static const std::vector<std::size_t> sizes{10, 50, 250};
  return sizes;
}

ExperimentConfig seeded(const std::string& name, std::optional<std::uint64_t> seed) {
  auto cfg = builtin_config(name);
  if (seed) cfg.seed = *seed;
  return cfg;
}

}  // namespace

ReproduceTarget reproduce_target_from_string(const std::string& s) {
  if (s == "table1") return ReproduceTarget::table1;
  if (s == "table2") return ReproduceTarget::table2;
  if (s == "consistency") return ReproduceTarget::consistency;
  throw ConfigError("reproduce", "unknown target '" + s + "' (table1, table2 or consistency)");
}

const std::vector<std::string>& builtin_config_names() {
  static const std::vector<std::string> names{"table1",     "table2_accurate", "table2_inaccurate",
                                              "consistency", "error_maps",     "acrobot_filter",
                                              "hiv_ode"};
  return names;
}

std::string builtin_config_text(const std::string& name) {
  if (name == "table1") return builtin::table1;
  if (name == "table2_accurate") return builtin::table2_accurate;
  if (name == "table2_inaccurate") return builtin::table2_inaccurate;
  if (name == "consistency") return builtin::consistency;
  if (name == "error_maps") return builtin::error_maps;
  if (name == "acrobot_filter") return builtin::acrobot_filter;
  if (name == "hiv_ode") return builtin::hiv_ode;
  throw ConfigError("config", "no built-in config named '" + name + "'");
}

ExperimentConfig builtin_config(const std::string& name) {
  return parse_experiment_config(builtin_config_text(name));
}

Table1Summary summarize_table1(const ExperimentReport& report) {
  Table1Summary s;
  s.n_repetitions = report.repetitions.size();
  const double v = report.v_true;
  for (const auto& r : report.repetitions) {
    const auto& p = r.at("M_p");
    const auto& np = r.at("M_np");
    const auto& moe = r.at("MoE");
    const bool never = np.n_rollouts > 0 && np.n_unreached_goal == np.n_rollouts;
    const bool over = p.v_hat > v;
    const bool closest =
        std::abs(moe.v_hat - v) < std::min(std::abs(p.v_hat - v), std::abs(np.v_hat - v));
    s.np_never_reached += never;
    s.p_overestimates += over;
    s.moe_closest += closest;
    s.all_hold += never && over && closest;
  }
  return s;
}

Table2Row summarize_table2(const std::string& variant, const ExperimentReport& report) {
  Table2Row row;
  row.variant = variant;
  row.v_true = report.v_true;
  for (const auto& a : report.aggregates) row.abs_error[a.name] = std::abs(a.mean_v_hat - report.v_true);
  const double mcts = row.abs_error.at("MCTS-MoE-true");
  row.mcts_strictly_best = true;
  for (const auto& [name, err] : row.abs_error)
    if (name != "MCTS-MoE-true" && !(mcts < err)) row.mcts_strictly_best = false;
  row.greedy_worse_than_mcts = row.abs_error.at("MoE-true") > mcts;
  return row;
}

std::vector<ConsistencyPoint> run_consistency(const ExperimentConfig& base,
                                              const std::vector<std::size_t>& sizes, std::size_t jobs) {
  std::vector<ConsistencyPoint> out;
  for (std::size_t n : sizes) {
    ExperimentConfig cfg = base;
    cfg.n_behavior_trajectories = n;
    const auto report = run_experiment(cfg, jobs);
    const auto& agg = report.aggregate("MoE");
    out.push_back({n, agg.median_abs_error, agg.rmse});
  }
  return out;
}

std::string reproduce(ReproduceTarget target, std::optional<std::uint64_t> seed, std::size_t jobs) {
  ordered_json j;
  switch (target) {
    case ReproduceTarget::table1: {
      const auto cfg = seeded("table1", seed);
      const auto report = run_experiment(cfg, jobs);
      const auto s = summarize_table1(report);
      j["target"] = "table1";
      ordered_json table;
      table["v_true"] = report.v_true;
      for (const auto& a : report.aggregates) {
        const bool never = a.n_never_reached == report.repetitions.size();
        table[a.name] = never ? ordered_json("-inf (capped at " + ordered_json(a.mean_v_hat).dump() + ")")
                              : ordered_json(a.mean_v_hat);
      }
      j["table"] = table;
      ordered_json pattern;
      pattern["n_repetitions"] = s.n_repetitions;
      pattern["np_never_reached"] = s.np_never_reached;
      pattern["p_overestimates"] = s.p_overestimates;
      pattern["moe_closest"] = s.moe_closest;
      pattern["all_hold"] = s.all_hold;
      pattern["fraction_all_hold"] = s.fraction_all_hold();
      j["pattern"] = pattern;
      j["report"] = ordered_json::parse(report_json(report));
      break;
    }
    case ReproduceTarget::table2: {
      j["target"] = "table2";
      ordered_json rows = ordered_json::array();
      ordered_json reports = ordered_json::object();
      for (const char* variant : {"accurate", "inaccurate"}) {
        const auto cfg = seeded(std::string("table2_") + variant, seed);
        const auto report = run_experiment(cfg, jobs);
        const auto row = summarize_table2(variant, report);
        ordered_json rj;
        rj["reward_model"] = variant;
        rj["v_true"] = row.v_true;
        for (const auto& name : cfg.estimators) rj["abs_error"][name] = row.abs_error.at(name);
        rj["mcts_strictly_best"] = row.mcts_strictly_best;
        rj["greedy_worse_than_mcts"] = row.greedy_worse_than_mcts;
        rows.push_back(rj);
        reports[variant] = ordered_json::parse(report_json(report));
      }
      j["table"] = rows;
      j["reports"] = reports;
      break;
    }
    case ReproduceTarget::consistency: {
      const auto cfg = seeded("consistency", seed);
      const auto points = run_consistency(cfg, consistency_sizes(), jobs);
      j["target"] = "consistency";
      j["estimator"] = "MoE";
      j["n_repetitions"] = cfg.n_repetitions;
      ordered_json pts = ordered_json::array();
      bool decreasing = true;
      for (std::size_t i = 0; i < points.size(); ++i) {
        ordered_json pj;
        pj["n_trajectories"] = points[i].n_trajectories;
        pj["median_abs_error"] = points[i].median_abs_error;
        pj["rmse"] = points[i].rmse;
        pts.push_back(pj);
        if (i > 0 && !(points[i].median_abs_error < points[i - 1].median_abs_error)) decreasing = false;
      }
      j["points"] = pts;
      j["median_strictly_decreasing"] = decreasing;
      j["config"] = ordered_json::parse(cfg.source_json);
      break;
    }
  }
  return j.dump(2) + "\n";
}

}  // namespace moeope
