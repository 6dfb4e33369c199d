#include "moeope/core/dataset_io.hpp"
#include "moeope/core/error.hpp"
#include "moeope/experiment/error_maps.hpp"
#include "moeope/experiment/reproduce.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace moeope;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string out;
  std::string target;
};

ExperimentConfig load(const Options& opt) {
  if (opt.config.empty()) throw ConfigError("--config", "is required");
  ExperimentConfig cfg = opt.config.rfind("builtin:", 0) == 0
                             ? builtin_config(opt.config.substr(8))
                             : load_experiment_config(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;
  return cfg;
}

void emit(const Options& opt, const std::string& filename, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(opt.out);
  const fs::path path = fs::path(opt.out) / filename;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  std::cerr << "wrote " << path.string() << "\n";
}

void cmd_generate(const Options& opt) {
  const auto cfg = load(opt);
  const auto env = build_environment(cfg);
  const auto data = generate_behavior_data(cfg, env, repetition_seed(cfg.seed, 0));
  if (opt.out.empty()) {
    write_dataset_csv(data, std::cout);
    return;
  }
  fs::create_directories(opt.out);
  save_dataset(data, fs::path(opt.out) / "data.csv");
  std::cerr << "wrote " << (fs::path(opt.out) / "data.csv").string() << "\n";
}

void cmd_fit(const Options& opt, const std::string& data_path) {
  const auto cfg = load(opt);
  const auto env = build_environment(cfg);
  const auto seed = repetition_seed(cfg.seed, 0);
  const Dataset data = data_path.empty() ? generate_behavior_data(cfg, env, seed) : load_dataset(data_path);
  const auto model = fit_experiment_model(cfg, env, data, seed);
  emit(opt, "model.json", model->serialize() + "\n");
}

void cmd_evaluate(const Options& opt) {
  const auto report = run_experiment(load(opt), opt.jobs);
  emit(opt, "report.json", report_json(report) + "\n");
}

void cmd_error_maps(const Options& opt) {
  const auto cfg = load(opt);
  if (!cfg.error_map) throw ConfigError("error_map", "is required for error-maps");
  const auto rows = emit_error_maps(cfg, *cfg.error_map);
  emit(opt, "error_map.csv", error_map_csv(rows));
  std::cerr << "correct selections: " << correct_fraction(rows) << "\n";
}

void cmd_reproduce(const Options& opt) {
  const auto target = reproduce_target_from_string(opt.target);
  emit(opt, opt.target + ".json", reproduce(target, opt.seed, opt.jobs));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixture-of-experts off-policy evaluation"};
  app.require_subcommand(1);
  Options opt;
  std::string data_path;

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opt.config, "experiment config (JSON file or builtin:<name>)");
    if (needs_config) c->required();
    sub->add_option("--seed", opt.seed, "master seed override");
    sub->add_option("--jobs", opt.jobs, "repetitions run concurrently")->check(CLI::PositiveNumber);
    sub->add_option("--out", opt.out, "output directory (stdout when absent)");
  };

  auto* generate = app.add_subcommand("generate", "write behavior data of the first repetition");
  add_common(generate, true);
  auto* fit = app.add_subcommand("fit", "fit the parametric model and write it as JSON");
  add_common(fit, true);
  fit->add_option("--data", data_path, "dataset CSV (generated from the config when absent)");
  auto* evaluate = app.add_subcommand("evaluate", "run every estimator and write the report");
  add_common(evaluate, true);
  auto* maps = app.add_subcommand("error-maps", "write the error-estimator grid CSV");
  add_common(maps, true);
  auto* repro = app.add_subcommand("reproduce", "run a built-in experiment");
  add_common(repro, false);
  repro->add_option("target", opt.target, "table1, table2 or consistency")->required();
  auto* schema = app.add_subcommand("schema", "print the config reference");
  auto* configs = app.add_subcommand("config", "print a built-in config");
  std::string config_name;
  configs->add_option("name", config_name, "built-in config name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*generate) cmd_generate(opt);
    else if (*fit) cmd_fit(opt, data_path);
    else if (*evaluate) cmd_evaluate(opt);
    else if (*maps) cmd_error_maps(opt);
    else if (*repro) cmd_reproduce(opt);
    else if (*schema) std::cout << config_schema_reference();
    else if (*configs) std::cout << builtin_config_text(config_name);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
