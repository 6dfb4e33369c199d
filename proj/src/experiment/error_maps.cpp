#include "moeope/experiment/error_maps.hpp"

#include "moeope/core/error.hpp"
#include "moeope/selection/greedy.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace moeope {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string est_field(const ErrorEstimate& e, double v) { return e.supported ? num(v) : "nan"; }

std::vector<double> axis(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  if (n == 1) return {0.5 * (lo + hi)};
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

}  // namespace

std::string selected_label(const ErrorMapRow& row) {
  if (row.fallback) return "parametric_fallback";
  return to_string(row.selected);
}

std::vector<ErrorMapRow> error_map_rows(const PreparedRepetition& prep, const SelectorConfig& selector,
                                        const std::vector<StateVec>& points) {
  const auto& ctx = prep.selection;
  const double alpha = selector.alpha_r;
  std::vector<ErrorMapRow> rows;
  for (const auto& x : points) {
    for (std::uint32_t k = 0; k < prep.data->n_actions(); ++k) {
      const ActionId a(k);
      ErrorMapRow row;
      row.x = x;
      row.action = a;
      const auto d = greedy_decide(ctx, selector, x, a);
      row.est_np = d.np;
      row.est_p = d.p;
      row.selected = d.model;
      row.fallback = d.fallback;
      row.true_np = ctx.error_of(ModelKind::nonparametric, x, a, true);
      row.true_p = ctx.error_of(ModelKind::parametric, x, a, true);
      const double np = row.true_np.supported ? row.true_np.eps_t + alpha * row.true_np.eps_r
                                              : std::numeric_limits<double>::infinity();
      const double p = row.true_p.supported ? row.true_p.eps_t + alpha * row.true_p.eps_r
                                            : std::numeric_limits<double>::infinity();
      row.correct = row.selected == ModelKind::nonparametric ? np <= p : p <= np;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ErrorMapRow> emit_error_maps(const ExperimentConfig& cfg, const ErrorMapGrid& grid) {
  const ExperimentEnv env = build_environment(cfg);
  if (env.env->dim() != 2) throw ConfigError("env.type", "error maps need a 2-D environment");
  if (grid.lo.size() != 2 || grid.hi.size() != 2 || grid.resolution.size() != 2)
    throw ConfigError("error_map", "lo, hi and resolution need two entries each");
  const auto prep = prepare_repetition(cfg, env, repetition_seed(cfg.seed, 0));
  std::vector<StateVec> points;
  const auto xs = axis(grid.lo[0], grid.hi[0], grid.resolution[0]);
  const auto ys = axis(grid.lo[1], grid.hi[1], grid.resolution[1]);
  for (double y : ys)
    for (double x : xs) {
      StateVec v(2);
      v << x, y;
      points.push_back(v);
    }
  return error_map_rows(prep, cfg.selector, points);
}

std::string error_map_csv(const std::vector<ErrorMapRow>& rows) {
  std::string out = "x0,x1,action,true_eps_np,est_eps_np,true_eps_p,est_eps_p,selected,correct\n";
  for (const auto& r : rows) {
    out += num(r.x[0]) + ',' + num(r.x[1]) + ',' + std::to_string(r.action.value) + ',';
    out += est_field(r.true_np, r.true_np.eps_t) + ',' + est_field(r.est_np, r.est_np.eps_t) + ',';
    out += est_field(r.true_p, r.true_p.eps_t) + ',' + num(r.est_p.eps_t) + ',';
    out += selected_label(r) + ',' + (r.correct ? "1" : "0") + '\n';
  }
  return out;
}

double correct_fraction(const std::vector<ErrorMapRow>& rows) {
  if (rows.empty()) return 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) n += r.correct ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(rows.size());
}

}  // namespace moeope
