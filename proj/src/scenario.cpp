#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "leakscope/harness.hpp"
#include "leakscope/specfun.hpp"

namespace leakscope::harness {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> sweep_grid(const SweepAxis& axis) {
  std::vector<double> grid;
  const int n = std::max(axis.points, 1);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0
                            : static_cast<double>(i) / (n - 1);
    if (axis.scale == "log") {
      grid.push_back(std::pow(10.0, std::log10(axis.from) +
                                        t * (std::log10(axis.to) -
                                             std::log10(axis.from))));
    } else {
      grid.push_back(axis.from + t * (axis.to - axis.from));
    }
  }
  return grid;
}

void apply_sweep_value(ScenarioConfig& c, const std::string& param, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  apply_override(c, param, buf);
}

// Sorted slot gains gamma_b_tilde = gamma_b_bar * ||h_b||^2 for the
// adaptive design experiments.
std::vector<double> draw_slot_gains(const ScenarioConfig& config) {
  Rng rng = Rng::stream(config.seed, 77);
  const auto& p = config.params;
  const double gb = p.gamma_b_bar();
  std::vector<double> gains(static_cast<std::size_t>(p.slots));
  for (auto& g : gains) {
    g = gb * sample_fading(p.fading_b, p.k, rng).squaredNorm();
  }
  std::sort(gains.begin(), gains.end());
  return gains;
}

ResultTable run_ail_sweep(const ScenarioConfig& config) {
  ResultTable table;
  const std::string axis_name = config.sweep ? config.sweep->param : "point";
  table.columns = {axis_name,      "ail_exact", "ail_saddle", "ail_closed",
                   "ail_mc",       "mc_stderr", "ail_highsnr"};
  std::vector<double> grid =
      config.sweep ? sweep_grid(*config.sweep) : std::vector<double>{0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ScenarioConfig local = config;
    if (config.sweep) apply_sweep_value(local, config.sweep->param, grid[i]);
    Rng rng = Rng::stream(config.seed, i);
    const EveSnrDistribution dist =
        build_eve_distribution(local.params, config.mc_samples, rng);
    const FblOperatingPoint point = fixed_operating_point(local);
    std::vector<std::optional<double>> row(table.columns.size());
    row[0] = config.sweep ? grid[i] : 0.0;
    if (dist.has_pdf()) {
      row[1] = ail_exact(point, dist).value;
    }
    row[2] = ail_saddlepoint(point, dist).value;
    row[3] = ail_closed_form(point, dist).value;
    const LeakageEstimate mc =
        ail_mc(point, [&dist](Rng& r) { return dist.sample(r); },
               config.mc_samples, rng);
    row[4] = mc.value;
    row[5] = mc.std_error;
    row[6] = ail_highsnr(point, dist).value;
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_validate_dist(const ScenarioConfig& config) {
  ResultTable table;
  table.columns = {"rho_db", "ks", "fit_shape", "fit_scale"};
  std::vector<double> rhos_db = {0.0, 10.0, 20.0};
  if (config.sweep) rhos_db = sweep_grid(*config.sweep);
  for (std::size_t i = 0; i < rhos_db.size(); ++i) {
    ScenarioConfig local = config;
    apply_sweep_value(local, "rho_db", rhos_db[i]);
    Rng rng = Rng::stream(config.seed, i);
    const EveSnrDistribution dist =
        build_eve_distribution(local.params, config.mc_samples, rng);
    std::vector<double> samples(static_cast<std::size_t>(config.mc_samples));
    for (auto& s : samples) s = dist.sample(rng);
    const double ks =
        ecdf_ks(std::move(samples), [&dist](double x) { return dist.cdf(x); });
    std::vector<std::optional<double>> row(4);
    row[0] = rhos_db[i];
    row[1] = ks;
    if (dist.branch() == EveSnrDistribution::Branch::RiceANGammaFit) {
      row[2] = dist.fit_shape();
      row[3] = dist.fit_scale();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_epsilon_sweep(const ScenarioConfig& config) {
  ResultTable table;
  table.columns = {"epsilon", "ail_exact", "ail_saddle", "ail_mc", "mc_stderr"};
  SweepAxis axis;
  axis.param = "epsilon";
  axis.from = 1e-5;
  axis.to = 0.4;
  axis.points = 25;
  axis.scale = "log";
  if (config.sweep) axis = *config.sweep;
  for (std::size_t i = 0; i < static_cast<std::size_t>(axis.points); ++i) {
    const double eps = sweep_grid(axis)[i];
    ScenarioConfig local = config;
    local.params.epsilon = eps;
    Rng rng = Rng::stream(config.seed, i);
    const EveSnrDistribution dist =
        build_eve_distribution(local.params, config.mc_samples, rng);
    const FblOperatingPoint point = fixed_operating_point(local);
    std::vector<std::optional<double>> row(5);
    row[0] = eps;
    if (dist.has_pdf()) row[1] = ail_exact(point, dist).value;
    row[2] = ail_saddlepoint(point, dist).value;
    const LeakageEstimate mc =
        ail_mc(point, [&dist](Rng& r) { return dist.sample(r); },
               config.mc_samples, rng);
    row[3] = mc.value;
    row[4] = mc.std_error;
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_adaptive(const ScenarioConfig& config) {
  ResultTable table;
  table.columns = {"slot",      "gamma_b_tilde", "n_opt",   "alpha_opt",
                   "ist",       "n_relaxed",     "alpha_relaxed", "ist_relaxed"};
  const std::vector<double> gains = draw_slot_gains(config);
  for (std::size_t i = 0; i < gains.size(); ++i) {
    const SlotSolution ex =
        solve_adaptive_slot(gains[i], config.params, config.design);
    const SlotSolution rel =
        solve_adaptive_relaxed(gains[i], config.params, config.design);
    std::vector<std::optional<double>> row(8);
    row[0] = static_cast<double>(i);
    row[1] = gains[i];
    if (ex.feasible) {
      row[2] = static_cast<double>(ex.n_opt);
      row[3] = ex.alpha_opt;
    }
    row[4] = ex.ist;
    if (rel.feasible) {
      row[5] = static_cast<double>(rel.n_opt);
      row[6] = rel.alpha_opt;
    }
    row[7] = rel.ist;
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_nonadaptive_surface(const ScenarioConfig& config) {
  ResultTable table;
  table.columns = {"n", "alpha", "ast"};
  for (double a = 0.05; a < 1.0 + 1e-12; a += 0.05) {
    for (int n = config.design.n_min; n <= config.design.n_max; n += 10) {
      std::vector<std::optional<double>> row(3);
      row[0] = static_cast<double>(n);
      row[1] = a;
      row[2] = ast_nonadaptive(n, a, config.params);
      table.rows.push_back(std::move(row));
    }
  }
  const DesignSolution best = solve_nonadaptive(config.params, config.design);
  table.provenance.emplace_back("n_opt", fmt(best.n_opt));
  table.provenance.emplace_back("alpha_opt", fmt(best.alpha_opt));
  table.provenance.emplace_back("ast_opt", fmt(best.ast));
  return table;
}

ResultTable run_bits_sweep(const ScenarioConfig& config) {
  ResultTable table;
  table.columns = {"m", "n_opt", "alpha_opt", "ast"};
  std::vector<double> bits = {50.0, 100.0, 150.0, 200.0};
  if (config.sweep) bits = sweep_grid(*config.sweep);
  for (double m : bits) {
    ScenarioConfig local = config;
    local.params.m = m;
    const DesignSolution best =
        solve_nonadaptive(local.params, local.design);
    std::vector<std::optional<double>> row(4);
    row[0] = m;
    row[1] = static_cast<double>(best.n_opt);
    row[2] = best.alpha_opt;
    row[3] = best.ast;
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

FblOperatingPoint fixed_operating_point(const ScenarioConfig& config) {
  FblOperatingPoint point;
  point.gamma_b = config.params.rho * config.main_gain;
  if (config.gamma_b_includes_alpha) point.gamma_b *= config.params.scheme.alpha;
  point.n = config.params.n;
  point.m = config.params.m;
  point.epsilon = config.params.epsilon;
  return point;
}

void stamp_provenance(const ScenarioConfig& c, ResultTable& table) {
  std::vector<std::pair<std::string, std::string>> head;
  head.emplace_back("version", kArtifactVersion);
  head.emplace_back("experiment", c.experiment);
  head.emplace_back("seed", std::to_string(c.seed));
  head.emplace_back("mc_samples", std::to_string(c.mc_samples));
  head.emplace_back("m", fmt(c.params.m));
  head.emplace_back("n", std::to_string(c.params.n));
  head.emplace_back("n_max", std::to_string(c.params.n_max));
  head.emplace_back("n_min", std::to_string(c.design.n_min));
  head.emplace_back("epsilon", fmt(c.params.epsilon));
  head.emplace_back("phi", fmt(c.params.phi));
  head.emplace_back("k", std::to_string(c.params.k));
  head.emplace_back("K_b", fmt(c.params.fading_b.k_factor));
  head.emplace_back("K_e", fmt(c.params.fading_e.k_factor));
  head.emplace_back("rho", fmt(c.params.rho));
  head.emplace_back("alpha", fmt(c.params.scheme.alpha));
  head.emplace_back("beta_b", fmt(c.params.geometry_b.beta0));
  head.emplace_back("beta_e", fmt(c.params.geometry_e.beta0));
  head.emplace_back("d_b", fmt(c.params.geometry_b.distance));
  head.emplace_back("d_e", fmt(c.params.geometry_e.distance));
  head.emplace_back("eta", fmt(c.params.geometry_b.eta));
  head.emplace_back("slots", std::to_string(c.params.slots));
  head.emplace_back("main_gain", fmt(c.main_gain));
  head.emplace_back("gamma_b_includes_alpha",
                    c.gamma_b_includes_alpha ? "true" : "false");
  if (c.sweep) {
    head.emplace_back("sweep_param", c.sweep->param);
    head.emplace_back("sweep_from", fmt(c.sweep->from));
    head.emplace_back("sweep_to", fmt(c.sweep->to));
    head.emplace_back("sweep_points", std::to_string(c.sweep->points));
    head.emplace_back("sweep_scale", c.sweep->scale);
  }
  table.provenance.insert(table.provenance.begin(), head.begin(), head.end());
}

ResultTable run_scenario(const ScenarioConfig& config) {
  if (config.mc_samples < 1000) {
    throw std::runtime_error(
        "run_scenario: mc_samples must be at least 1e3 for validation "
        "experiments");
  }
  ResultTable table;
  if (config.experiment == "custom" || config.experiment == "ail") {
    table = run_ail_sweep(config);
  } else if (config.experiment == "fig2" ||
             config.experiment == "validate-dist") {
    table = run_validate_dist(config);
  } else if (config.experiment == "fig3") {
    ScenarioConfig local = config;
    local.params.fading_b.k_factor = 0.0;
    local.params.fading_e.k_factor = 0.0;
    table = run_epsilon_sweep(local);
  } else if (config.experiment == "fig4") {
    ScenarioConfig local = config;
    if (local.params.fading_e.k_factor == 0.0) {
      local.params.fading_b.k_factor = 5.0;
      local.params.fading_e.k_factor = 5.0;
    }
    table = run_epsilon_sweep(local);
  } else if (config.experiment == "fig5") {
    table = run_adaptive(config);
  } else if (config.experiment == "fig6") {
    table = run_nonadaptive_surface(config);
  } else if (config.experiment == "fig7") {
    table = run_bits_sweep(config);
  } else {
    throw std::runtime_error("run_scenario: unknown experiment '" +
                             config.experiment + "'");
  }
  stamp_provenance(config, table);
  return table;
}

std::vector<std::string> emit(const ResultTable& table,
                              const ScenarioConfig& config) {
  namespace fs = std::filesystem;
  const fs::path dir(config.out_dir);
  if (!fs::exists(dir)) {
    throw std::runtime_error("emit: output directory does not exist: " +
                             dir.string());
  }
  std::vector<std::string> written;
  const fs::path csv = dir / (config.experiment + ".csv");
  {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot write " + csv.string());
    write_csv(table, out);
  }
  written.push_back(csv.string());
  if (config.format == "plot") {
    const fs::path svg = dir / (config.experiment + ".svg");
    write_svg_plot(table, svg.string());
    written.push_back(svg.string());
  }
  return written;
}

}  // namespace leakscope::harness
