#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "leakscope/harness.hpp"
#include "leakscope/specfun.hpp"

namespace {

using namespace leakscope;
using harness::ScenarioConfig;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  std::uint64_t seed = harness::default_seed();
  std::int64_t samples = 100000;
  std::vector<std::string> sets;
  bool seed_given = false;
  bool samples_given = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Scenario config file");
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--format", opts.format, "Output format: csv|plot")
      ->check(CLI::IsMember({"csv", "plot"}));
  cmd->add_option("--seed", opts.seed, "RNG seed")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
  cmd->add_option("--samples", opts.samples, "Monte-Carlo sample count")
      ->each([&opts](const std::string&) { opts.samples_given = true; });
  cmd->add_option("--set", opts.sets, "Parameter override key=value")
      ->take_all();
}

ScenarioConfig resolve(const CommonOpts& opts, const std::string& experiment) {
  ScenarioConfig config;
  if (!opts.config_path.empty()) {
    config = harness::load_config(opts.config_path);
  } else {
    config.seed = harness::default_seed();
    config.design.seed = config.seed;
  }
  config.experiment = experiment;
  config.out_dir = opts.out_dir;
  config.format = opts.format;
  if (opts.seed_given) {
    config.seed = opts.seed;
    config.design.seed = opts.seed;
  }
  if (opts.samples_given) config.mc_samples = opts.samples;
  for (const std::string& kv : opts.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--set expects key=value, got '" + kv + "'");
    }
    harness::apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return config;
}

int run_and_emit(const ScenarioConfig& config) {
  const harness::ResultTable table = harness::run_scenario(config);
  for (const std::string& path : harness::emit(table, config)) {
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

// Quick identity and oracle sweep over randomized parameters; exits
// nonzero on the first violation.
int run_selfcheck(std::uint64_t seed) {
  Rng rng(seed);
  int failures = 0;
  const auto check = [&failures](const char* name, bool ok) {
    std::printf("%-44s %s\n", name, ok ? "pass" : "FAIL");
    if (!ok) ++failures;
  };

  double worst_identity = 0.0, worst_cor1 = 0.0, worst_laplace = 0.0;
  for (int i = 0; i < 200; ++i) {
    SystemParams p;
    p.k = 2 + static_cast<int>(rng.uniform() * 6);
    p.rho = std::pow(10.0, -1.0 + 3.0 * rng.uniform());
    p.m = 50.0 + 150.0 * rng.uniform();
    p.n = 100 + static_cast<int>(rng.uniform() * 900);
    p.epsilon = std::pow(10.0, -4.0 + 3.0 * rng.uniform());
    const double alpha = 0.1 + 0.8 * rng.uniform();
    const bool rician = rng.uniform() < 0.5;
    const bool mrt = rng.uniform() < 0.5;
    p.scheme.alpha = mrt ? 1.0 : alpha;
    if (rician) {
      p.fading_b.k_factor = 5.0;
      p.fading_e.k_factor = 5.0;
      if (!mrt) continue;  // Rician AN needs an MC fit; skip in selfcheck
    }
    const EveSnrDistribution dist = build_eve_distribution(p, 10000, rng);
    FblOperatingPoint point;
    point.gamma_b = p.rho * 3.0;
    point.n = p.n;
    point.m = p.m;
    point.epsilon = p.epsilon;
    worst_identity = std::max(
        worst_identity, std::abs(ail_closed_form(point, dist).value -
                                 ail_saddlepoint(point, dist).value));
    const double re = std::log2(1.0 + point.gamma_b) -
                      std::sqrt(dispersion(point.gamma_b) / point.n) *
                          specfun::gaussian_q_inv(point.epsilon) -
                      point.m / point.n;
    worst_cor1 = std::max(worst_cor1, std::abs(sop(re, dist) -
                                               ail_saddlepoint(point, dist).value));
    if (x0(point) > 0.0) {
      const LaplaceDiagnostics diag = laplace_internals_check(point, dist);
      worst_laplace =
          std::max(worst_laplace, std::abs(diag.laplace_value - diag.survival));
    }
  }
  check("closed form == saddle point (1e-12)", worst_identity <= 1e-12);
  check("SOP at R_e* == saddle point (1e-14)", worst_cor1 <= 1e-14);
  check("Laplace product == 1 - F(x0) (1e-10)", worst_laplace <= 1e-10);

  // gaussian_q / inverse round trip. For x below ~-5.7, Q(x) sits within
  // an ulp of 1, so the preimage is quantized at ulp(p)/(2*phi(x)); allow
  // that representation floor on top of the 1e-9 target.
  double worst_q = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.25) {
    const double p = specfun::gaussian_q(x);
    const double phi =
        std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.141592653589793);
    const double floor_x = 0.5 * (std::nextafter(p, 2.0) - p) / phi;
    const double err =
        std::abs(specfun::gaussian_q_inv(p) - x) - std::max(floor_x, 0.0);
    worst_q = std::max(worst_q, err);
  }
  check("Qinv(Q(x)) == x on [-6, 6] (1e-9 + rep floor)", worst_q <= 1e-9);

  double worst_m = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double nu = 0.5 + 4.0 * rng.uniform();
    const double a = 3.0 * rng.uniform();
    const double b = 3.0 * rng.uniform();
    worst_m = std::max(worst_m,
                       std::abs(specfun::marcum_q(nu, a, b) +
                                specfun::ncx2_cdf(2.0 * nu, a * a, b * b) - 1.0));
  }
  check("Marcum Q + nc-chi2 CDF == 1 (1e-10)", worst_m <= 1e-10);

  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"leakscope: finite-blocklength wiretap leakage analysis"};
  app.require_subcommand(1);

  CommonOpts ail_opts, dist_opts, adapt_opts, nonadapt_opts, fig_opts;
  int fig_number = 0;
  std::uint64_t selfcheck_seed = harness::default_seed();

  CLI::App* ail = app.add_subcommand("ail", "AIL at a point or over a sweep");
  add_common(ail, ail_opts);
  CLI::App* vdist =
      app.add_subcommand("validate-dist", "KS validation of Eve's SNR model");
  add_common(vdist, dist_opts);
  CLI::App* dadapt =
      app.add_subcommand("design-adaptive", "Per-slot (N, alpha) optimization");
  add_common(dadapt, adapt_opts);
  CLI::App* dnon = app.add_subcommand("design-nonadaptive",
                                      "Global (N, alpha) optimization");
  add_common(dnon, nonadapt_opts);
  CLI::App* fig = app.add_subcommand("fig", "Reproduce a figure experiment");
  fig->add_option("number", fig_number, "Figure number (2..7)")
      ->required()
      ->check(CLI::Range(2, 7));
  add_common(fig, fig_opts);
  CLI::App* selfcheck =
      app.add_subcommand("selfcheck", "Run the identity/oracle suites");
  selfcheck->add_option("--seed", selfcheck_seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ail->parsed()) return run_and_emit(resolve(ail_opts, "ail"));
    if (vdist->parsed())
      return run_and_emit(resolve(dist_opts, "validate-dist"));
    if (dadapt->parsed()) return run_and_emit(resolve(adapt_opts, "fig5"));
    if (dnon->parsed()) return run_and_emit(resolve(nonadapt_opts, "fig6"));
    if (fig->parsed()) {
      return run_and_emit(
          resolve(fig_opts, "fig" + std::to_string(fig_number)));
    }
    if (selfcheck->parsed()) return run_selfcheck(selfcheck_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
