#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "leakscope/channel.hpp"
#include "leakscope/design.hpp"
#include "leakscope/leakage.hpp"

namespace leakscope::harness {

inline constexpr const char* kArtifactVersion = "leakscope 0.1.0";

struct SweepAxis {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int points = 1;
  std::string scale = "linear";  // linear | dB | log
};

struct ScenarioConfig {
  std::string experiment = "custom";  // fig2..fig7 | custom | validate-dist
  SystemParams params;
  DesignConfig design;
  std::optional<SweepAxis> sweep;
  std::int64_t mc_samples = 100000;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string format = "csv";  // csv | plot
  // Fixed-realization main-channel power beta_b * ||h_b||^2 used by the
  // AIL experiments; Bob's received SNR there is rho * main_gain.
  double main_gain = 3.0;
  // When set, the fixed-realization Bob SNR additionally carries the
  // power-split factor alpha (the physically literal Eq.-(18) reading).
  bool gamma_b_includes_alpha = false;
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
  // Resolved config, seed and version; sufficient to re-run bit-identically.
  std::vector<std::pair<std::string, std::string>> provenance;
};

// Parse a flat key = value config file. Unknown keys are hard errors.
ScenarioConfig load_config(const std::string& path);

// Apply one `key=value` override; same key set as the config file.
void apply_override(ScenarioConfig& config, const std::string& key,
                    const std::string& value);

// Record the fully resolved configuration into table provenance.
void stamp_provenance(const ScenarioConfig& config, ResultTable& table);

ResultTable run_scenario(const ScenarioConfig& config);

// Sup-norm distance between the sample ECDF and an analytical CDF.
double ecdf_ks(std::vector<double> samples,
               const std::function<double(double)>& cdf);

// RFC-4180 CSV with a '#'-prefixed provenance header block.
void write_csv(const ResultTable& table, std::ostream& out);
ResultTable read_csv(std::istream& in);

// Standalone SVG line plot of the table (first column as x axis).
void write_svg_plot(const ResultTable& table, const std::string& path);

// CSV (and optionally SVG plot) emission into config.out_dir. Returns the
// paths written.
std::vector<std::string> emit(const ResultTable& table,
                              const ScenarioConfig& config);

// Bob's fixed-realization operating point for the AIL experiments.
FblOperatingPoint fixed_operating_point(const ScenarioConfig& config);

// Default seed from LEAKSCOPE_SEED when the environment variable is set.
std::uint64_t default_seed();

}  // namespace leakscope::harness
