#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "leakscope/harness.hpp"

using namespace leakscope;
using harness::ResultTable;
using harness::ScenarioConfig;

TEST_CASE("config parsing and overrides") {
  ScenarioConfig c;
  harness::apply_override(c, "rho_db", "10");
  CHECK(c.params.rho == doctest::Approx(10.0).epsilon(1e-12));
  harness::apply_override(c, "alpha", "0.43");
  CHECK(c.params.scheme.alpha == 0.43);
  harness::apply_override(c, "K", "5");
  CHECK(c.params.fading_b.k_factor == 5.0);
  CHECK(c.params.fading_e.k_factor == 5.0);
  harness::apply_override(c, "scheme", "mrt");
  CHECK(c.params.scheme.alpha == 1.0);
  harness::apply_override(c, "phi", "1e-5");
  CHECK(c.design.phi == 1e-5);

  CHECK_THROWS_WITH_AS(harness::apply_override(c, "bogus_key", "1"),
                       doctest::Contains("unknown key"), std::runtime_error);
  CHECK_THROWS_AS(harness::apply_override(c, "m", "abc"), std::runtime_error);

  const std::string path = "/tmp/leakscope_test_config.txt";
  {
    std::ofstream f(path);
    f << "# comment line\n";
    f << "experiment = fig3\n";
    f << "rho_db = 0\n";
    f << "k = 4\n";
    f << "sweep_param = epsilon\n";
    f << "sweep_from = 1e-5\n";
    f << "sweep_to = 0.4\n";
    f << "sweep_points = 7\n";
    f << "sweep_scale = log\n";
  }
  const ScenarioConfig loaded = harness::load_config(path);
  CHECK(loaded.experiment == "fig3");
  CHECK(loaded.sweep.has_value());
  CHECK(loaded.sweep->points == 7);
  CHECK(loaded.sweep->scale == "log");
  CHECK_THROWS(harness::load_config("/nonexistent/nope.cfg"));
}

TEST_CASE("ecdf_ks") {
  // DKW: samples from their own cdf land within 0.01 at 1e5 draws
  Rng rng(211);
  std::vector<double> xs;
  for (int i = 0; i < 100000; ++i) xs.push_back(rng.exponential(2.0));
  CHECK(harness::ecdf_ks(xs, [](double t) {
          return t <= 0.0 ? 0.0 : 1.0 - std::exp(-t / 2.0);
        }) <= 0.01);

  // constant sample vs a continuous cdf
  std::vector<double> c(200, 1.5);
  const auto cdf = [](double t) { return t <= 0.0 ? 0.0 : 1.0 - std::exp(-t); };
  const double expected = std::max(cdf(1.5), 1.0 - cdf(1.5));
  CHECK(harness::ecdf_ks(c, cdf) == doctest::Approx(expected).epsilon(1e-9));

  // disjoint supports
  std::vector<double> lo(200);
  for (int i = 0; i < 200; ++i) lo[i] = 0.001 * (i + 1);
  CHECK(harness::ecdf_ks(lo, [](double t) {
          return t < 100.0 ? 0.0 : 1.0;
        }) == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS(harness::ecdf_ks(std::vector<double>(10, 1.0),
                                [](double) { return 0.5; }));
}

TEST_CASE("csv round trip") {
  ResultTable t;
  t.columns = {"x", "y", "z"};
  t.rows = {{1.0, 0.12345678901234567, std::nullopt},
            {2.5, 1e-300, 3.0}};
  t.provenance = {{"version", harness::kArtifactVersion}, {"seed", "42"}};
  std::stringstream ss;
  harness::write_csv(t, ss);
  // RFC 4180 line endings
  CHECK(ss.str().find("\r\n") != std::string::npos);
  const ResultTable back = harness::read_csv(ss);
  REQUIRE(back.columns == t.columns);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      REQUIRE(back.rows[r][c].has_value() == t.rows[r][c].has_value());
      if (t.rows[r][c]) CHECK(*back.rows[r][c] == *t.rows[r][c]);
    }
  }
  CHECK(back.provenance == t.provenance);
}

TEST_CASE("fig3 column schema") {
  ScenarioConfig c;
  c.experiment = "fig3";
  c.mc_samples = 2000;
  c.seed = 3;
  c.design.seed = 3;
  harness::apply_override(c, "sweep_param", "epsilon");
  harness::apply_override(c, "sweep_from", "1e-4");
  harness::apply_override(c, "sweep_to", "1e-2");
  harness::apply_override(c, "sweep_points", "3");
  harness::apply_override(c, "sweep_scale", "log");
  const ResultTable t = harness::run_scenario(c);
  REQUIRE(t.columns.size() == 5);
  CHECK(t.columns[0] == "epsilon");
  CHECK(t.columns[1] == "ail_exact");
  CHECK(t.columns[2] == "ail_saddle");
  CHECK(t.columns[3] == "ail_mc");
  CHECK(t.columns[4] == "mc_stderr");
  CHECK(t.rows.size() == 3);
  bool has_version = false;
  for (const auto& [k, v] : t.provenance) {
    if (k == "version") has_version = v == harness::kArtifactVersion;
  }
  CHECK(has_version);
}

TEST_CASE("empty sweep gives a single-row table") {
  ScenarioConfig c;
  c.experiment = "ail";
  c.mc_samples = 2000;
  const ResultTable t = harness::run_scenario(c);
  CHECK(t.rows.size() == 1);
}

TEST_CASE("scenario determinism (byte-identical csv)") {
  ScenarioConfig c;
  c.experiment = "ail";
  c.mc_samples = 5000;
  c.seed = 77;
  std::stringstream a, b;
  harness::write_csv(harness::run_scenario(c), a);
  harness::write_csv(harness::run_scenario(c), b);
  CHECK(a.str() == b.str());
  // a different seed changes the Monte-Carlo column
  c.seed = 78;
  std::stringstream d;
  harness::write_csv(harness::run_scenario(c), d);
  CHECK(a.str() != d.str());
}

TEST_CASE("emit paths and errors") {
  ScenarioConfig c;
  c.experiment = "ail";
  c.mc_samples = 2000;
  c.out_dir = "/tmp/leakscope_missing_dir_xyz";
  std::filesystem::remove_all(c.out_dir);
  const ResultTable t = harness::run_scenario(c);
  CHECK_THROWS_WITH_AS(harness::emit(t, c),
                       doctest::Contains("leakscope_missing_dir_xyz"),
                       std::runtime_error);
  std::filesystem::create_directories(c.out_dir);
  const auto paths = harness::emit(t, c);
  REQUIRE(paths.size() == 1);
  CHECK(std::filesystem::exists(paths[0]));
  c.format = "plot";
  const auto paths2 = harness::emit(t, c);
  CHECK(paths2.size() == 2);
  CHECK(std::filesystem::exists(paths2[1]));
  std::filesystem::remove_all(c.out_dir);
}

TEST_CASE("fixed operating point") {
  ScenarioConfig c;
  c.params.rho = 10.0;
  c.params.scheme.alpha = 0.5;
  const FblOperatingPoint p = harness::fixed_operating_point(c);
  CHECK(p.gamma_b == doctest::Approx(30.0).epsilon(1e-12));
  c.gamma_b_includes_alpha = true;
  const FblOperatingPoint q = harness::fixed_operating_point(c);
  CHECK(q.gamma_b == doctest::Approx(15.0).epsilon(1e-12));
}

TEST_CASE("default seed env override") {
  unsetenv("LEAKSCOPE_SEED");
  CHECK(harness::default_seed() == 1);
  setenv("LEAKSCOPE_SEED", "987", 1);
  CHECK(harness::default_seed() == 987);
  unsetenv("LEAKSCOPE_SEED");
}
