#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "leakscope/design.hpp"
#include "oracles.hpp"

using namespace leakscope;

namespace {

// Section-default Rayleigh-AN scenario: mean main-channel power 3 rho.
SystemParams defaults_rayleigh() {
  SystemParams p;
  p.k = 4;
  p.rho = 1.0;
  p.geometry_b.beta0 = 3.0;
  p.geometry_e.beta0 = 1.0;
  p.scheme.alpha = 0.7;
  p.m = 100.0;
  p.n = 400;
  p.epsilon = 1e-3;
  p.phi = 1e-4;
  return p;
}

DesignConfig default_config() {
  DesignConfig c;
  c.n_max = 1000;
  c.phi = 1e-4;
  c.slots = 1000;
  c.seed = 9;
  return c;
}

}  // namespace

TEST_CASE("ist") {
  CHECK(ist(400, 100.0, 1e-3, 1e-4, 1e-4) ==
        doctest::Approx(0.24975).epsilon(1e-12));  // inclusive at ail == phi
  CHECK(ist(400, 100.0, 1e-3, 2e-4, 1e-4) == 0.0);
  CHECK(ist(200, 100.0, 1e-3, 0.0, 1e-4) ==
        doctest::Approx(0.999 * 0.5).epsilon(1e-12));
}

TEST_CASE("design_ail matches the closed form") {
  SystemParams p = defaults_rayleigh();
  const double gbt = 3.0;
  const EveSnrDistribution d =
      EveSnrDistribution::rayleigh_an(p.gamma_e_bar(), 0.7, p.k);
  FblOperatingPoint point;
  point.gamma_b = 0.7 * gbt;
  point.n = 400.0;
  point.m = p.m;
  point.epsilon = p.epsilon;
  CHECK(design_ail(400.0, 0.7, gbt, p) ==
        doctest::Approx(ail_closed_form(point, d).value).epsilon(1e-12));

  SystemParams rician_an = p;
  rician_an.fading_b.k_factor = 5.0;
  rician_an.fading_e.k_factor = 5.0;
  CHECK_THROWS_AS(design_ail(400.0, 0.7, gbt, rician_an), std::logic_error);
}

TEST_CASE("ail_inverse_blocklength") {
  SystemParams p = defaults_rayleigh();
  const double gbt = 3.0;
  // inverse of the forward map
  const double forward = design_ail(500.0, 0.6, gbt, p);
  const double back = ail_inverse_blocklength(forward, 0.6, gbt, p);
  CHECK(back == doctest::Approx(500.0).epsilon(1e-5));
  // a nearly vacuous threshold: the returned blocklength is where the
  // AIL first dips below phi (tiny N has AIL = 1 under the x0 < 0
  // convention, so "always feasible at N = 1" does not apply here)
  const double loose = ail_inverse_blocklength(0.999999, 0.6, gbt, p);
  CHECK(design_ail(loose + 1e-3, 0.6, gbt, p) <= 0.999999);
  CHECK(loose <= 100.0);
  // infeasible slot
  CHECK_THROWS_AS(ail_inverse_blocklength(1e-300, 0.6, 1e-9, p),
                  std::runtime_error);
  // consistency with the on-off threshold at the reported optimum: a slot
  // sitting exactly at gamma_1(233, 0.43) needs a blocklength near 233
  const EveSnrDistribution d =
      EveSnrDistribution::rayleigh_an(p.gamma_e_bar(), 0.43, p.k);
  const double g1 = gamma1_threshold(233.0, 0.43, p, d);
  const double n_star = ail_inverse_blocklength(p.phi, 0.43, g1, p);
  CHECK(n_star == doctest::Approx(233.0).epsilon(0.15));
}

TEST_CASE("solve_adaptive_slot") {
  SystemParams p = defaults_rayleigh();
  DesignConfig c = default_config();
  c.n_min = 1;

  // N = 1 carries all m bits in one use, so it needs gamma ~ 2^m
  const SlotSolution rich = solve_adaptive_slot(1e40, p, c);
  CHECK(rich.feasible);
  CHECK(rich.n_opt == 1);

  const SlotSolution dead = solve_adaptive_slot(0.0, p, c);
  CHECK(!dead.feasible);
  CHECK(dead.ist == 0.0);

  // smallest-N optimality: N - 1 is infeasible for every alpha probe
  const SlotSolution mid = solve_adaptive_slot(12.0, p, c);
  CHECK(mid.feasible);
  CHECK(design_ail(mid.n_opt, mid.alpha_opt, 12.0, p) <= c.phi + 1e-15);
  if (mid.n_opt > 1) {
    double best_prev = 1.0;
    for (double a = 0.005; a <= 1.0; a += 0.005) {
      best_prev = std::min(best_prev, design_ail(mid.n_opt - 1, a, 12.0, p));
    }
    CHECK(best_prev > c.phi);
  }

  // sorted slots: optimal N nonincreasing in the slot gain
  int prev_n = c.n_max + 1;
  for (double g : {8.0, 10.0, 14.0, 20.0, 30.0, 50.0}) {
    const SlotSolution s = solve_adaptive_slot(g, p, c);
    if (!s.feasible) continue;
    CHECK(s.n_opt <= prev_n);
    prev_n = s.n_opt;
  }
}

TEST_CASE("solve_adaptive_relaxed agrees with the exhaustive solver") {
  SystemParams p = defaults_rayleigh();
  DesignConfig c = default_config();
  c.n_min = 1;
  Rng rng(113);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    const double g = 8.0 + 40.0 * rng.uniform();
    const SlotSolution ex = solve_adaptive_slot(g, p, c);
    const SlotSolution rel = solve_adaptive_relaxed(g, p, c);
    if (!ex.feasible) continue;
    CHECK(rel.feasible);
    CHECK(std::abs(rel.n_opt - ex.n_opt) <= 1);
    ++checked;
  }
  CHECK(checked >= 40);

  // MRT-only scenario: relaxed solve reduces to the blocklength inverse
  SystemParams mrt = p;
  mrt.scheme.alpha = 1.0;
  const SlotSolution s = solve_adaptive_relaxed(40.0, mrt, c);
  if (s.feasible) {
    CHECK(s.alpha_opt == 1.0);
    CHECK(s.n_opt ==
          static_cast<int>(
              std::ceil(ail_inverse_blocklength(c.phi, 1.0, 40.0, mrt))));
  }
}

TEST_CASE("ast_adaptive_empirical") {
  SystemParams p = defaults_rayleigh();
  DesignConfig c = default_config();

  const std::vector<double> dead_slots{1e-9, 1e-9, 1e-9};
  CHECK(ast_adaptive_empirical(dead_slots, p, c) == 0.0);

  const std::vector<double> one{6.0};
  const SlotSolution s = solve_adaptive_slot(6.0, p, c);
  CHECK(ast_adaptive_empirical(one, p, c) ==
        doctest::Approx(s.ist).epsilon(1e-12));
}

TEST_CASE("ast_adaptive_integral vs empirical") {
  SystemParams p = defaults_rayleigh();
  DesignConfig c = default_config();
  const double integral = ast_adaptive_integral(p, c);
  CHECK(integral > 0.0);
  // AST ceiling: always below m (1 - eps) / n_min
  CHECK(integral <= p.m * (1.0 - p.epsilon) / c.n_min);

  Rng rng(127);
  std::vector<double> gains;
  for (int i = 0; i < 4000; ++i) {
    gains.push_back(rng.gamma_int(p.k, p.gamma_b_bar()));
  }
  const double empirical = ast_adaptive_empirical(gains, p, c);
  CHECK(std::abs(integral - empirical) / empirical <= 0.05);
}

TEST_CASE("gamma1_threshold") {
  SystemParams p = defaults_rayleigh();
  const EveSnrDistribution mrt = EveSnrDistribution::rayleigh_mrt(1.0);

  // phi -> 1: quantile at 0+ vanishes
  SystemParams loose = p;
  loose.phi = 1.0 - 1e-12;
  loose.scheme.alpha = 1.0;
  const double r0i = r0_highsnr(400.0, p.m, p.epsilon);
  CHECK(gamma1_threshold(400.0, 1.0, loose, mrt) ==
        doctest::Approx(std::exp2(r0i) - 1.0).epsilon(1e-5));

  // phi = 1/2 under the exponential model: quantile is the median
  SystemParams half = p;
  half.phi = 0.5;
  half.scheme.alpha = 1.0;
  const double expected =
      (std::exp2(r0i) * (1.0 + std::log(2.0)) - 1.0) / 1.0;
  CHECK(gamma1_threshold(400.0, 1.0, half, mrt) ==
        doctest::Approx(expected).epsilon(1e-10));

  // defaults near the reported optimum: finite positive threshold
  const EveSnrDistribution an =
      EveSnrDistribution::rayleigh_an(p.gamma_e_bar(), 0.43, p.k);
  const double g1 = gamma1_threshold(233.0, 0.43, p, an);
  CHECK(g1 > 0.0);
  CHECK(g1 == doctest::Approx((std::exp2(r0_highsnr(233.0, p.m, p.epsilon)) *
                               (1.0 + an.quantile(1.0 - p.phi)) -
                               1.0) /
                              0.43)
                  .epsilon(1e-10));
}

TEST_CASE("ast_nonadaptive") {
  SystemParams p = defaults_rayleigh();
  // feasibility probability shrinks to zero as alpha starves the signal
  CHECK(ast_nonadaptive(400.0, 1e-6, p) <= 1e-12);
  // Rician with K_b = 0 equals the Rayleigh branch
  SystemParams r0b = p;
  r0b.fading_b.k_factor = 0.0;
  CHECK(ast_nonadaptive(400.0, 0.5, r0b) ==
        doctest::Approx(ast_nonadaptive(400.0, 0.5, p)).epsilon(1e-10));
  // never exceeds the all-feasible ceiling
  for (double a : {0.2, 0.5, 0.9}) {
    for (double n : {100.0, 300.0, 700.0}) {
      const double v = ast_nonadaptive(n, a, p);
      CHECK(v >= 0.0);
      CHECK(v <= p.m * (1.0 - p.epsilon) / n + 1e-12);
    }
  }
}

TEST_CASE("P4 factor trade-off") {
  SystemParams p = defaults_rayleigh();
  const double alpha = 0.43;
  double prev_first = 1e300, prev_second = -1.0;
  for (double n : {100.0, 200.0, 400.0, 700.0, 1000.0}) {
    const double first = p.m * (1.0 - p.epsilon) / n;
    const EveSnrDistribution d =
        EveSnrDistribution::rayleigh_an(p.gamma_e_bar(), alpha, p.k);
    const double g1 = gamma1_threshold(n, alpha, p, d);
    const double second =
        1.0 - gamma_b_tilde_cdf(p.fading_b, p.gamma_b_bar(), p.k, g1);
    CHECK(first <= prev_first);
    CHECK(second >= prev_second);
    prev_first = first;
    prev_second = second;
  }
}

TEST_CASE("solve_nonadaptive optimizer contract") {
  SystemParams p = defaults_rayleigh();
  DesignConfig c = default_config();
  const DesignSolution sol = solve_nonadaptive(p, c);
  CHECK(sol.n_opt >= c.n_min);
  CHECK(sol.n_opt <= c.n_max);
  CHECK(sol.alpha_opt > 0.0);
  CHECK(sol.alpha_opt <= 1.0);
  CHECK(sol.ast ==
        doctest::Approx(ast_nonadaptive(sol.n_opt, sol.alpha_opt, p))
            .epsilon(1e-12));
  // objective at the returned point dominates a coarse probe grid
  for (int n = c.n_min; n <= c.n_max; n += 50) {
    for (double a = 0.05; a <= 1.0; a += 0.05) {
      CHECK(sol.ast >= ast_nonadaptive(n, a, p) - 1e-12);
    }
  }
  // determinism
  const DesignSolution again = solve_nonadaptive(p, c);
  CHECK(again.n_opt == sol.n_opt);
  CHECK(again.alpha_opt == sol.alpha_opt);
  CHECK(again.ast == sol.ast);
}
