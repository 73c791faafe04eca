#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "leakscope/channel.hpp"
#include "leakscope/leakage.hpp"

namespace leakscope {

struct DesignConfig {
  int n_max = 1000;
  double phi = 1e-4;
  double alpha_resolution = 1e-3;  // refinement step for alpha
  int slots = 1000;
  std::uint64_t seed = 1;
  // Guard against blocklengths where the normal approximation is dubious;
  // set to 1 for the fully paper-faithful search domain.
  int n_min = 50;
};

struct SlotSolution {
  double gamma_b_tilde = 0.0;
  int n_opt = 0;
  double alpha_opt = 0.0;
  double ist = 0.0;  // bpcu
  bool feasible = false;
};

struct DesignSolution {
  int n_opt = 0;
  double alpha_opt = 0.0;
  double ast = 0.0;  // bpcu
};

// Eq.-(54)-style throughput: (1-eps) m / n gated by ail <= phi (inclusive).
double ist(int n, double m, double epsilon, double ail_value, double phi);

// AIL of the analytic branch at Bob SNR alpha * gamma_b_tilde, blocklength
// n (real-valued allowed). Used throughout the design searches.
double design_ail(double n, double alpha, double gamma_b_tilde,
                  const SystemParams& params);

// Smallest real blocklength with AIL equal to phi, by bisection over
// [1, n_max]. Throws std::runtime_error when even n_max is infeasible.
double ail_inverse_blocklength(double phi, double alpha, double gamma_b_tilde,
                               const SystemParams& params);

// Exhaustive per-slot solve: smallest feasible integer N with a 1D search
// over alpha. Infeasible slots come back with ist = 0.
SlotSolution solve_adaptive_slot(double gamma_b_tilde,
                                 const SystemParams& params,
                                 const DesignConfig& config);

// Relaxed per-slot solve: stationary point of the real-valued blocklength
// map over alpha, then a ceiling back to integers.
SlotSolution solve_adaptive_relaxed(double gamma_b_tilde,
                                    const SystemParams& params,
                                    const DesignConfig& config);

double ast_adaptive_empirical(std::span<const double> slot_gains,
                              const SystemParams& params,
                              const DesignConfig& config);

// Large-L limit of the adaptive AST: integral of the per-slot throughput
// against the gamma_b_tilde density above the transmission threshold.
double ast_adaptive_integral(const SystemParams& params,
                             const DesignConfig& config);

// On-off threshold gamma_1 of the non-adaptive lower-bound objective.
double gamma1_threshold(double n, double alpha, const SystemParams& params,
                        const EveSnrDistribution& dist);

// Non-adaptive AST lower bound m(1-eps)/N * P{gamma_b_tilde >= gamma_1}.
double ast_nonadaptive(double n, double alpha, const SystemParams& params);

// Coarse grid plus local refinement over integer N and the alpha grid.
DesignSolution solve_nonadaptive(const SystemParams& params,
                                 const DesignConfig& config);

}  // namespace leakscope
