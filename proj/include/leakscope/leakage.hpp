#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "leakscope/channel.hpp"
#include "leakscope/rng.hpp"

namespace leakscope {

struct FblOperatingPoint {
  double gamma_b = 0.0;  // Bob's received SNR, linear
  double n = 400.0;      // blocklength (real-valued for relaxed solves)
  double m = 100.0;      // information bits
  double epsilon = 1e-3;
};

enum class LeakageMethod {
  ExactQuadrature,
  SaddlePoint,
  ClosedForm,
  MonteCarlo,
  HighSnr,
};

struct LeakageEstimate {
  double value = 0.0;
  LeakageMethod method = LeakageMethod::SaddlePoint;
  std::optional<double> std_error;   // MonteCarlo only
  std::optional<double> quad_error;  // ExactQuadrature only
};

// Channel dispersion V(gamma) = log2^2(e) * gamma(gamma+2)/(gamma+1)^2.
double dispersion(double gamma);

// Normal-approximation FBL secrecy rate in bpcu (clamped at zero).
double fbl_secrecy_rate(double gamma_b, double gamma_e, double n,
                        double epsilon, double delta);

// R0 = sqrt(V_b/N) Qinv(eps) + m/N.
double r0(const FblOperatingPoint& point);

// Instantaneous leakage delta for a given Eve SNR realization.
double instant_leakage(const FblOperatingPoint& point, double gamma_e);

// Saddle point x0 = (1+gamma_b)/2^R0 - 1 (may be negative).
double x0(const FblOperatingPoint& point);

// AIL by adaptive quadrature of the defining integral. Requires a branch
// with a density; throws std::logic_error for the Rician MRT bound.
LeakageEstimate ail_exact(const FblOperatingPoint& point,
                          const EveSnrDistribution& dist);

// Monte-Carlo AIL over an arbitrary gamma_e sampler.
LeakageEstimate ail_mc(const FblOperatingPoint& point,
                       const std::function<double(Rng&)>& sampler,
                       std::int64_t n_samples, Rng& rng);

// Laplace approximation: 1 - F(x0), with x0 < 0 mapped to AIL = 1.
LeakageEstimate ail_saddlepoint(const FblOperatingPoint& point,
                                const EveSnrDistribution& dist);

// The per-branch printed closed forms, evaluated directly from the branch
// parameters. Algebraically identical to ail_saddlepoint.
LeakageEstimate ail_closed_form(const FblOperatingPoint& point,
                                const EveSnrDistribution& dist);

// IBL secrecy outage probability at redundancy rate R_e.
double sop(double redundancy_rate, const EveSnrDistribution& dist);

// gamma-independent limit of R0 (dispersion at its high-SNR constant).
double r0_highsnr(double n, double m, double epsilon);

// High-SNR asymptote of the closed forms via the x0 -> x0_inf substitution.
// paper_r0_form replays the printed variant with a bare R0_inf denominator.
LeakageEstimate ail_highsnr(const FblOperatingPoint& point,
                            const EveSnrDistribution& dist,
                            bool paper_r0_form = false);

struct LaplaceDiagnostics {
  double x0 = 0.0;
  double psi = 0.0;           // smooth prefactor at x0
  double xi = 0.0;            // exponent at its minimum (should be 0)
  double xi_second = 0.0;     // 2 / (x0 (x0 + 2))
  double laplace_value = 0.0; // e^{-N Xi} Psi sqrt(2 pi / (N Xi''))
  double survival = 0.0;      // 1 - F(x0)
};

// Test-only check that the Laplace product collapses to 1 - F(x0).
LaplaceDiagnostics laplace_internals_check(const FblOperatingPoint& point,
                                           const EveSnrDistribution& dist);

}  // namespace leakscope
