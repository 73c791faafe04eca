#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "leakscope/rng.hpp"

namespace leakscope {

struct LinkGeometry {
  double beta0 = 1.0;    // power gain at the 1 m reference distance
  double distance = 1.0; // meters
  double eta = 0.0;      // path-loss exponent
};

// Small-scale fading family. K = 0 is Rayleigh; K > 0 mixes a unit-modulus
// LoS vector with scattered components.
struct FadingModel {
  double k_factor = 0.0;
  // LoS phase vector; empty means all-ones. Entries must be unit modulus.
  Eigen::VectorXcd los_phases;

  bool rician() const { return k_factor > 0.0; }
};

// Power split between the information beam and the AN nullspace beams.
// alpha = 1 degenerates to MRT (no artificial noise).
struct BeamformingScheme {
  double alpha = 1.0;

  bool is_mrt() const { return alpha >= 1.0; }
};

struct SystemParams {
  int k = 4;           // transmit antennas
  double rho = 1.0;    // transmit SNR, linear
  LinkGeometry geometry_b;
  LinkGeometry geometry_e;
  FadingModel fading_b;
  FadingModel fading_e;
  BeamformingScheme scheme;
  double m = 100.0;       // information bits
  int n = 400;            // blocklength
  double epsilon = 1e-3;  // decoding error probability
  double phi = 1e-4;      // AIL threshold
  int n_max = 1000;
  int slots = 1000;

  double gamma_b_bar() const;
  double gamma_e_bar() const;
};

struct Beamformer {
  Eigen::VectorXcd w;  // unit information beam, aligned with h_b
  Eigen::MatrixXcd u;  // k x (k-1) orthonormal nullspace basis
};

// Mean SNR of a link: rho * beta0 * d^(-eta).
double mean_snr(double rho, const LinkGeometry& geo);

// Unit-average-power fading vector of length k.
Eigen::VectorXcd sample_fading(const FadingModel& fading, int k, Rng& rng);

// Information beam plus Householder completion of its nullspace.
// h_b is Bob's channel vector; requires ||h_b|| > 0.
Beamformer an_beamformer(const Eigen::VectorXcd& h_b);

double snr_bob(double alpha, double gamma_b_bar, const Eigen::VectorXcd& h_b);

double snr_eve_sample(const BeamformingScheme& scheme,
                      const Eigen::VectorXcd& h_e, const Beamformer& bf,
                      double gamma_e_bar, int k);

// Distribution of the main-channel power gamma_b_tilde = gamma_b_bar*||h||^2:
// Gamma(k, gamma_b_bar) under Rayleigh, scaled nc-chi^2 under Rician.
double gamma_b_tilde_cdf(const FadingModel& fading_b, double gamma_b_bar, int k,
                         double x);
double gamma_b_tilde_pdf(const FadingModel& fading_b, double gamma_b_bar, int k,
                         double x);

struct GammaFitMeta {
  std::int64_t sample_count = 0;
  double mean = 0.0;
  double variance = 0.0;
};

// Analytical model for Eve's SNR. Four branches, one per
// (fading family x beamforming scheme) combination.
class EveSnrDistribution {
public:
  enum class Branch { RaylAN, RaylMRT, RiceANGammaFit, RiceMRTBound };

  static EveSnrDistribution rayleigh_an(double gamma_e_bar, double alpha, int k);
  static EveSnrDistribution rayleigh_mrt(double gamma_e_bar);
  static EveSnrDistribution rician_an_fit(double shape, double scale,
                                          const SystemParams& params,
                                          const GammaFitMeta& meta);
  static EveSnrDistribution rician_mrt_bound(double gamma_e_bar, double k_e,
                                             int k, const SystemParams& params);

  Branch branch() const { return branch_; }
  bool has_pdf() const { return branch_ != Branch::RiceMRTBound; }

  double cdf(double x) const;
  double pdf(double x) const;  // throws std::logic_error on RiceMRTBound
  double quantile(double p) const;
  // Physical channel sample of gamma_e (not the fitted model).
  double sample(Rng& rng) const;

  double gamma_e_bar() const { return gamma_e_bar_; }
  double alpha() const { return alpha_; }
  int k() const { return k_; }
  double k_factor_e() const { return k_e_; }
  double fit_shape() const { return shape_; }
  double fit_scale() const { return scale_; }
  const GammaFitMeta& fit_meta() const { return fit_meta_; }

private:
  Branch branch_ = Branch::RaylMRT;
  double gamma_e_bar_ = 1.0;
  double alpha_ = 1.0;
  int k_ = 1;
  double k_e_ = 0.0;
  double shape_ = 1.0;  // RiceANGammaFit
  double scale_ = 1.0;
  GammaFitMeta fit_meta_;
  // Retained for the physical samplers of the Rician branches.
  FadingModel fading_b_;
  FadingModel fading_e_;
};

// Moment-matched Gamma parameters: shape = mean^2/var, scale = var/mean.
std::pair<double, double> fit_gamma_moments(const std::vector<double>& samples);

// Branch selection from the scenario plus (for the Rician AN case) a
// Monte-Carlo moment fit of mc_budget physical samples.
EveSnrDistribution build_eve_distribution(const SystemParams& params,
                                          std::int64_t mc_budget, Rng& rng);

double eve_quantile(const EveSnrDistribution& dist, double p);

}  // namespace leakscope
