#include "leakscope/channel.hpp"

#include <cmath>

#include "leakscope/specfun.hpp"

namespace leakscope {

namespace {

Eigen::VectorXcd los_vector(const FadingModel& fading, int k) {
  if (fading.los_phases.size() == 0) return Eigen::VectorXcd::Ones(k);
  if (fading.los_phases.size() != k) {
    throw std::invalid_argument("los_phases length does not match k");
  }
  return fading.los_phases;
}

}  // namespace

double SystemParams::gamma_b_bar() const { return mean_snr(rho, geometry_b); }
double SystemParams::gamma_e_bar() const { return mean_snr(rho, geometry_e); }

double mean_snr(double rho, const LinkGeometry& geo) {
  if (rho < 0.0) throw std::domain_error("mean_snr: rho must be nonnegative");
  return rho * geo.beta0 * std::pow(geo.distance, -geo.eta);
}

Eigen::VectorXcd sample_fading(const FadingModel& fading, int k, Rng& rng) {
  Eigen::VectorXcd h(k);
  for (int i = 0; i < k; ++i) h(i) = rng.cnormal();
  if (!fading.rician()) return h;
  const double kf = fading.k_factor;
  const double los = std::sqrt(kf / (1.0 + kf));
  const double nlos = std::sqrt(1.0 / (1.0 + kf));
  return los * los_vector(fading, k) + nlos * h;
}

Beamformer an_beamformer(const Eigen::VectorXcd& h_b) {
  const int k = static_cast<int>(h_b.size());
  const double nrm = h_b.norm();
  if (nrm < 1e-300) {
    throw std::domain_error("an_beamformer: degenerate channel vector");
  }
  Beamformer bf;
  bf.w = h_b / nrm;  // rank-1 principal eigenvector of h_b^H h_b, directly
  // Householder reflector taking e1 onto the beam direction; its trailing
  // columns form an orthonormal basis of the nullspace of h_b.
  Eigen::VectorXcd v = bf.w;
  std::complex<double> phase(1.0, 0.0);
  if (std::abs(v(0)) > 0.0) phase = v(0) / std::abs(v(0));
  v(0) += phase;
  const double vsq = v.squaredNorm();
  Eigen::MatrixXcd reflect =
      Eigen::MatrixXcd::Identity(k, k) - (2.0 / vsq) * (v * v.adjoint());
  // reflect maps w -> -phase*e1, so its last k-1 columns are orthogonal to w.
  bf.u = reflect.rightCols(k - 1);
  return bf;
}

double snr_bob(double alpha, double gamma_b_bar, const Eigen::VectorXcd& h_b) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::domain_error("snr_bob: alpha must lie in (0, 1]");
  }
  return alpha * gamma_b_bar * h_b.squaredNorm();
}

double snr_eve_sample(const BeamformingScheme& scheme,
                      const Eigen::VectorXcd& h_e, const Beamformer& bf,
                      double gamma_e_bar, int k) {
  const double sig = std::norm(h_e.dot(bf.w));
  if (scheme.is_mrt()) return gamma_e_bar * sig;
  const double an = (bf.u.adjoint() * h_e).squaredNorm();
  const double alpha = scheme.alpha;
  return alpha * sig /
         ((1.0 - alpha) / (k - 1) * an + 1.0 / gamma_e_bar);
}

double gamma_b_tilde_cdf(const FadingModel& fading_b, double gamma_b_bar,
                         int k, double x) {
  if (x <= 0.0) return 0.0;
  if (!fading_b.rician()) {
    return specfun::reg_lower_gamma(k, x / gamma_b_bar);
  }
  const double kb = fading_b.k_factor;
  return 1.0 - specfun::marcum_q(k, std::sqrt(2.0 * k * kb),
                                 std::sqrt(2.0 * (kb + 1.0) * x / gamma_b_bar));
}

double gamma_b_tilde_pdf(const FadingModel& fading_b, double gamma_b_bar,
                         int k, double x) {
  if (x <= 0.0) return 0.0;
  if (!fading_b.rician()) {
    return std::exp((k - 1.0) * std::log(x) - x / gamma_b_bar -
                    k * std::log(gamma_b_bar) - specfun::ln_gamma(k));
  }
  // Scaled nc-chi^2 with 2k dof, noncentrality 2kK_b. The scale constant
  // c = gamma_b_bar / (2(1+K_b)) is fixed by the CDF form and gives the
  // correct mean k*gamma_b_bar.
  const double kb = fading_b.k_factor;
  const double c = gamma_b_bar / (2.0 * (kb + 1.0));
  return specfun::ncx2_pdf(2.0 * k, 2.0 * k * kb, x / c) / c;
}

EveSnrDistribution EveSnrDistribution::rayleigh_an(double gamma_e_bar,
                                                   double alpha, int k) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("rayleigh_an: alpha must lie in (0, 1)");
  }
  if (k < 2) throw std::domain_error("rayleigh_an: AN requires k >= 2");
  EveSnrDistribution d;
  d.branch_ = Branch::RaylAN;
  d.gamma_e_bar_ = gamma_e_bar;
  d.alpha_ = alpha;
  d.k_ = k;
  return d;
}

EveSnrDistribution EveSnrDistribution::rayleigh_mrt(double gamma_e_bar) {
  EveSnrDistribution d;
  d.branch_ = Branch::RaylMRT;
  d.gamma_e_bar_ = gamma_e_bar;
  return d;
}

EveSnrDistribution EveSnrDistribution::rician_an_fit(
    double shape, double scale, const SystemParams& params,
    const GammaFitMeta& meta) {
  EveSnrDistribution d;
  d.branch_ = Branch::RiceANGammaFit;
  d.shape_ = shape;
  d.scale_ = scale;
  d.fit_meta_ = meta;
  d.gamma_e_bar_ = params.gamma_e_bar();
  d.alpha_ = params.scheme.alpha;
  d.k_ = params.k;
  d.k_e_ = params.fading_e.k_factor;
  d.fading_b_ = params.fading_b;
  d.fading_e_ = params.fading_e;
  return d;
}

EveSnrDistribution EveSnrDistribution::rician_mrt_bound(
    double gamma_e_bar, double k_e, int k, const SystemParams& params) {
  EveSnrDistribution d;
  d.branch_ = Branch::RiceMRTBound;
  d.gamma_e_bar_ = gamma_e_bar;
  d.k_e_ = k_e;
  d.k_ = k;
  d.fading_b_ = params.fading_b;
  d.fading_e_ = params.fading_e;
  return d;
}

double EveSnrDistribution::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  switch (branch_) {
    case Branch::RaylAN: {
      const double tau = 1.0 + x * (1.0 - alpha_) / (alpha_ * (k_ - 1));
      return 1.0 - std::exp(-x / (alpha_ * gamma_e_bar_)) *
                       std::pow(tau, -(k_ - 1.0));
    }
    case Branch::RaylMRT:
      return 1.0 - std::exp(-x / gamma_e_bar_);
    case Branch::RiceANGammaFit:
      return specfun::reg_lower_gamma(shape_, x / scale_);
    case Branch::RiceMRTBound:
      // Lower bound on the true CDF (Cauchy-Schwarz on the LoS term).
      return 1.0 - specfun::marcum_q(
                       1.0, std::sqrt(2.0 * k_ * k_e_),
                       std::sqrt(2.0 * (1.0 + k_e_) * x / gamma_e_bar_));
  }
  return 0.0;
}

double EveSnrDistribution::pdf(double x) const {
  if (x < 0.0) return 0.0;
  switch (branch_) {
    case Branch::RaylAN: {
      const double tau = 1.0 + x * (1.0 - alpha_) / (alpha_ * (k_ - 1));
      return (tau + gamma_e_bar_ * (1.0 - alpha_)) / (alpha_ * gamma_e_bar_) *
             std::exp(-x / (alpha_ * gamma_e_bar_)) * std::pow(tau, -k_);
    }
    case Branch::RaylMRT:
      return std::exp(-x / gamma_e_bar_) / gamma_e_bar_;
    case Branch::RiceANGammaFit:
      if (x == 0.0) return shape_ > 1.0 ? 0.0 : (shape_ == 1.0 ? 1.0 / scale_ : 0.0);
      return std::exp((shape_ - 1.0) * std::log(x) - x / scale_ -
                      shape_ * std::log(scale_) - specfun::ln_gamma(shape_));
    case Branch::RiceMRTBound:
      throw std::logic_error(
          "EveSnrDistribution: the Rician MRT branch is a CDF bound without "
          "a density; use Monte Carlo estimators instead");
  }
  return 0.0;
}

double EveSnrDistribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("quantile: p must lie in (0, 1)");
  }
  double hi = gamma_e_bar_ > 0.0 ? gamma_e_bar_ : 1.0;
  if (branch_ == Branch::RiceANGammaFit) hi = shape_ * scale_ + scale_;
  while (cdf(hi) < p) {
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("quantile: bracket overflow");
  }
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
    if (hi - lo <= 1e-12 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

double EveSnrDistribution::sample(Rng& rng) const {
  switch (branch_) {
    case Branch::RaylAN: {
      // |h_e w|^2 ~ Exp(1), ||h_e U||^2 ~ Gamma(k-1, 1) independently.
      const double sig = rng.exponential(1.0);
      const double an = rng.gamma_int(k_ - 1, 1.0);
      return alpha_ * sig /
             ((1.0 - alpha_) / (k_ - 1) * an + 1.0 / gamma_e_bar_);
    }
    case Branch::RaylMRT:
      return rng.exponential(gamma_e_bar_);
    case Branch::RiceANGammaFit:
    case Branch::RiceMRTBound: {
      const Eigen::VectorXcd h_b = sample_fading(fading_b_, k_, rng);
      const Beamformer bf = an_beamformer(h_b);
      const Eigen::VectorXcd h_e = sample_fading(fading_e_, k_, rng);
      BeamformingScheme scheme;
      scheme.alpha = branch_ == Branch::RiceMRTBound ? 1.0 : alpha_;
      return snr_eve_sample(scheme, h_e, bf, gamma_e_bar_, k_);
    }
  }
  return 0.0;
}

std::pair<double, double> fit_gamma_moments(const std::vector<double>& samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("fit_gamma_moments: need at least 2 samples");
  }
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= static_cast<double>(samples.size() - 1);
  if (!(var > 0.0)) {
    throw std::invalid_argument("fit_gamma_moments: degenerate samples");
  }
  return {mean * mean / var, var / mean};
}

EveSnrDistribution build_eve_distribution(const SystemParams& params,
                                          std::int64_t mc_budget, Rng& rng) {
  const double ge = params.gamma_e_bar();
  const bool mrt = params.scheme.is_mrt();
  if (!params.fading_e.rician() && !params.fading_b.rician()) {
    return mrt ? EveSnrDistribution::rayleigh_mrt(ge)
               : EveSnrDistribution::rayleigh_an(ge, params.scheme.alpha,
                                                 params.k);
  }
  if (mrt) {
    return EveSnrDistribution::rician_mrt_bound(ge, params.fading_e.k_factor,
                                                params.k, params);
  }
  if (mc_budget < 10000) {
    throw std::invalid_argument(
        "build_eve_distribution: the Rician AN fit needs mc_budget >= 1e4");
  }
  // Physical Monte-Carlo moments for the Gamma fit.
  EveSnrDistribution sampler = EveSnrDistribution::rician_an_fit(
      1.0, 1.0, params, GammaFitMeta{});
  std::vector<double> samples(static_cast<std::size_t>(mc_budget));
  for (auto& s : samples) s = sampler.sample(rng);
  const auto [shape, scale] = fit_gamma_moments(samples);
  GammaFitMeta meta;
  meta.sample_count = mc_budget;
  meta.mean = shape * scale;
  meta.variance = shape * scale * scale;
  return EveSnrDistribution::rician_an_fit(shape, scale, params, meta);
}

double eve_quantile(const EveSnrDistribution& dist, double p) {
  return dist.quantile(p);
}

}  // namespace leakscope
