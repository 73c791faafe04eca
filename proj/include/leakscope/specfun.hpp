#pragma once

namespace leakscope::specfun {

// Gaussian tail probability Q(x) = P{N(0,1) > x}.
double gaussian_q(double x);

// Inverse of gaussian_q on (0, 1). Throws std::domain_error at the endpoints.
double gaussian_q_inv(double p);

// log Gamma(x), x > 0.
double ln_gamma(double x);

// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
double reg_lower_gamma(double s, double x);

// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x).
double reg_upper_gamma(double s, double x);

// Modified Bessel function of the first kind I_nu(x), nu >= 0, x >= 0.
// Throws std::overflow_error when the result is not representable.
double bessel_i(double nu, double x);

// log I_nu(x); finite wherever I_nu(x) > 0.
double bessel_i_log(double nu, double x);

// Exponentially scaled variant e^{-x} I_nu(x).
double bessel_i_scaled(double nu, double x);

// Generalized Marcum Q-function Q_nu(a, b), nu > 0.
double marcum_q(double nu, double a, double b);

// Noncentral chi-squared CDF with `dof` degrees of freedom and
// noncentrality `lambda`; equals 1 - Q_{dof/2}(sqrt(lambda), sqrt(x)).
double ncx2_cdf(double dof, double lambda, double x);

// Noncentral chi-squared density. lambda = 0 routes to the central branch.
double ncx2_pdf(double dof, double lambda, double x);

}  // namespace leakscope::specfun
