#include "leakscope/design.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "leakscope/specfun.hpp"

namespace leakscope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

EveSnrDistribution analytic_eve_branch(double alpha,
                                       const SystemParams& params) {
  const double ge = params.gamma_e_bar();
  if (params.fading_e.rician() || params.fading_b.rician()) {
    if (alpha >= 1.0) {
      return EveSnrDistribution::rician_mrt_bound(
          ge, params.fading_e.k_factor, params.k, params);
    }
    throw std::logic_error(
        "design: the Rician AN branch has no analytic CDF; design searches "
        "support Rayleigh fading or Rician MRT");
  }
  if (alpha >= 1.0) return EveSnrDistribution::rayleigh_mrt(ge);
  return EveSnrDistribution::rayleigh_an(ge, alpha, params.k);
}

// Minimum of the AIL over alpha at fixed blocklength: 200-point grid on
// (0, 1] followed by golden-section refinement around the best cell.
std::pair<double, double> min_ail_over_alpha(double n, double gamma_b_tilde,
                                             const SystemParams& params) {
  if (params.scheme.is_mrt()) {
    return {design_ail(n, 1.0, gamma_b_tilde, params), 1.0};
  }
  constexpr int kGrid = 200;
  double best_alpha = 1.0;
  double best = kInf;
  for (int i = 1; i <= kGrid; ++i) {
    const double a = static_cast<double>(i) / kGrid;
    const double v = design_ail(n, a, gamma_b_tilde, params);
    if (v < best) {
      best = v;
      best_alpha = a;
    }
  }
  double lo = std::max(best_alpha - 1.0 / kGrid, 1e-6);
  double hi = std::min(best_alpha + 1.0 / kGrid, 1.0);
  constexpr double kGolden = 0.61803398874989484820;
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = design_ail(n, x1, gamma_b_tilde, params);
  double f2 = design_ail(n, x2, gamma_b_tilde, params);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = design_ail(n, x1, gamma_b_tilde, params);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = design_ail(n, x2, gamma_b_tilde, params);
    }
  }
  const double a = f1 < f2 ? x1 : x2;
  const double v = std::min(f1, f2);
  return v < best ? std::make_pair(v, a) : std::make_pair(best, best_alpha);
}

// Real-valued blocklength with AIL(phi); +inf when infeasible at n_max.
double theta_or_inf(double phi, double alpha, double gamma_b_tilde,
                    const SystemParams& params, int n_max) {
  if (design_ail(n_max, alpha, gamma_b_tilde, params) > phi) return kInf;
  if (design_ail(1.0, alpha, gamma_b_tilde, params) <= phi) return 1.0;
  double lo = 1.0, hi = n_max;
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    (design_ail(mid, alpha, gamma_b_tilde, params) > phi ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double ist(int n, double m, double epsilon, double ail_value, double phi) {
  if (n < 1) throw std::domain_error("ist: n must be >= 1");
  return ail_value <= phi ? (1.0 - epsilon) * m / n : 0.0;
}

double design_ail(double n, double alpha, double gamma_b_tilde,
                  const SystemParams& params) {
  FblOperatingPoint point;
  point.gamma_b = alpha * gamma_b_tilde;
  point.n = n;
  point.m = params.m;
  point.epsilon = params.epsilon;
  return ail_closed_form(point, analytic_eve_branch(alpha, params)).value;
}

double ail_inverse_blocklength(double phi, double alpha, double gamma_b_tilde,
                               const SystemParams& params) {
  const double theta =
      theta_or_inf(phi, alpha, gamma_b_tilde, params, params.n_max);
  if (!std::isfinite(theta)) {
    throw std::runtime_error(
        "ail_inverse_blocklength: AIL exceeds phi even at n_max");
  }
  return theta;
}

SlotSolution solve_adaptive_slot(double gamma_b_tilde,
                                 const SystemParams& params,
                                 const DesignConfig& config) {
  SlotSolution sol;
  sol.gamma_b_tilde = gamma_b_tilde;
  const auto feasible_at = [&](double n) {
    return min_ail_over_alpha(n, gamma_b_tilde, params);
  };
  auto [ail_max, alpha_max] = feasible_at(config.n_max);
  if (gamma_b_tilde <= 0.0 || ail_max > config.phi) {
    return sol;  // infeasible, IST stays 0
  }
  // The AIL is decreasing in N, so the smallest feasible integer N is
  // found by bisection.
  int lo = config.n_min, hi = config.n_max;
  auto [ail_lo, alpha_lo] = feasible_at(lo);
  if (ail_lo <= config.phi) {
    hi = lo;
    ail_max = ail_lo;
    alpha_max = alpha_lo;
  }
  while (hi > lo) {
    const int mid = lo + (hi - lo) / 2;
    auto [v, a] = feasible_at(mid);
    if (v <= config.phi) {
      hi = mid;
      ail_max = v;
      alpha_max = a;
    } else {
      lo = mid + 1;
    }
  }
  sol.feasible = true;
  sol.n_opt = hi;
  sol.alpha_opt = alpha_max;
  sol.ist = ist(hi, params.m, params.epsilon, ail_max, config.phi);
  return sol;
}

SlotSolution solve_adaptive_relaxed(double gamma_b_tilde,
                                    const SystemParams& params,
                                    const DesignConfig& config) {
  SlotSolution sol;
  sol.gamma_b_tilde = gamma_b_tilde;
  const auto theta = [&](double a) {
    return theta_or_inf(config.phi, a, gamma_b_tilde, params, config.n_max);
  };
  double best_alpha;
  if (params.scheme.is_mrt()) {
    best_alpha = 1.0;
    if (!std::isfinite(theta(1.0))) return sol;
  } else {
    // Derivative sign change of theta(alpha) via central differences;
    // falls back to a grid argmin when the stationary point is not unique.
    constexpr int kCoarse = 50;
    std::vector<double> grid, th;
    for (int i = 1; i <= kCoarse; ++i) {
      const double a = static_cast<double>(i) / kCoarse;
      grid.push_back(a);
      th.push_back(theta(a));
    }
    const auto deriv = [&](double a) {
      const double h = 1e-3 * std::max(a, 0.1);
      const double lo = std::max(a - h, 1e-6);
      const double hi = std::min(a + h, 1.0);
      return (theta(hi) - theta(lo)) / (hi - lo);
    };
    int sign_changes = 0;
    int bracket = -1;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      if (!std::isfinite(th[i]) || !std::isfinite(th[i + 1])) continue;
      const double d0 = deriv(grid[i]);
      const double d1 = deriv(grid[i + 1]);
      if (d0 < 0.0 && d1 > 0.0) {
        ++sign_changes;
        bracket = static_cast<int>(i);
      }
    }
    if (sign_changes == 1) {
      double lo = grid[bracket], hi = grid[bracket + 1];
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (deriv(mid) < 0.0 ? lo : hi) = mid;
      }
      best_alpha = 0.5 * (lo + hi);
    } else {
      if (sign_changes > 1) {
        std::cerr << "solve_adaptive_relaxed: multiple stationary points of "
                     "theta(alpha); using grid search\n";
      }
      double best = kInf;
      best_alpha = 1.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (th[i] < best) {
          best = th[i];
          best_alpha = grid[i];
        }
      }
      if (!std::isfinite(best)) return sol;  // infeasible everywhere
    }
  }
  const double t = theta(best_alpha);
  if (!std::isfinite(t)) return sol;
  int n = static_cast<int>(std::ceil(t));
  n = std::clamp(n, config.n_min, config.n_max);
  // Guard the ceiling against marginal round-off at the constraint.
  while (n < config.n_max &&
         design_ail(n, best_alpha, gamma_b_tilde, params) > config.phi) {
    ++n;
  }
  const double ail = design_ail(n, best_alpha, gamma_b_tilde, params);
  if (ail > config.phi) return sol;
  sol.feasible = true;
  sol.n_opt = n;
  sol.alpha_opt = best_alpha;
  sol.ist = ist(n, params.m, params.epsilon, ail, config.phi);
  return sol;
}

double ast_adaptive_empirical(std::span<const double> slot_gains,
                              const SystemParams& params,
                              const DesignConfig& config) {
  if (slot_gains.empty()) return 0.0;
  double sum = 0.0;
  for (double g : slot_gains) {
    sum += solve_adaptive_slot(g, params, config).ist;
  }
  return sum / static_cast<double>(slot_gains.size());
}

double ast_adaptive_integral(const SystemParams& params,
                             const DesignConfig& config) {
  const double gb = params.gamma_b_bar();
  const double mean_gain = params.k * gb;
  const auto slot = [&](double x) {
    return solve_adaptive_relaxed(x, params, config);
  };
  // Transmission threshold gamma_0: the root of the rate-balance equation
  // evaluated at the per-slot optimal (alpha*, N*) maps.
  const auto balance = [&](double x) {
    const SlotSolution s = slot(x);
    if (!s.feasible) return -1.0;
    const double gamma_b = s.alpha_opt * x;
    const double n = s.n_opt;
    const double lhs = std::log(1.0 + gamma_b);
    const double rhs = std::sqrt((1.0 - 1.0 / ((gamma_b + 1.0) * (gamma_b + 1.0))) / n) *
                           specfun::gaussian_q_inv(params.epsilon) +
                       params.m * std::log(2.0) / n;
    return lhs - rhs;
  };
  double hi = std::max(mean_gain * 1e-3, 1e-6);
  const double cap = 1e3 * mean_gain;
  while (balance(hi) < 0.0) {
    hi *= 2.0;
    if (hi > cap) {
      throw std::runtime_error(
          "ast_adaptive_integral: no transmission threshold below 1e3 times "
          "the mean gain");
    }
  }
  double lo = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (balance(mid) < 0.0 ? lo : hi) = mid;
    if (hi - lo < 1e-9 * (1.0 + hi)) break;
  }
  const double gamma0 = hi;
  // Composite Simpson over x = gamma0 + s t/(1-t); the integrand is
  // piecewise smooth in between integer switches of N*, so a fixed fine
  // grid is preferred over adaptive subdivision.
  const int panels = 400;  // even
  const double s = std::max(mean_gain, 1e-6);
  const auto integrand = [&](double t) {
    const double om = 1.0 - t;
    const double x = gamma0 + s * t / om;
    const SlotSolution sl = slot(x);
    if (!sl.feasible) return 0.0;
    const double f =
        gamma_b_tilde_pdf(params.fading_b, gb, params.k, x);
    return f / sl.n_opt * s / (om * om);
  };
  double acc = 0.0;
  const double h = 1.0 / panels;
  for (int i = 0; i < panels; i += 2) {
    const double t0 = i * h, t1 = (i + 1) * h, t2 = (i + 2) * h;
    const double f0 = i == 0 ? integrand(1e-12) : integrand(t0);
    const double f2 = i + 2 == panels ? 0.0 : integrand(t2);
    acc += (f0 + 4.0 * integrand(t1) + f2) * h / 3.0;
  }
  return params.m * (1.0 - params.epsilon) * acc;
}

double gamma1_threshold(double n, double alpha, const SystemParams& params,
                        const EveSnrDistribution& dist) {
  if (!(n >= 1.0) || !(alpha > 0.0 && alpha <= 1.0)) {
    throw std::domain_error("gamma1_threshold: bad arguments");
  }
  const double r0inf = r0_highsnr(n, params.m, params.epsilon);
  const double omega = dist.quantile(1.0 - params.phi);
  return (std::exp2(r0inf) * (1.0 + omega) - 1.0) / alpha;
}

double ast_nonadaptive(double n, double alpha, const SystemParams& params) {
  const EveSnrDistribution dist = analytic_eve_branch(alpha, params);
  const double g1 = gamma1_threshold(n, alpha, params, dist);
  const double p_on =
      1.0 - gamma_b_tilde_cdf(params.fading_b, params.gamma_b_bar(), params.k,
                              g1);
  return params.m * (1.0 - params.epsilon) / n * p_on;
}

DesignSolution solve_nonadaptive(const SystemParams& params,
                                 const DesignConfig& config) {
  struct Cell {
    int n;
    double alpha;
    double ast;
  };
  const bool mrt = params.scheme.is_mrt();
  std::vector<double> alphas;
  if (mrt) {
    alphas.push_back(1.0);
  } else {
    for (int i = 1; i <= 50; ++i) alphas.push_back(i / 50.0);
  }
  std::vector<Cell> cells;
  for (double a : alphas) {
    for (int n = config.n_min; n <= config.n_max; n += 10) {
      cells.push_back({n, a, ast_nonadaptive(n, a, params)});
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
    if (x.ast != y.ast) return x.ast > y.ast;
    if (x.n != y.n) return x.n < y.n;
    return x.alpha < y.alpha;
  });
  DesignSolution best;
  best.ast = -1.0;
  const int top = std::min<std::size_t>(3, cells.size());
  for (int c = 0; c < top; ++c) {
    const Cell& seed = cells[c];
    const int n_lo = std::max(config.n_min, seed.n - 10);
    const int n_hi = std::min(config.n_max, seed.n + 10);
    const double a_lo = mrt ? 1.0 : std::max(config.alpha_resolution,
                                             seed.alpha - 0.02);
    const double a_hi = mrt ? 1.0 : std::min(1.0, seed.alpha + 0.02);
    for (double step = a_lo; step <= a_hi + 1e-12;
         step += config.alpha_resolution) {
      const double a = std::min(step, 1.0);
      for (int n = n_lo; n <= n_hi; ++n) {
        const double v = ast_nonadaptive(n, a, params);
        const bool better =
            v > best.ast ||
            (v == best.ast &&
             (n < best.n_opt || (n == best.n_opt && a < best.alpha_opt)));
        if (better) {
          best.ast = v;
          best.n_opt = n;
          best.alpha_opt = a;
        }
      }
      if (mrt) break;
    }
  }
  return best;
}

}  // namespace leakscope
