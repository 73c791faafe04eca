#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace leakscope {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod 7-15 integration on [a, b] to an absolute
// tolerance. Recursion bisects the worst panel first via simple
// depth-first subdivision.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth = 40);

// Integral over [0, inf) through the map x = t / (1 - t). Optional
// interior split points (in x) sharpen transitions such as the leakage
// integrand's step near x0.
QuadResult integrate_semi_infinite(const std::function<double(double)>& f,
                                   double abs_tol,
                                   const std::vector<double>& splits = {});

}  // namespace leakscope
