// Test-only numeric oracles, independent of the library's evaluation paths.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b) {
  const double c = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double eps = 1e-10, int depth = 40) {
  const double c = 0.5 * (a + b);
  const double whole = simpson(f, a, b);
  const double left = simpson(f, a, c);
  const double right = simpson(f, c, b);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, c, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, c, b, 0.5 * eps, depth - 1);
}

// Scalar bisection for a strictly decreasing g, solving g(x) = target.
inline double bisect_decreasing(const std::function<double(double)>& g,
                                double target, double lo, double hi,
                                double tol = 1e-14) {
  if (!(g(lo) >= target && g(hi) <= target))
    throw std::runtime_error("bisect_decreasing: not bracketed");
  for (int i = 0; i < 400 && (hi - lo) > tol * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace oracles
