#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "parabolic/error.hpp"

namespace parabolic::numerics {

struct RootResult {
  double x = 0.0;
  int iterations = 0;
};

// Bracketed Newton with bisection fallback. fdf(x) returns {f(x), f'(x)}.
// Requires a sign change over [lo, hi].
template <class FdF>
RootResult newton_bisect(FdF&& fdf, double lo, double hi, double guess, double tol,
                         int max_iter = 200) {
  auto [flo, dlo] = fdf(lo);
  if (flo == 0.0) return {lo, 0};
  auto [fhi, dhi] = fdf(hi);
  if (fhi == 0.0) return {hi, 0};
  (void)dlo;
  (void)dhi;
  if ((flo < 0) == (fhi < 0)) {
    std::ostringstream os;
    os << "root not bracketed on [" << lo << ", " << hi << "]";
    throw NumericError(os.str());
  }
  // a holds the negative side
  double a = flo < 0 ? lo : hi;
  double b = flo < 0 ? hi : lo;
  double x = (guess > std::min(lo, hi) && guess < std::max(lo, hi)) ? guess : 0.5 * (lo + hi);
  double prev_step = std::fabs(hi - lo);
  for (int it = 1; it <= max_iter; ++it) {
    auto [fx, dfx] = fdf(x);
    if (fx == 0.0) return {x, it};
    if (fx < 0) a = x;
    else b = x;
    double xn = (dfx != 0.0 && std::isfinite(dfx)) ? x - fx / dfx : 0.5 * (a + b);
    const double lo_b = std::min(a, b), hi_b = std::max(a, b);
    double step = std::fabs(xn - x);
    if (!(xn > lo_b && xn < hi_b) || step > 0.5 * prev_step) {
      xn = 0.5 * (a + b);
      step = std::fabs(xn - x);
    }
    prev_step = step;
    x = xn;
    const double eps = 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(x);
    if (step <= tol + eps || std::fabs(b - a) <= tol + eps) return {x, it};
  }
  throw NumericError("root finding did not converge within the iteration cap");
}

} // namespace parabolic::numerics

namespace parabolic::numerics {

// Variant for an increasing function with known signs f(lo) <= 0 <= f(hi);
// skips the endpoint evaluations. tol = 0 iterates to ulp level.
template <class FdF>
RootResult newton_bisect_increasing(FdF&& fdf, double lo, double hi, double guess, double tol,
                                    int max_iter = 200) {
  double a = lo, b = hi;
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  double prev_step = hi - lo;
  for (int it = 1; it <= max_iter; ++it) {
    auto [fx, dfx] = fdf(x);
    if (fx == 0.0) return {x, it};
    if (fx < 0) a = x;
    else b = x;
    double xn = (dfx > 0.0 && std::isfinite(dfx)) ? x - fx / dfx : 0.5 * (a + b);
    double step = std::fabs(xn - x);
    if (!(xn >= a && xn <= b) || step > 0.5 * prev_step) {
      xn = 0.5 * (a + b);
      step = std::fabs(xn - x);
    }
    prev_step = step;
    x = xn;
    const double eps = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(x);
    if (step <= tol + eps || b - a <= tol + eps) return {x, it};
  }
  throw NumericError("root finding did not converge within the iteration cap");
}

} // namespace parabolic::numerics
