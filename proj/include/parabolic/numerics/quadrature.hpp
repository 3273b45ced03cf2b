#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "parabolic/error.hpp"

namespace parabolic::numerics {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

// Adaptive Gauss-Kronrod 31 on [a, b]. Throws NumericError when neither the
// Kronrod estimate nor the change between two refinement depths falls below
// max(rtol * L1, atol). rtol is floored at 1e-10. Past that the Kronrod
// estimate is mostly rounding noise and grows with depth.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double rtol = 1e-10, double atol = 1e-14,
                           unsigned max_depth = 15) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  rtol = std::max(rtol, 1e-10);
  double e1 = 0.0, l1 = 0.0, e2 = 0.0, l2 = 0.0;
  const double v1 = GK::integrate(f, a, b, 3, rtol, &e1, &l1);
  const double v2 = GK::integrate(f, a, b, std::min(6u, max_depth), rtol, &e2, &l2);
  const double tol = std::max(rtol * l2, atol);
  if (std::isfinite(v2)) {
    if (std::fabs(v2 - v1) <= tol) return {v2, std::fabs(v2 - v1), l2};
    if (e2 <= 10.0 * tol) return {v2, e2, l2};
  }
  double err = 0.0, l = 0.0;
  const double v = GK::integrate(f, a, b, max_depth, rtol, &err, &l);
  if (std::isfinite(v) && err <= 10.0 * std::max(rtol * l, atol)) return {v, err, l};
  std::ostringstream os;
  os << "quadrature did not converge on [" << a << ", " << b << "]: error " << err << ", L1 " << l;
  throw NumericError(os.str());
}

// Same, split at the given interior breakpoints.
template <class F>
QuadratureResult integrate_pieces(F&& f, const std::vector<double>& knots, double rtol = 1e-10,
                                  double atol = 1e-14) {
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i] < knots[i + 1])) continue;
    auto r = integrate(f, knots[i], knots[i + 1], rtol, atol);
    total.value += r.value;
    total.error += r.error;
    total.l1 += r.l1;
  }
  return total;
}

} // namespace parabolic::numerics
