#pragma once

// Scalar maximization on a bracket: plain golden section and Brent's
// golden-section-with-parabolic-steps variant.

#include <cmath>
#include <limits>
#include <utility>

namespace parabolic::numerics {

struct Maximum {
  double x = 0.0;
  double value = -std::numeric_limits<double>::infinity();
  int evaluations = 0;
};

template <class F>
Maximum golden_section_maximize(F&& f, double a, double b, double tol, int max_iter = 300) {
  constexpr double invphi = 0.6180339887498948482;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  int evals = 2;
  for (int it = 0; it < max_iter && std::fabs(b - a) > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  return fc >= fd ? Maximum{c, fc, evals} : Maximum{d, fd, evals};
}

// Brent's method (minimizes -f). tol is an absolute abscissa tolerance.
template <class F>
Maximum brent_maximize(F&& f, double a, double b, double tol, int max_iter = 200) {
  constexpr double cgold = 0.3819660112501051518;
  if (a > b) std::swap(a, b);
  double x = a + cgold * (b - a), w = x, v = x;
  double fx = -f(x), fw = fx, fv = fx;
  int evals = 1;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double xm = 0.5 * (a + b);
    const double tol1 = tol + 1e-15 * std::fabs(x), tol2 = 2.0 * tol1;
    if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::fabs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double etemp = e;
      e = d;
      if (!(std::fabs(p) >= std::fabs(0.5 * q * etemp) || p <= q * (a - x) || p >= q * (b - x))) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = xm - x >= 0 ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x >= xm) ? a - x : b - x;
      d = cgold * e;
    }
    const double u = std::fabs(d) >= tol1 ? x + d : x + (d >= 0 ? tol1 : -tol1);
    const double fu = -f(u);
    ++evals;
    if (fu <= fx) {
      if (u >= x) a = x;
      else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u;
      else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, -fx, evals};
}

} // namespace parabolic::numerics
