#pragma once

// Independent reference computations used to derive and freeze expected
// values. Nothing here calls into the library's numerics.

#include <cmath>
#include <functional>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace oracle {

// x' = X(x) integrated with Fehlberg 7(8) under tight controlled stepping
inline double flow(const std::function<double(double)>& X, double t, double x, double tol = 1e-14) {
  using namespace boost::numeric::odeint;
  using state = std::vector<double>;
  state s{x};
  auto rhs = [&](const state& y, state& dy, double) { dy[0] = X(y[0]); };
  auto stepper = make_controlled(tol, tol, runge_kutta_fehlberg78<state>());
  integrate_adaptive(stepper, rhs, s, 0.0, t, t / 64.0);
  return s[0];
}

// central difference with Richardson on h, h/2, h/4
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  auto D = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
  const double d1 = D(h), d2 = D(h / 2), d3 = D(h / 4);
  const double r1 = (4 * d2 - d1) / 3, r2 = (4 * d3 - d2) / 3;
  return (16 * r2 - r1) / 15;
}

inline double second_derivative(const std::function<double(double)>& f, double x, double h) {
  auto D = [&](double s) { return (f(x + s) - 2 * f(x) + f(x - s)) / (s * s); };
  const double d1 = D(h), d2 = D(h / 2);
  return (4 * d2 - d1) / 3;
}

inline double third_derivative(const std::function<double(double)>& f, double x, double h) {
  auto D = [&](double s) { return (f(x + 2 * s) - 2 * f(x + s) + 2 * f(x - s) - f(x - 2 * s)) / (2 * s * s * s); };
  const double d1 = D(h), d2 = D(h / 2);
  return (4 * d2 - d1) / 3;
}

struct GridMax {
  double x;
  double value;
};

inline GridMax grid_max(const std::function<double(double)>& f, double a, double b, int n) {
  GridMax best{a, f(a)};
  for (int i = 1; i <= n; ++i) {
    const double x = a + (b - a) * i / n;
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }
  return best;
}

// total variation of g sampled on a uniform grid
inline double grid_variation(const std::function<double(double)>& g, double a, double b, int n) {
  double tv = 0.0, prev = g(a);
  for (int i = 1; i <= n; ++i) {
    const double v = g(a + (b - a) * i / n);
    tv += std::fabs(v - prev);
    prev = v;
  }
  return tv;
}

inline double iterate(const std::function<double(double)>& f, int n, double x) {
  for (int i = 0; i < n; ++i) x = f(x);
  return x;
}

} // namespace oracle
