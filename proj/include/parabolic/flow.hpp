#pragma once

// Flows of one-dimensional vector fields and their spatial derivatives.
// F is any type with `template <int K> Jet<K> jet(double) const`.

#include <cmath>
#include <utility>

#include "parabolic/error.hpp"
#include "parabolic/jet.hpp"
#include "parabolic/numerics/ode.hpp"
#include "parabolic/numerics/quadrature.hpp"

namespace parabolic {

inline constexpr double kDefaultFlowTol = 1e-12;

struct FlowJet {
  double x = 0.0;  // f^t(x0)
  double d1 = 1.0; // D f^t
  double d2 = 0.0;
  double d3 = 0.0;
};

namespace detail {
template <std::size_t D>
numerics::OdeOptions<D> flow_options(double tol) {
  auto o = numerics::OdeOptions<D>::uniform(tol, 1e-300);
  o.atol[0] = tol * 1e-10;
  return o;
}
} // namespace detail

template <class F>
double flow(const F& X, double t, double x, double tol = kDefaultFlowTol,
            numerics::OdeStats* stats = nullptr) {
  if (t == 0.0) return x;
  auto rhs = [&](const numerics::State<1>& s, numerics::State<1>& out) { out[0] = X.template jet<0>(s[0]).c[0]; };
  return numerics::integrate_dop853<1>(rhs, {x}, t, detail::flow_options<1>(tol), stats)[0];
}

// Orbit together with the variational equations up to `order` (1..3):
//   v' = X1 v,  w' = X2 v^2 + X1 w,  z' = X3 v^3 + 3 X2 v w + X1 z
template <class F>
FlowJet flow_jet(const F& X, double t, double x, int order = 1, double tol = kDefaultFlowTol,
                 numerics::OdeStats* stats = nullptr) {
  if (order < 0 || order > 3) throw UnsupportedError("flow derivatives available up to order 3");
  FlowJet r;
  r.x = x;
  if (t == 0.0) return r;
  if (order == 0) {
    r.x = flow(X, t, x, tol, stats);
    return r;
  }
  if (order == 1) {
    auto rhs = [&](const numerics::State<2>& s, numerics::State<2>& out) {
      auto j = X.template jet<1>(s[0]);
      out[0] = j.c[0];
      out[1] = j.c[1] * s[1];
    };
    auto s = numerics::integrate_dop853<2>(rhs, {x, 1.0}, t, detail::flow_options<2>(tol), stats);
    r.x = s[0];
    r.d1 = s[1];
    return r;
  }
  if (order == 2) {
    auto rhs = [&](const numerics::State<3>& s, numerics::State<3>& out) {
      auto j = X.template jet<2>(s[0]);
      const double x1 = j.c[1], x2 = 2.0 * j.c[2];
      out[0] = j.c[0];
      out[1] = x1 * s[1];
      out[2] = x2 * s[1] * s[1] + x1 * s[2];
    };
    auto o = detail::flow_options<3>(tol);
    o.atol[2] = tol * 1e-8;
    auto s = numerics::integrate_dop853<3>(rhs, {x, 1.0, 0.0}, t, o, stats);
    r.x = s[0];
    r.d1 = s[1];
    r.d2 = s[2];
    return r;
  }
  auto rhs = [&](const numerics::State<4>& s, numerics::State<4>& out) {
    auto j = X.template jet<3>(s[0]);
    const double x1 = j.c[1], x2 = 2.0 * j.c[2], x3 = 6.0 * j.c[3];
    out[0] = j.c[0];
    out[1] = x1 * s[1];
    out[2] = x2 * s[1] * s[1] + x1 * s[2];
    out[3] = x3 * s[1] * s[1] * s[1] + 3.0 * x2 * s[1] * s[2] + x1 * s[3];
  };
  auto o = detail::flow_options<4>(tol);
  o.atol[2] = tol * 1e-8;
  o.atol[3] = tol * 1e-8;
  auto s = numerics::integrate_dop853<4>(rhs, {x, 1.0, 0.0, 0.0}, t, o, stats);
  r.x = s[0];
  r.d1 = s[1];
  r.d2 = s[2];
  r.d3 = s[3];
  return r;
}

template <class F>
double variational_deriv(const F& X, double t, double x, double tol = kDefaultFlowTol) {
  return flow_jet(X, t, x, 1, tol).d1;
}

// f^t(x) - x, integrated directly so small displacements keep full relative accuracy
template <class F>
double flow_displacement(const F& X, double t, double x, double tol = kDefaultFlowTol) {
  if (t == 0.0) return 0.0;
  auto rhs = [&](const numerics::State<1>& s, numerics::State<1>& out) { out[0] = X.template jet<0>(x + s[0]).c[0]; };
  const double v0 = std::fabs(X.template jet<0>(x).c[0]);
  if (v0 == 0.0) return 0.0;
  // u starts at 0, so the absolute tolerance follows the speed at x
  auto o = numerics::OdeOptions<1>::uniform(tol, tol * 1e-2 * v0 * std::fabs(t));
  return numerics::integrate_dop853<1>(rhs, {0.0}, t, o)[0];
}

// time to travel from x0 to x1 along X: the integral of dx / X
template <class F>
double transit_time(const F& X, double x0, double x1, double rtol = 1e-11) {
  if (x0 == x1) return 0.0;
  auto g = [&](double s) { return 1.0 / X.template jet<0>(s).c[0]; };
  const double lo = std::min(x0, x1), hi = std::max(x0, x1);
  const double v = numerics::integrate(g, lo, hi, rtol, 0.0).value;
  return x1 > x0 ? v : -v;
}

// closed-form flow of eps (x - center)^2
struct AffineFlowParams {
  double eps = -1.0;
  double center = 0.0;
};

inline std::pair<double, double> affine_flow(const AffineFlowParams& p, double t, double x) {
  if (p.eps == 0.0) throw DomainError("affine flow needs eps != 0");
  const double den = 1.0 - p.eps * t * (x - p.center);
  if (!(den > 0.0)) throw DomainError("affine flow blows up before time t");
  return {p.center + (x - p.center) / den, 1.0 / (den * den)};
}

} // namespace parabolic
