#pragma once

// Affine derivative D2f/Df, Schwarzian and Liouville cocycles along iterates.
//
// Along a backward orbit w_m = f^-m(y) the bundle for f^n at x = w_n obeys
//   A_n = A_{n-1} Df(w_n) + a(w_n),  S_n = S_{n-1} Df(w_n)^2 + s(w_n)
// (chain rules of the two cocycles), and then
//   D2 f^n = A_n Df^n,  D3 f^n = Df^n (S_n + 3/2 A_n^2).

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "parabolic/error.hpp"
#include "parabolic/fixed_points.hpp"
#include "parabolic/growth.hpp"
#include "parabolic/map.hpp"
#include "parabolic/numerics/optimize.hpp"
#include "parabolic/numerics/quadrature.hpp"
#include "parabolic/numerics/root_finding.hpp"
#include "parabolic/series.hpp"

namespace parabolic {

inline double affine_derivative(const Derivs& d) { return d[2] / d[1]; }
inline double schwarzian(const Derivs& d) {
  const double a = d[2] / d[1];
  return d[3] / d[1] - 1.5 * a * a;
}

// sum_{i<n} (D2f/Df)(f^i x) Df^i(x)
inline double affine_deriv_iterate(const MapSpec& f, int n, double x) {
  if (n < 0) throw DomainError("negative iterate");
  double sum = 0.0, dfi = 1.0;
  for (int i = 0; i < n; ++i) {
    auto d = f.derivs(x, 2);
    sum += affine_derivative(d) * dfi;
    dfi *= d[1];
    x = d[0];
  }
  return sum;
}

// sum_{i<n} S(f)(f^i x) (Df^i(x))^2
inline double schwarzian_iterate(const MapSpec& f, int n, double x) {
  if (n < 0) throw DomainError("negative iterate");
  double sum = 0.0, dfi = 1.0;
  for (int i = 0; i < n; ++i) {
    auto d = f.derivs(x, 3);
    sum += schwarzian(d) * dfi * dfi;
    dfi *= d[1];
    x = d[0];
  }
  return sum;
}

struct IterateDerivs {
  double value = 0.0; // f^n(x)
  double d1 = 1.0, d2 = 0.0, d3 = 0.0;
  double affine = 0.0, schwarz = 0.0;
};

// derivatives of f^n at x assembled from the cocycle sums (forward orbit)
inline IterateDerivs iterate_derivs(const MapSpec& f, int n, double x) {
  IterateDerivs r;
  double logd = 0.0;
  for (int i = 0; i < n; ++i) {
    auto d = f.derivs(x, 3);
    const double dfi = std::exp(logd);
    r.affine += affine_derivative(d) * dfi;
    r.schwarz += schwarzian(d) * dfi * dfi;
    logd += std::log(d[1]);
    x = d[0];
  }
  r.value = x;
  r.d1 = std::exp(logd);
  r.d2 = r.affine * r.d1;
  r.d3 = r.d1 * (r.schwarz + 1.5 * r.affine * r.affine);
  return r;
}

inline constexpr double kLiouvilleDiagonal = 1e-5;

// Df(x) Df(y) / (f(x) - f(y))^2 - 1/(x - y)^2; S f / 6 near the diagonal
inline double liouville_cocycle(const MapSpec& f, double x, double y) {
  if (std::fabs(x - y) < kLiouvilleDiagonal * std::max(1.0, f.domain().length()))
    return schwarzian(f.derivs(0.5 * (x + y), 3)) / 6.0;
  const auto dx = f.derivs(x, 1), dy = f.derivs(y, 1);
  const double fd = dx[0] - dy[0], d = x - y;
  return dx[1] * dy[1] / (fd * fd) - 1.0 / (d * d);
}

// the same for f^n, from forward orbits
inline double liouville_iterate(const MapSpec& f, int n, double x, double y) {
  if (std::fabs(x - y) < kLiouvilleDiagonal * std::max(1.0, f.domain().length()))
    return iterate_derivs(f, n, 0.5 * (x + y)).schwarz / 6.0;
  const auto ix = f.forward_iterate(x, n), iy = f.forward_iterate(y, n);
  const double fd = ix.x - iy.x, d = x - y;
  return std::exp(ix.log_d + iy.log_d) / (fd * fd) - 1.0 / (d * d);
}

// S f(x) recovered from 6 c(f)(x, x + h) at h0, h0/2, ... by Richardson
// elimination of the h, h^2, ... terms. h stays above the diagonal surrogate.
inline double diagonal_schwarzian(const MapSpec& f, double x, double h0, int levels = 4) {
  if (levels < 1) throw DomainError("need at least one level");
  if (!f.domain().contains(x + h0)) throw DomainError("x + h0 must lie in the domain");
  if (h0 / std::ldexp(1.0, levels - 1) < kLiouvilleDiagonal * std::max(1.0, f.domain().length()))
    throw DomainError("smallest step falls inside the diagonal band");
  std::vector<double> T;
  for (int i = 0; i < levels; ++i) T.push_back(6.0 * liouville_cocycle(f, x, x + std::ldexp(h0, -i)));
  for (int j = 1; j < levels; ++j) {
    const double r = std::ldexp(1.0, j);
    for (int i = levels - 1; i >= j; --i) T[i] = (r * T[i] - T[i - 1]) / (r - 1.0);
  }
  return T.back();
}

enum class SupQuantity { D2, D3, affine, schwarzian };
enum class L1Quantity { affine_l1, liouville_l1 };

inline const char* to_string(SupQuantity q) {
  switch (q) {
  case SupQuantity::D2: return "D2";
  case SupQuantity::D3: return "D3";
  case SupQuantity::affine: return "affine";
  default: return "schwarzian";
  }
}
inline const char* to_string(L1Quantity q) { return q == L1Quantity::affine_l1 ? "affine_l1" : "liouville_l1"; }

namespace detail {

struct Bundle {
  double w = 0.0;    // f^-n(y)
  double logd = 0.0; // log D f^n(w)
  double A = 0.0;
  double S = 0.0;

  void step(const MapSpec& f) {
    auto s = f.inverse_step(w, 3);
    w = s.x;
    logd += std::log(s.d[1]);
    A = A * s.d[1] + affine_derivative(s.d);
    S = S * s.d[1] * s.d[1] + schwarzian(s.d);
  }
  double quantity(SupQuantity q) const {
    const double d1 = std::exp(logd);
    switch (q) {
    case SupQuantity::D2: return std::fabs(A * d1);
    case SupQuantity::D3: return std::fabs(d1 * (S + 1.5 * A * A));
    case SupQuantity::affine: return std::fabs(A);
    default: return std::fabs(S);
    }
  }
};

inline Bundle bundle_at(const MapSpec& f, double y, int n) {
  Bundle b{y, 0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) b.step(f);
  return b;
}

inline std::vector<double> whole_map_anchors(const MapSpec& f, const GrowthOptions& o) {
  std::vector<double> ys;
  for (const auto& c : components(f)) {
    auto a = growth_anchors(c.interval, o);
    ys.insert(ys.end(), a.begin(), a.end());
  }
  std::sort(ys.begin(), ys.end());
  return ys;
}

} // namespace detail

struct HigherOptions {
  GrowthOptions grid{1024, 512, 1e-7, 0.1, 1e-9, true};
};

// sup over the domain of the quantity for f^n, n = 1..N
inline Series sup_norm_series(const MapSpec& f, SupQuantity q, int N, const HigherOptions& o = {}) {
  if (N < 1) throw DomainError("series needs N >= 1");
  const auto fps = fixed_points(f);
  const std::vector<double> ys = detail::whole_map_anchors(f, o.grid);
  std::vector<detail::Bundle> bs;
  for (double y : ys) bs.push_back({y, 0.0, 0.0, 0.0});
  // at a parabolic fixed point p: A_n = n a(p), S_n = n s(p), Df^n = 1
  std::vector<Derivs> fixed_d;
  for (const auto& p : fps) fixed_d.push_back(f.derivs(p.location, 3));

  Series out;
  out.quantity = to_string(q);
  const Interval& I = f.domain();
  for (int n = 1; n <= N; ++n) {
    for (auto& b : bs) b.step(f);
    std::size_t best = 0;
    double bv = -1.0;
    for (std::size_t j = 0; j < bs.size(); ++j) {
      const double v = bs[j].quantity(q);
      if (v > bv) {
        bv = v;
        best = j;
      }
    }
    double val = bv;
    if (o.grid.refine) {
      const double lo = best > 0 ? ys[best - 1] : I.lo;
      const double hi = best + 1 < ys.size() ? ys[best + 1] : I.hi;
      if (lo < hi) {
        auto F = [&](double y) { return detail::bundle_at(f, y, n).quantity(q); };
        auto mx = numerics::brent_maximize(F, lo, hi, o.grid.refine_tol * I.length());
        val = std::max(val, mx.value);
      }
    }
    for (const auto& d : fixed_d) {
      detail::Bundle b{0.0, 0.0, n * affine_derivative(d), n * schwarzian(d)};
      val = std::max(val, b.quantity(q));
    }
    out.push(n, val);
  }
  return out;
}

// C' n^3 ||D2f/Df||_inf with C' = (sqrt(C/2) + 1)^2 from the growth envelope
inline double affine_sup_envelope(const MapSpec& f, int n) {
  const auto ps = ps_constant(f);
  const double K = quasiconvex_bound(ps.c, 1);
  return K * std::pow(static_cast<double>(n), 3) * ps.sup_ratio;
}

namespace detail {

// integral over the domain of |A_n(x)| dx = integral of |A_n| / Df^n over y = f^n(x)
inline double affine_l1_at(const MapSpec& f, int n, double rtol) {
  const Interval& I = f.domain();
  auto A = [&](double y) { return bundle_at(f, y, n).A; };
  auto integrand = [&](double y) {
    auto b = bundle_at(f, y, n);
    return std::fabs(b.A) * std::exp(-b.logd);
  };
  std::vector<double> knots{I.lo};
  for (const auto& p : fixed_points(f))
    if (I.contains_interior(p.location)) knots.push_back(p.location);
  knots.push_back(I.hi);
  // split at sign changes of A_n so the integrand is smooth on each piece
  std::vector<double> all;
  const int grid = 256;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double lo = knots[k], hi = knots[k + 1];
    all.push_back(lo);
    double yp = lo + (hi - lo) * 1e-9, vp = A(yp);
    for (int i = 1; i <= grid; ++i) {
      const double y = i == grid ? hi - (hi - lo) * 1e-9 : lo + (hi - lo) * i / grid;
      const double v = A(y);
      if ((v < 0) != (vp < 0) && v != 0.0 && vp != 0.0) {
        auto g = [&](double s) { return std::pair<double, double>{A(s), 0.0}; };
        all.push_back(numerics::newton_bisect(g, yp, y, 0.5 * (yp + y), 1e-14 * I.length()).x);
      }
      yp = y;
      vp = v;
    }
  }
  all.push_back(I.hi);
  return numerics::integrate_pieces(integrand, all, rtol, 1e-15).value;
}

} // namespace detail

struct LiouvilleGrid {
  int points = 512;
  double band = 1e-6; // relative to |L|; closer pairs lose digits to cancellation
};

// ||c(f^n)||_1 = ||c(f^-n)||_1 evaluated by a product midpoint rule in (u, v).
// Nodes are a graded u-grid plus the images f^n(x) of a graded x-grid: the
// latter crowd into the ~1/n^2 window near the attracting side where f^-n
// turns over, which a fixed u-grid cannot see once n is large.
// Near-coincident pairs use the diagonal value S(f^-n)/6.
inline Series liouville_l1_series(const MapSpec& f, int N, const LiouvilleGrid& g = {}) {
  const Interval& I = f.domain();
  GrowthOptions go;
  go.uniform_anchors = g.points / 2;
  go.geometric_anchors = g.points / 4;
  go.geometric_lo = 1e-6;
  const std::vector<double> anchors = detail::whole_map_anchors(f, go);

  struct Node {
    double u, w, logd, S; // u = f^n(w); logd, S of f^n at w
  };
  std::vector<detail::Bundle> back;
  std::vector<Node> fwd;
  for (double a : anchors) {
    back.push_back({a, 0.0, 0.0, 0.0});
    fwd.push_back({a, a, 0.0, 0.0});
  }
  const double band = g.band * I.length();
  Series out;
  out.quantity = "liouville_l1";
  std::vector<Node> nodes;
  std::vector<double> D, wts;
  for (int n = 1; n <= N; ++n) {
    for (auto& b : back) b.step(f);
    for (auto& x : fwd) {
      const auto d = f.derivs(x.u, 3);
      x.S += schwarzian(d) * std::exp(2.0 * x.logd);
      x.logd += std::log(d[1]);
      x.u = d[0];
    }
    nodes.clear();
    for (std::size_t i = 0; i < anchors.size(); ++i) nodes.push_back({anchors[i], back[i].w, back[i].logd, back[i].S});
    for (const auto& x : fwd)
      if (x.u > I.lo && x.u < I.hi) nodes.push_back(x);
    std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.u < b.u; });
    nodes.erase(std::unique(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.u == b.u; }),
                nodes.end());
    const std::size_t m = nodes.size();
    D.resize(m);
    wts.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      D[i] = std::exp(nodes[i].logd);
      const double lo = i == 0 ? I.lo : 0.5 * (nodes[i - 1].u + nodes[i].u);
      const double hi = i + 1 == m ? I.hi : 0.5 * (nodes[i].u + nodes[i + 1].u);
      wts[i] = hi - lo;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      // S(f^-n)(u) = -S(f^n)(x) / Df^n(x)^2
      const double diag = std::fabs(nodes[i].S) / (6.0 * D[i] * D[i]);
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        double v;
        const double du = nodes[i].u - nodes[j].u;
        if (std::fabs(du) < band) {
          v = diag;
        } else {
          const double dx = nodes[i].w - nodes[j].w;
          v = std::fabs(1.0 / (D[i] * D[j] * dx * dx) - 1.0 / (du * du));
        }
        row += v * wts[j];
      }
      total += row * wts[i];
    }
    out.push(n, total);
  }
  return out;
}

inline Series l1_norm_series(const MapSpec& f, L1Quantity q, int N, double rtol = 1e-9) {
  if (N < 1) throw DomainError("series needs N >= 1");
  if (q == L1Quantity::liouville_l1) return liouville_l1_series(f, N);
  Series out;
  out.quantity = "affine_l1";
  for (int n = 1; n <= N; ++n) out.push(n, detail::affine_l1_at(f, n, rtol));
  return out;
}

// pairs (m, n) with m + n <= N where value(m+n) > value(m) + value(n) + tol
inline std::vector<std::pair<int, int>> subadditivity_violations(const Series& s, double tol = 1e-8) {
  std::vector<std::pair<int, int>> bad;
  const int N = static_cast<int>(s.size());
  for (int m = 1; m <= N; ++m)
    for (int n = m; m + n <= N; ++n)
      if (s.value[m + n - 1] > s.value[m - 1] + s.value[n - 1] + tol) bad.emplace_back(m, n);
  return bad;
}

} // namespace parabolic
