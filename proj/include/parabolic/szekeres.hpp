#pragma once

// Reconstruction of the generating (Szekeres) field of a component by
// transporting the near-repeller approximation X ~ D - D D'/2 (D = f - id)
// along backward orbits: X(x) = D f^m(z) X(z) with z = f^-m(x).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "parabolic/error.hpp"
#include "parabolic/fixed_points.hpp"
#include "parabolic/map.hpp"
#include "parabolic/numerics/optimize.hpp"

namespace parabolic {

struct FieldSample {
  double x = 0.0;
  double value = 0.0;
  int depth = 0;
  bool converged = false;
  double spread = 0.0; // relative change over the last doubling
};

struct SzekeresOptions {
  int start_depth = 8;
  int max_depth = 1 << 14;
  double rtol = 1e-6;
};

namespace detail {

// second-order seed X(z) ~ D(z) - D(z) D'(z) / 2
inline double szekeres_seed(const MapSpec& g, double z) {
  const double d = g.displacement(z);
  const double dp = g.derivs(z, 1)[1] - 1.0;
  return d - 0.5 * d * dp;
}

// g pushes right, x interior
inline FieldSample szekeres_normalized(const MapSpec& g, double x, const SzekeresOptions& o) {
  FieldSample s;
  s.x = x;
  int m = o.start_depth;
  auto it = g.inverse_iterate(x, m);
  double prev = std::exp(it.log_d) * szekeres_seed(g, it.x);
  double z = it.x, logd = it.log_d;
  while (true) {
    if (2 * m > o.max_depth) {
      s.value = prev;
      s.depth = m;
      s.converged = s.spread <= o.rtol && m > o.start_depth;
      return s;
    }
    auto more = g.inverse_iterate(z, m);
    z = more.x;
    logd += more.log_d;
    m *= 2;
    const double cur = std::exp(logd) * szekeres_seed(g, z);
    s.spread = std::fabs(cur - prev) / std::max(std::fabs(cur), std::numeric_limits<double>::min());
    prev = cur;
    if (s.spread <= o.rtol) {
      s.value = cur;
      s.depth = m;
      s.converged = true;
      return s;
    }
  }
}

} // namespace detail

// X at x (original coordinates) for the component c of f.
inline FieldSample szekeres_at(const NormalizedComponent& nc, double x, const SzekeresOptions& o = {}) {
  if (!nc.original.interval.contains_interior(x))
    throw DomainError("Szekeres sample must lie inside the component");
  auto s = detail::szekeres_normalized(nc.map, nc.to_normalized(x), o);
  s.x = x;
  if (nc.reflected) s.value = -s.value;
  return s;
}
inline FieldSample szekeres_at(const MapSpec& f, const Component& c, double x, const SzekeresOptions& o = {}) {
  return szekeres_at(normalized(f, c), x, o);
}

struct FieldMax {
  double max_abs = 0.0;
  double location = 0.0;
  bool converged = true;
};

inline FieldMax field_max(const NormalizedComponent& nc, const SzekeresOptions& o = {}, int grid = 129) {
  const Interval& I = nc.interval();
  bool conv = true;
  auto absx = [&](double y) {
    auto s = detail::szekeres_normalized(nc.map, y, o);
    conv = conv && s.converged;
    return std::fabs(s.value);
  };
  std::vector<double> ys(static_cast<std::size_t>(grid)), vs(ys.size());
  std::size_t best = 0;
  for (int i = 0; i < grid; ++i) {
    ys[i] = I.lo + I.length() * (i + 1) / (grid + 1);
    vs[i] = absx(ys[i]);
    if (vs[i] > vs[best]) best = static_cast<std::size_t>(i);
  }
  conv = true; // only the refinement neighborhood counts
  const double lo = best > 0 ? ys[best - 1] : I.lo + 1e-9 * I.length();
  const double hi = best + 1 < ys.size() ? ys[best + 1] : I.hi - 1e-9 * I.length();
  absx(ys[best]);
  auto mx = numerics::brent_maximize(absx, lo, hi, 1e-9 * I.length());
  FieldMax r;
  if (mx.value >= vs[best]) {
    r.max_abs = mx.value;
    r.location = nc.to_original(mx.x);
  } else {
    r.max_abs = vs[best];
    r.location = nc.to_original(ys[best]);
  }
  r.converged = conv;
  return r;
}
inline FieldMax field_max(const MapSpec& f, const Component& c, const SzekeresOptions& o = {}) {
  return field_max(normalized(f, c), o);
}

// ---- repeller data ----

struct RepellerData {
  std::optional<int> order; // empty: FLAT
  double leading = 0.0;     // D^{k+1} f at the repeller of the normalized map (> 0)
  bool quality_flag = false; // symbolic and numerical values disagree by > 5%
};

inline RepellerData repeller_data(const NormalizedComponent& nc) {
  const MapSpec& g = nc.map;
  const double r = g.domain().lo;
  RepellerData d;
  auto fps = fixed_points(g);
  const auto& fp = fps.front();
  d.order = fp.tangency_order;
  d.leading = fp.leading_coeff;
  if (!fp.fit_agrees) d.quality_flag = true;
  if (d.order && *d.order <= 2) {
    const double num = g.derivs(r, *d.order + 1)[*d.order + 1];
    if (std::fabs(num - d.leading) > 0.05 * std::fabs(d.leading)) d.quality_flag = true;
  }
  return d;
}

// ---- orbit asymptotics ----

struct OrbitAsymptotic {
  std::vector<double> sequence; // n^{1/k} (f^-n(y) - r), n = 1..N (distance from r)
  double limit_est = 0.0;       // mean over [N/2, N]
  double last = 0.0;
  double theoretical = 0.0;     // ((k+1)(k-1)! / D^{k+1} f(r))^{1/k}
  int order = 0;
};

inline OrbitAsymptotic orbit_asymptotic(const MapSpec& f, const Component& c, double y, int N) {
  auto nc = normalized(f, c);
  if (!c.interval.contains_interior(y)) throw DomainError("orbit base point must be inside the component");
  auto rd = repeller_data(nc);
  if (!rd.order) throw UnsupportedError("orbit asymptotics undefined at a flat repeller");
  const int k = *rd.order;
  OrbitAsymptotic out;
  out.order = k;
  double fact = 1.0;
  for (int i = 2; i <= k - 1; ++i) fact *= i;
  out.theoretical = std::pow((k + 1) * fact / rd.leading, 1.0 / k);
  const double r = nc.repeller();
  double z = nc.to_normalized(y);
  for (int n = 1; n <= N; ++n) {
    z = nc.map.inverse_step(z, 0).x;
    out.sequence.push_back(std::pow(static_cast<double>(n), 1.0 / k) * (z - r));
  }
  double sum = 0.0;
  int cnt = 0;
  for (int n = N / 2; n <= N; ++n) {
    if (n < 1) continue;
    sum += out.sequence[static_cast<std::size_t>(n - 1)];
    ++cnt;
  }
  out.limit_est = sum / cnt;
  out.last = out.sequence.back();
  return out;
}

// ---- right-hand sides ----

struct LimitTerm {
  Component component;
  double repeller = 0.0;
  std::optional<int> order;
  double d2f = 0.0; // D2f at the repeller, normalized orientation (>= 0)
  double max_abs_field = 0.0;
  double field_argmax = 0.0;
  double product = 0.0;
  bool converged = true;
  bool quality_flag = false;
};

struct LimitFormula {
  std::vector<LimitTerm> terms;
  double overall = 0.0;
  bool converged = true;
};

inline LimitFormula main_limit_rhs(const MapSpec& f, const SzekeresOptions& o = {}) {
  LimitFormula L;
  for (const auto& c : components(f)) {
    auto nc = normalized(f, c);
    auto rd = repeller_data(nc);
    LimitTerm t;
    t.component = c;
    t.repeller = c.repelling_endpoint;
    t.order = rd.order;
    t.d2f = (rd.order && *rd.order == 1) ? rd.leading : 0.0;
    auto fm = field_max(nc, o);
    t.max_abs_field = fm.max_abs;
    t.field_argmax = fm.location;
    t.converged = fm.converged;
    t.quality_flag = rd.quality_flag;
    t.product = 0.5 * t.d2f * t.max_abs_field;
    L.converged = L.converged && t.converged;
    L.overall = std::max(L.overall, t.product);
    L.terms.push_back(t);
  }
  return L;
}

// (k^{k+1} D^{k+1}f(r) / (k+1)!)^{1/k} max|X| for a finite-order repeller
// with a non-flat contracting endpoint.
inline double prop_rate_rhs(const MapSpec& f, const Component& c, const SzekeresOptions& o = {}) {
  auto nc = normalized(f, c);
  auto fps = fixed_points(nc.map);
  if (fps.back().flat())
    throw UnsupportedError("contracting endpoint is flat; the order-k rate formula does not apply");
  auto rd = repeller_data(nc);
  if (!rd.order) throw UnsupportedError("flat repeller has no finite tangency order");
  const int k = *rd.order;
  double fact = 1.0;
  for (int i = 2; i <= k + 1; ++i) fact *= i;
  const double base = std::pow(static_cast<double>(k), k + 1) * rd.leading / fact;
  return std::pow(base, 1.0 / k) * field_max(nc, o).max_abs;
}

} // namespace parabolic
