#pragma once

// Gamma^n_+ = sup D f^n, the Polterovich-Sodin envelope and limit extrapolation.
//
// The maximizer x_n of D f^n drifts into the repelling endpoint at rate 1/n
// while its image y_n = f^n(x_n) stays in a compact set. So the search runs
// over image points y: D f^n(f^-n(y)) for all n comes from one backward orbit
// per anchor, and refinement maximizes y -> log D f^n(f^-n(y)).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "parabolic/error.hpp"
#include "parabolic/fixed_points.hpp"
#include "parabolic/map.hpp"
#include "parabolic/numerics/optimize.hpp"
#include "parabolic/numerics/regression.hpp"
#include "parabolic/series.hpp"

namespace parabolic {

struct GrowthRecord {
  int n = 0;
  double gamma = 1.0;
  double argmax_x = 0.0;
  double image_y = 0.0;
  double a_n = 0.0;
  int component = 0;
};

struct GrowthSeries {
  std::string map_id;
  std::vector<GrowthRecord> records; // n = 1..N in order

  int N() const noexcept { return static_cast<int>(records.size()); }
  const GrowthRecord& at(int n) const {
    if (n < 1 || n > N()) throw DomainError("growth series has no record for n = " + std::to_string(n));
    return records[static_cast<std::size_t>(n - 1)];
  }
  // a_0 = 0, a_1, ..., a_N
  std::vector<double> a_sequence() const {
    std::vector<double> a{0.0};
    for (const auto& r : records) a.push_back(r.a_n);
    return a;
  }
  Series gamma_series() const {
    Series s;
    s.quantity = "gamma";
    for (const auto& r : records) s.push(r.n, r.gamma);
    return s;
  }
};

struct GrowthOptions {
  int uniform_anchors = 2048;
  int geometric_anchors = 1024; // toward each endpoint
  double geometric_lo = 1e-7;   // relative to |I|
  double geometric_hi = 0.1;
  double refine_tol = 1e-10;    // abscissa tolerance relative to |I|
  bool refine = true;
};

namespace detail {

inline std::vector<double> growth_anchors(const Interval& I, const GrowthOptions& o) {
  std::vector<double> ys;
  const double L = I.length();
  for (int i = 0; i < o.geometric_anchors; ++i) {
    const double t = o.geometric_anchors == 1 ? 0.0 : static_cast<double>(i) / (o.geometric_anchors - 1);
    const double s = L * o.geometric_lo * std::pow(o.geometric_hi / o.geometric_lo, t);
    ys.push_back(I.lo + s);
    ys.push_back(I.hi - s);
  }
  for (int i = 1; i <= o.uniform_anchors; ++i) ys.push_back(I.lo + L * i / (o.uniform_anchors + 1));
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  ys.erase(std::remove_if(ys.begin(), ys.end(), [&](double y) { return !I.contains_interior(y); }), ys.end());
  return ys;
}

// Per-n maxima for one pushes-right component map g (repeller on the left).
inline std::vector<GrowthRecord> component_growth(const MapSpec& g, const std::vector<int>& wanted,
                                                  const GrowthOptions& o) {
  const Interval& I = g.domain();
  const std::vector<double> ys = growth_anchors(I, o);
  const std::size_t m = ys.size();
  std::vector<double> xs = ys, logs(m, 0.0);
  std::vector<GrowthRecord> out;
  out.reserve(wanted.size());
  int n = 0;
  for (int target : wanted) {
    while (n < target) {
      for (std::size_t j = 0; j < m; ++j) {
        auto s = g.inverse_step(xs[j], 1);
        xs[j] = s.x;
        logs[j] += std::log(s.d[1]);
      }
      ++n;
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < m; ++j)
      if (logs[j] > logs[best]) best = j;
    GrowthRecord r;
    r.n = n;
    r.a_n = logs[best];
    r.image_y = ys[best];
    r.argmax_x = xs[best];
    // the fixed endpoints give D f^n = 1
    if (r.a_n < 0.0) {
      r.a_n = 0.0;
      r.image_y = r.argmax_x = I.lo;
    } else if (o.refine) {
      const double lo = best > 0 ? ys[best - 1] : I.lo;
      const double hi = best + 1 < m ? ys[best + 1] : I.hi;
      auto F = [&](double y) { return g.inverse_iterate(y, n).log_d; };
      auto mx = numerics::brent_maximize(F, lo, hi, o.refine_tol * I.length());
      if (mx.value > r.a_n) {
        r.a_n = mx.value;
        r.image_y = mx.x;
        r.argmax_x = g.inverse_iterate(mx.x, n).x;
      }
    }
    r.gamma = std::exp(r.a_n);
    out.push_back(r);
  }
  return out;
}

inline std::vector<int> range_1_to(int N) {
  std::vector<int> v(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  return v;
}

} // namespace detail

// Series for a single component, in the original coordinates.
inline GrowthSeries growth_series(const MapSpec& f, const Component& c, int N,
                                  const GrowthOptions& o = {}) {
  if (N < 1) throw DomainError("growth series needs N >= 1");
  auto nc = normalized(f, c);
  auto recs = detail::component_growth(nc.map, detail::range_1_to(N), o);
  for (auto& r : recs) {
    r.argmax_x = nc.to_original(r.argmax_x);
    r.image_y = nc.to_original(r.image_y);
  }
  return {f.name(), std::move(recs)};
}

// Whole-map series: per n the max over components.
inline GrowthSeries growth_series(const MapSpec& f, int N, const GrowthOptions& o = {}) {
  if (N < 1) throw DomainError("growth series needs N >= 1");
  const auto comps = components(f);
  GrowthSeries out{f.name(), {}};
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    auto s = growth_series(f, comps[ci], N, o);
    if (out.records.empty()) {
      out.records = std::move(s.records);
      for (auto& r : out.records) r.component = static_cast<int>(ci);
      continue;
    }
    for (int i = 0; i < N; ++i) {
      auto& cur = out.records[static_cast<std::size_t>(i)];
      const auto& cand = s.records[static_cast<std::size_t>(i)];
      if (cand.a_n > cur.a_n) {
        cur = cand;
        cur.component = static_cast<int>(ci);
      }
    }
  }
  return out;
}

inline GrowthRecord gamma_plus(const MapSpec& f, int n, const GrowthOptions& o = {}) {
  if (n < 0) throw DomainError("gamma_plus needs n >= 0");
  if (n == 0) return GrowthRecord{0, 1.0, f.domain().lo, f.domain().lo, 0.0, 0};
  const auto comps = components(f);
  GrowthRecord best;
  best.a_n = -std::numeric_limits<double>::infinity();
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    auto nc = normalized(f, comps[ci]);
    auto r = detail::component_growth(nc.map, {n}, o).front();
    if (r.a_n > best.a_n) {
      best = r;
      best.argmax_x = nc.to_original(r.argmax_x);
      best.image_y = nc.to_original(r.image_y);
      best.component = static_cast<int>(ci);
    }
  }
  return best;
}

// ---- Polterovich-Sodin machinery ----

struct PsConstant {
  double sup_ratio = 0.0; // sup |D2f / Df|
  double length = 0.0;    // |L|
  double c_prime = 0.0;   // |L| sup |D2f/Df|
  double c = 0.0;         // C' exp(C')
  double argsup = 0.0;
};

inline PsConstant ps_constant(const MapSpec& f, const Interval& on, int grid = 20001) {
  auto ratio = [&](double x) {
    auto d = f.derivs(x, 2);
    return std::fabs(d[2] / d[1]);
  };
  double bx = on.lo, bv = -1.0;
  std::vector<double> xs(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    const double x = on.lo + on.length() * i / (grid - 1);
    const double v = ratio(x);
    if (v > bv) {
      bv = v;
      bx = x;
    }
  }
  const double h = on.length() / (grid - 1);
  auto mx = numerics::golden_section_maximize(ratio, std::max(on.lo, bx - h), std::min(on.hi, bx + h),
                                              1e-12 * on.length());
  if (mx.value > bv) {
    bv = mx.value;
    bx = mx.x;
  }
  PsConstant p;
  p.sup_ratio = bv;
  p.length = on.length();
  p.c_prime = p.length * bv;
  p.c = p.c_prime * std::exp(p.c_prime);
  p.argsup = bx;
  return p;
}
inline PsConstant ps_constant(const MapSpec& f) { return ps_constant(f, f.domain()); }

// the largest per-component constant; this is what bounds the whole-map series
inline PsConstant ps_constant_components(const MapSpec& f) {
  PsConstant best;
  best.c = -1.0;
  for (const auto& c : components(f)) {
    auto p = ps_constant(f, c.interval);
    if (p.c > best.c) best = p;
  }
  return best;
}

inline double quasiconvex_bound(double C, int n) {
  if (C < 0) throw DomainError("quasiconvex bound needs C >= 0");
  if (n < 0) throw DomainError("quasiconvex bound needs n >= 0");
  const double s = n * std::sqrt(C / 2.0) + 1.0;
  return s * s;
}

struct Defect {
  int n = 0;
  double defect = 0.0;
};

// defect(n) = 2 a_n - a_{n-1} - a_{n+1} - C exp(-a_n), n = 1 .. len-2
inline std::vector<Defect> quasiconvex_check(const std::vector<double>& seq, double C) {
  if (seq.empty() || seq.front() != 0.0) throw DomainError("quasiconvex check needs seq[0] = 0");
  std::vector<Defect> out;
  for (std::size_t n = 1; n + 1 < seq.size(); ++n)
    out.push_back({static_cast<int>(n), 2 * seq[n] - seq[n - 1] - seq[n + 1] - C * std::exp(-seq[n])});
  return out;
}

inline std::vector<bool> ps_bound_check(const GrowthSeries& s, double C) {
  std::vector<bool> ok{true}; // n = 0
  for (const auto& r : s.records) ok.push_back(r.gamma <= quasiconvex_bound(C, r.n) * (1.0 + 1e-9));
  return ok;
}

// ---- limit extrapolation ----

struct LimitEstimate {
  double limit = 0.0;
  double uncertainty = 0.0;
  bool converged = true;
  double tail_mean = 0.0;   // plain average of gamma/n^rate over [N/2, N]
  double tail_spread = 0.0; // (max - min) / 2 over the same window
  int n_lo = 0;
  int n_hi = 0;
  std::vector<double> fits; // the individual extrapolations
};

// Fits gamma_n / n^rate = L + c1 n^{-1/k} + c2 n^{-2/k} + c3 log(n)/n with
// k = 1/(rate - 1), on [N/2, N] and [N/4, N], with and without the n^{-2/k}
// term. The limit is the full fit on [N/2, N]; the uncertainty is the spread
// of the four fits.
inline LimitEstimate limit_estimate(const GrowthSeries& s, double rate) {
  const int N = s.N();
  if (N < 100) throw DomainError("limit estimate needs a series of length >= 100");
  const double k = rate > 1.0 ? 1.0 / (rate - 1.0) : 1.0;
  auto ratio = [&](int n) { return s.at(n).gamma / std::pow(static_cast<double>(n), rate); };

  LimitEstimate e;
  e.n_lo = N / 2;
  e.n_hi = N;
  double mn = std::numeric_limits<double>::infinity(), mxv = -mn, sum = 0.0;
  for (int n = e.n_lo; n <= N; ++n) {
    const double r = ratio(n);
    mn = std::min(mn, r);
    mxv = std::max(mxv, r);
    sum += r;
  }
  e.tail_mean = sum / (N - e.n_lo + 1);
  e.tail_spread = 0.5 * (mxv - mn);

  auto fit = [&](int lo, bool full) {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int n = lo; n <= N; ++n) {
      const double dn = n;
      std::vector<double> row{1.0, std::pow(dn, -1.0 / k)};
      if (full) row.push_back(std::pow(dn, -2.0 / k));
      row.push_back(std::log(dn) / dn);
      rows.push_back(std::move(row));
      y.push_back(ratio(n));
    }
    return numerics::least_squares(rows, y).front();
  };
  e.fits = {fit(N / 2, true), fit(N / 4, true), fit(N / 2, false), fit(N / 4, false)};
  e.limit = e.fits.front();
  const auto [lo, hi] = std::minmax_element(e.fits.begin(), e.fits.end());
  e.uncertainty = *hi - *lo;
  const double scale = std::max(std::fabs(e.tail_mean), std::fabs(e.limit));
  e.converged = (mxv - mn) <= 0.2 * scale && e.uncertainty <= 0.2 * scale;
  return e;
}

// ---- localization and lower bound ----

struct Localization {
  double A = 0.0;
  double B = 0.0;
  int first_n = 0;
  bool violation = false; // images pile up at an endpoint
};

inline Localization argmax_localization(const GrowthSeries& s, const Interval& I, double margin) {
  if (s.records.empty()) throw DomainError("empty growth series");
  const int N = s.N();
  double A = std::numeric_limits<double>::infinity(), B = -A;
  for (int n = std::max(1, N / 2); n <= N; ++n) {
    A = std::min(A, s.at(n).image_y);
    B = std::max(B, s.at(n).image_y);
  }
  const double pad = margin * I.length();
  Localization L;
  L.first_n = N;
  for (int n = N; n >= 1; --n) {
    const double y = s.at(n).image_y;
    if (y < A - pad || y > B + pad) break;
    L.first_n = n;
  }
  L.A = std::numeric_limits<double>::infinity();
  L.B = -L.A;
  for (int n = L.first_n; n <= N; ++n) {
    L.A = std::min(L.A, s.at(n).image_y);
    L.B = std::max(L.B, s.at(n).image_y);
  }
  L.violation = (L.A - I.lo) < pad || (I.hi - L.B) < pad;
  return L;
}

struct LowerBoundCheck {
  std::vector<double> bound; // index n - 1
  bool all_hold = true;
  int first_failure = 0;
};

// gamma_n >= (A - f^-1(A)) / (f^-n(A) - f^-n-1(A)) on a pushes-right component
inline LowerBoundCheck orbit_gap_lower_bound(const MapSpec& f, const Component& c, const GrowthSeries& s,
                                          double A_rel = 0.5) {
  auto nc = normalized(f, c);
  const Interval& I = nc.interval();
  const double A = I.lo + A_rel * I.length();
  LowerBoundCheck out;
  double z = A;
  double zn = nc.map.inverse_step(z, 0).x;
  const double num = A - zn;
  z = zn;
  for (int n = 1; n <= s.N(); ++n) {
    const double znext = nc.map.inverse_step(z, 0).x;
    const double b = num / (z - znext);
    out.bound.push_back(b);
    if (s.at(n).gamma < b * (1.0 - 1e-9) && out.all_hold) {
      out.all_hold = false;
      out.first_failure = n;
    }
    z = znext;
  }
  return out;
}

} // namespace parabolic
