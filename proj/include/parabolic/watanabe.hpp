#pragma once

// The flat-contracting counterexample: fields Y, Z, X = Y + Z near 0, the
// constant M, the parameters (a_k, b_k, eps_k, u_k, c_k) and the inequality
// chain checked in LogNumber arithmetic, plus a directly integrable
// small-scale analogue.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "parabolic/error.hpp"
#include "parabolic/field.hpp"
#include "parabolic/flow.hpp"
#include "parabolic/lognumber.hpp"
#include "parabolic/numerics/quadrature.hpp"
#include "parabolic/numerics/root_finding.hpp"

namespace parabolic::watanabe {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---- fields ----

inline double y_native(double x) {
  if (x <= 0.0) return 0.0;
  const double s = std::sin(0.5 / x);
  return -s * s * std::exp(-1.0 / x);
}

inline LogNumber y_log(double x) {
  if (x <= 0.0) return LogNumber::zero();
  const double s = std::sin(0.5 / x);
  if (s == 0.0) return LogNumber::zero();
  return LogNumber::from_log(-1, 2.0 * std::log(std::fabs(s)) - 1.0 / x);
}

// -exp(-exp(3/x)) as a level-1 number
inline LogNumber z_log(double x) {
  if (x <= 0.0) return LogNumber::zero();
  return LogNumber::nested(-1, 1, 3.0 / x, {-1, 1});
}

struct FieldValues {
  LogNumber Y;
  std::optional<double> y_native; // for x >= 0.01
  LogNumber Z;
  LogNumber X;
  double absorbed_log_ratio = 0.0; // log(|small|/|big|) when a term was dropped
};

inline FieldValues fields_YZX(double x) {
  FieldValues v;
  if (x <= 0.0) return v;
  v.Y = y_log(x);
  if (x >= 0.01) v.y_native = y_native(x);
  v.Z = z_log(x);
  v.X = LogNumber::add(v.Y, v.Z, &v.absorbed_log_ratio);
  return v;
}

// D2Y = -u^3 e^{-u} [(2 - u) S + u (cos u - sin u)] / 2, u = 1/x, S = sin u + cos u - 1
inline double d2y(double x) {
  const double u = 1.0 / x;
  const double S = std::sin(u) + std::cos(u) - 1.0;
  return -0.5 * u * u * u * std::exp(-u) * ((2.0 - u) * S + u * (std::cos(u) - std::sin(u)));
}

// ---- eps_k ----

inline double a_k(int k) { return 1.0 / (kTwoPi * k); }
inline double b_k(int k, double M) { return 1.0 / (kTwoPi * k + M); }
inline double delta_k(int k, double M) { return M / (kTwoPi * k * (kTwoPi * k + M)); }

inline double log_abs_eps_k(int k) { return -std::log(2.0) + 4.0 * std::log(kTwoPi * k) - kTwoPi * k; }
inline double eps_k(int k) {
  if (k < 1) throw DomainError("eps_k needs k >= 1");
  return -std::exp(log_abs_eps_k(k));
}

// second difference of Y at a_k with Richardson extrapolation
inline double eps_k_finite_difference(int k) {
  const double a = a_k(k);
  auto D = [&](double h) { return (y_native(a + h) - 2.0 * y_native(a) + y_native(a - h)) / (h * h); };
  double h = 1e-2 * a * a; // the oscillation scale near a is ~ a^2
  double t[4][4];
  for (int i = 0; i < 4; ++i) {
    t[i][0] = D(h);
    for (int j = 1; j <= i; ++j) t[i][j] = t[i][j - 1] + (t[i][j - 1] - t[i - 1][j - 1]) / (std::pow(4.0, j) - 1.0);
    h *= 0.5;
  }
  return t[3][3];
}

// D2Y(x) / eps_k, the quantity sandwiched in [1/2, 2]
inline double sandwich_ratio(double x, int k) {
  const double u = 1.0 / x, w = kTwoPi * k;
  const double S = std::sin(u) + std::cos(u) - 1.0;
  const double bracket = (2.0 - u) * S + u * (std::cos(u) - std::sin(u));
  return (u / w) * (u / w) * (u / w) / w * std::exp(-(u - w)) * bracket;
}

inline bool sandwich_holds(int k, double M, int points = 1000, double* worst = nullptr) {
  const double a = a_k(k), b = b_k(k, M);
  double w = 0.0;
  bool ok = true;
  for (int i = 0; i < points; ++i) {
    const double x = b + (a - b) * i / (points - 1);
    const double r = sandwich_ratio(x, k);
    // distance outside [1/2, 2] in log terms (<= 0 means inside)
    const double out = std::max(std::log(0.5) - std::log(std::max(r, 1e-300)), std::log(std::max(r, 1e-300)) - std::log(2.0));
    w = i == 0 ? out : std::max(w, out);
    if (!(r >= 0.5 && r <= 2.0)) {
      ok = false;
      if (!worst) return false;
    }
  }
  if (worst) *worst = w;
  return ok;
}

// largest M = j * step below 2 pi with the sandwich for all k <= k_max.
// [b_k, a_k] grows with M, so the admissible grid indices form a prefix and
// bisection over j finds the same M as a top-down scan.
inline double find_M(int k_max, double step = 1e-3, int points = 1000) {
  if (k_max < 1) throw DomainError("find_M needs k_max >= 1");
  auto ok = [&](long j) {
    for (int k = 1; k <= k_max; ++k)
      if (!sandwich_holds(k, j * step, points)) return false;
    return true;
  };
  long lo = 0, hi = static_cast<long>(std::floor(kTwoPi / step));
  while (!(hi * step < kTwoPi)) --hi;
  if (ok(hi)) return hi * step;
  if (!ok(1)) throw ConstructionError("no M in (0, 2 pi) satisfies the second-derivative sandwich");
  lo = 1;
  while (hi - lo > 1) {
    const long mid = (lo + hi) / 2;
    (ok(mid) ? lo : hi) = mid;
  }
  return lo * step;
}

// ---- parameters ----

struct WatanabeParams {
  int k = 1;
  double M = 0.0;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0; // a - b
  double eps = 0.0;
  double log_abs_eps = 0.0;
  double q = 0.0;     // log(4 eps^2 delta^2) = -log log u
  LogNumber log_u;    // 1 / (4 eps^2 delta^2)
  LogNumber u;
  LogNumber a_minus_c;
  LogNumber growth;   // 1 + |eps| u delta
  double c = 0.0;     // rounds to a once a - c drops below an ulp
};

inline WatanabeParams construct_params(int k, double M) {
  if (k < 1) throw DomainError("construction index k must be >= 1");
  if (!(M > 0.0 && M < kTwoPi)) throw DomainError("M must lie in (0, 2 pi)");
  WatanabeParams p;
  p.k = k;
  p.M = M;
  p.a = a_k(k);
  p.b = b_k(k, M);
  p.delta = delta_k(k, M);
  p.log_abs_eps = log_abs_eps_k(k);
  p.eps = -std::exp(p.log_abs_eps);
  p.q = std::log(4.0) + 2.0 * p.log_abs_eps + 2.0 * std::log(p.delta);
  p.log_u = LogNumber::from_log(1, -p.q);
  p.u = LogNumber::exp_of(p.log_u);
  const LogNumber eud = LogNumber::from_log(1, p.log_abs_eps + std::log(p.delta)) * p.u;
  p.growth = LogNumber::from_double(1.0) + eud;
  p.a_minus_c = LogNumber::from_double(p.delta) / p.growth;
  p.c = p.a - p.a_minus_c.to_double();

  if (!(p.eps < 0.0)) throw ConstructionError("eps_k must be negative");
  if (p.u < LogNumber::from_double(1.0)) throw ConstructionError("u_k must be >= 1");
  if (!(p.a_minus_c.sign() > 0 && p.a_minus_c < LogNumber::from_double(p.delta)))
    throw ConstructionError("c_k must lie strictly inside (b_k, a_k)");
  return p;
}

// ---- claims ----

struct ClaimReport {
  std::string id;
  int k_lo = 0;
  int k_hi = 0;
  double M = 0.0;
  LogNumber margin; // worst slack seen, as a ratio >= 1 when favorable
  bool pass = true;
  std::vector<int> failed_k;
  int first_pass_k = 0;
  std::string note;
  LogNumber bound; // claim 3: certified lower bound for the derivative
};

namespace detail {
inline void merge(ClaimReport& into, const ClaimReport& r, bool first) {
  if (first) {
    into.margin = r.margin;
  } else if (r.margin < into.margin) {
    into.margin = r.margin;
  }
  if (!r.pass) {
    into.pass = false;
    into.failed_k.push_back(r.k_lo);
  }
}
// |log(a/b)| <= rel * max(|log a|, 1)
inline bool log_close(const LogNumber& a, const LogNumber& b, double rel) {
  const LogNumber la = a.log_abs(), lb = b.log_abs();
  const LogNumber diff = la - lb;
  const double d = std::fabs(diff.to_double());
  const double s = std::max(1.0, std::fabs(la.to_double()));
  return d <= rel * s;
}
} // namespace detail

// identity 4 eps^2 delta^2 log u = 1 exactly
inline bool claim1_identity(const WatanabeParams& p) {
  const LogNumber four_e2d2 = LogNumber::from_log(1, p.q);
  const LogNumber prod = four_e2d2 * p.log_u;
  return prod.sign() == 1 && prod.level() == 0 && prod.mag() == 0.0;
}

inline ClaimReport claim1_bound(const WatanabeParams& p) {
  ClaimReport r;
  r.id = "claim1";
  r.k_lo = r.k_hi = p.k;
  r.M = p.M;
  const LogNumber one = LogNumber::from_double(1.0);
  const LogNumber e = LogNumber::from_log(1, p.log_abs_eps);
  const LogNumber d = LogNumber::from_double(p.delta);
  const LogNumber u2 = p.u * p.u;

  // (i) D hbar^u (hbar^-u (b)) = (1 + |eps| u delta)^2 >= eps^2 delta^2 u^2
  const LogNumber lhs18 = p.growth * p.growth;
  const LogNumber rhs18 = e * e * d * d * u2;
  r.margin = lhs18 / rhs18;
  const bool i_ok = lhs18 >= rhs18;

  // (ii) 4 eps^2 delta^2 u^2 = u^2 / log u
  const bool ii_ok = claim1_identity(p) &&
                     detail::log_close(LogNumber::from_log(1, p.q) * u2, u2 / p.log_u, 1e-12);

  // (iii) Ybar(b) / Ytilde(c) = 4 delta^2 / (a - c)^2 against 4 D hbar^u(c) = 4 (1 + |eps| u delta)^2
  const LogNumber four = LogNumber::from_double(4.0);
  const LogNumber ratio = four * d * d / (p.a_minus_c * p.a_minus_c);
  const LogNumber four_dh = four * lhs18;
  const bool iii_ok = ratio >= four_dh || detail::log_close(ratio, four_dh, 1e-12);

  // final: 4 D hbar^u(c) >= u^2 / log u
  const bool fin_ok = four_dh >= u2 / p.log_u || detail::log_close(four_dh, u2 / p.log_u, 1e-12);
  r.pass = i_ok && ii_ok && iii_ok && fin_ok && one <= p.u;
  if (!r.pass) {
    r.failed_k.push_back(p.k);
    r.note = std::string("failed:") + (i_ok ? "" : " (i)") + (ii_ok ? "" : " (ii)") + (iii_ok ? "" : " (iii)") +
             (fin_ok ? "" : " final");
  }
  return r;
}

// Y(c) <= Ytilde(c) = (eps/4)(a-c)^2 <= (eps/4) / u^2 <= (eps/4) exp(-2 exp(4 pi k))
//      <= -exp(-exp(6 pi k)) = Z(a) <= Z(c)
inline ClaimReport claim2_check(const WatanabeParams& p) {
  ClaimReport r;
  r.id = "claim2";
  r.k_lo = r.k_hi = p.k;
  r.M = p.M;
  const double pk = std::numbers::pi * p.k;
  const LogNumber e4 = LogNumber::from_log(-1, p.log_abs_eps - std::log(4.0)); // eps / 4
  const LogNumber amc2 = p.a_minus_c * p.a_minus_c;
  const LogNumber ytilde_c = e4 * amc2;
  const LogNumber inv_u = LogNumber::from_double(1.0) / p.u;
  const LogNumber link2 = e4 / (p.u * p.u);
  // exp(-2 exp(4 pi k)) = level 1, |.| = exp(-exp(log 2 + 4 pi k))
  const LogNumber e_4pik = LogNumber::nested(1, 1, std::log(2.0) + 4.0 * pk, {-1, 1});
  const LogNumber link3 = e4 * e_4pik;
  const LogNumber z_a = z_log(p.a); // 3 / a = 6 pi k
  const LogNumber z_c = z_log(p.c);

  const bool sand = sandwich_holds(p.k, p.M);
  const bool l1 = p.a_minus_c >= inv_u;
  const bool l2 = ytilde_c <= link2;
  const bool l3 = link2 <= link3;
  const bool l4 = link3 <= z_a;
  const bool l5 = z_a <= z_c;
  r.pass = sand && l1 && l2 && l3 && l4 && l5;
  r.margin = ytilde_c / z_a; // >= 1 means |Ytilde(c)| dominates |Z(a)|
  if (!r.pass) {
    r.failed_k.push_back(p.k);
    r.note = std::string("failed:") + (sand ? "" : " sandwich") + (l1 ? "" : " a-c>=1/u") + (l2 ? "" : " link2") +
             (l3 ? "" : " link3") + (l4 ? "" : " link4") + (l5 ? "" : " Z(a)<=Z(c)");
  }
  return r;
}

inline ClaimReport claim3_assemble(const WatanabeParams& p) {
  ClaimReport r;
  r.id = "claim3";
  r.k_lo = r.k_hi = p.k;
  r.M = p.M;
  const auto c1 = claim1_bound(p);
  const auto c2 = claim2_check(p);
  // factor 1/2 absorption: |Z| <= |Y| at b and at c (at c via claim 2)
  const LogNumber yb = y_log(p.b), zb = z_log(p.b);
  const bool at_b = LogNumber::compare_abs(zb, yb) <= 0;
  const bool at_c = c2.pass;
  // D f^t(c) >= Y(b) / (2 Y(c)) >= 2 (1 + |eps| u delta)^2 >= u^2 / (2 log u)
  const LogNumber half = LogNumber::from_double(0.5);
  r.bound = half * p.u * p.u / p.log_u;
  const LogNumber chain = LogNumber::from_double(2.0) * p.growth * p.growth;
  r.margin = chain / r.bound;
  r.pass = c1.pass && c2.pass && at_b && at_c && chain >= r.bound;
  if (!r.pass) {
    r.failed_k.push_back(p.k);
    r.note = std::string("failed:") + (c1.pass ? "" : " claim1") + (c2.pass ? "" : " claim2") +
             (at_b ? "" : " |Z(b)|<=|Y(b)|");
  }
  return r;
}

// log of (T^2 / (2 log T)) / T^tau at log T = l (exponent comparison)
inline double tau_excess(double log_t, double tau) {
  return (2.0 - tau) * log_t - std::log(2.0) - std::log(log_t);
}

struct ClaimSummary {
  ClaimReport sandwich, claim1, claim2, claim3;
};

inline ClaimSummary verify_claims(double M, int k_lo, int k_hi) {
  ClaimSummary s;
  for (auto* rep : {&s.sandwich, &s.claim1, &s.claim2, &s.claim3}) {
    rep->k_lo = k_lo;
    rep->k_hi = k_hi;
    rep->M = M;
  }
  s.sandwich.id = "sandwich";
  s.claim1.id = "claim1";
  s.claim2.id = "claim2";
  s.claim3.id = "claim3";
  bool first = true;
  for (int k = k_lo; k <= k_hi; ++k) {
    const auto p = construct_params(k, M);
    double worst = 0.0;
    ClaimReport sw;
    sw.k_lo = k;
    sw.pass = sandwich_holds(k, M, 1000, &worst);
    sw.margin = LogNumber::from_log(1, -worst);
    detail::merge(s.sandwich, sw, first);
    detail::merge(s.claim1, claim1_bound(p), first);
    auto c2 = claim2_check(p);
    detail::merge(s.claim2, c2, first);
    if (c2.pass && s.claim2.first_pass_k == 0) s.claim2.first_pass_k = k;
    auto c3 = claim3_assemble(p);
    detail::merge(s.claim3, c3, first);
    if (c3.pass && s.claim3.first_pass_k == 0) s.claim3.first_pass_k = k;
    first = false;
  }
  return s;
}

// ---- flatness surrogate ----

struct FlatnessRow {
  int p = 0;
  double x_p = 0.0;  // largest threshold with 2 exp(-1/s) <= s^p on (0, x_p]
  bool pass = true;
  double worst = 0.0; // max over samples of log|X| - p log s (<= 0 passes)
};

inline std::vector<FlatnessRow> flatness_check(int p_max = 10, int samples = 400) {
  std::vector<FlatnessRow> rows;
  for (int p = 1; p <= p_max; ++p) {
    FlatnessRow row;
    row.p = p;
    auto phi = [&](double s) { return std::log(2.0) - 1.0 / s - p * std::log(s); };
    // phi peaks at s = 1/p; if it stays negative on (0, 1] the threshold is 1
    const double peak = std::min(1.0, 1.0 / p);
    if (phi(peak) <= 0.0 && phi(1.0) <= 0.0) {
      row.x_p = 1.0;
    } else {
      auto g = [&](double s) { return std::pair<double, double>{phi(s), 0.0}; };
      row.x_p = numerics::newton_bisect(g, 1e-6, peak, 0.5 * peak, 1e-15).x;
      if (phi(row.x_p) > 0.0) row.x_p = std::nextafter(row.x_p, 0.0);
    }
    row.worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
      const double s = row.x_p * std::pow(1e-4, static_cast<double>(i) / (samples - 1));
      const auto v = fields_YZX(s);
      const double ps = p * std::log(s);
      for (const LogNumber* q : {&v.Y, &v.Z, &v.X}) {
        if (q->is_zero()) continue;
        const double slack = q->log_abs_double() - ps;
        row.worst = std::max(row.worst, slack);
        if (slack > 0.0) row.pass = false;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

// ---- miniature analogue ----

struct MiniatureReport {
  int k = 1;
  double M = 0.0;
  double lambda = 0.0; // Y scaled by lambda so that u is moderate
  double eps = 0.0;    // lambda eps_k
  double zeta = 0.0;   // Z replaced by the constant -zeta
  double a = 0.0, b = 0.0, c = 0.0, a_minus_c = 0.0;
  double u = 0.0, v = 0.0, w = 0.0, t = 0.0;
  double dh_v = 0.0;     // D h^v(c) = Y(b) / Y(c)
  double df_t = 0.0;     // D f^t(c) from the variational equation
  double df_t_ratio = 0.0; // X(b) / X(c)
  double endpoint_error = 0.0; // |f^t(c) - b|
  double bound_t = 0.0;  // t^2 / (2 log t)
  double bound_v = 0.0;  // v^2 / log v
  bool stated_ordering = false; // w <= v <= u
  bool ordering = false;        // u <= v <= w and t <= v, the order the sandwich gives
  bool pass = false;            // D f^t(c) >= t^2 / (2 log t) and D h^v(c) >= v^2 / log v
  // |Y(b)| >= |Ytilde(b)|, |Y(c)| <= |Ybar(c)| and v <= w = 4u give
  // D h^v(c) >= v^2 / (256 log v) and D f^t(c) >= t^2 / (512 log t)
  double weak_bound_t = 0.0;
  double weak_bound_v = 0.0;
  bool weak_pass = false;
};

inline MiniatureReport miniature_analogue(double M, double u_target = 1000.0, int k = 1) {
  MiniatureReport r;
  r.k = k;
  r.M = M;
  r.a = a_k(k);
  r.b = b_k(k, M);
  const double delta = delta_k(k, M);
  const double e = eps_k(k);
  r.lambda = 1.0 / (2.0 * std::fabs(e) * delta * std::sqrt(std::log(u_target)));
  r.eps = r.lambda * e;
  r.u = u_target;
  r.a_minus_c = delta / (1.0 + std::fabs(r.eps) * r.u * delta);
  r.c = r.a - r.a_minus_c;
  r.zeta = 0.25 * std::fabs(0.25 * r.eps) * r.a_minus_c * r.a_minus_c;

  const Interval dom(0.5 * r.b, r.a);
  const FieldSpec Y = FieldSpec::watanabe_y(dom).affine_modified(r.lambda, 0.0, dom);
  const FieldSpec X = FieldSpec::watanabe_y(dom).affine_modified(r.lambda, -r.zeta, dom);

  // Ytilde = (eps/4)(x - a)^2 reaches b from c in closed form
  const double et = 0.25 * std::fabs(r.eps);
  r.w = (1.0 - r.a_minus_c / delta) / (et * r.a_minus_c);
  // 1/Y grows like (x - a)^-2 toward c, so split geometrically toward a
  std::vector<double> knots{r.c};
  for (double g = 2.0 * r.a_minus_c; g < delta; g *= 2.0) knots.push_back(r.a - g);
  knots.push_back(r.b);
  std::reverse(knots.begin(), knots.end());
  auto time_to_b = [&](const FieldSpec& F) {
    return -numerics::integrate_pieces([&](double s) { return 1.0 / F(s); }, knots, 1e-12, 0.0).value;
  };
  r.v = time_to_b(Y);
  r.t = time_to_b(X);
  r.dh_v = Y(r.b) / Y(r.c);
  auto j = flow_jet(X, r.t, r.c, 1, 1e-12);
  r.df_t = j.d1;
  r.endpoint_error = std::fabs(j.x - r.b);
  r.df_t_ratio = X(r.b) / X(r.c);
  r.bound_t = r.t * r.t / (2.0 * std::log(r.t));
  r.bound_v = r.v * r.v / std::log(r.v);
  r.weak_bound_t = r.bound_t / 256.0;
  r.weak_bound_v = r.bound_v / 256.0;
  r.stated_ordering = r.w <= r.v && r.v <= r.u;
  r.ordering = r.u <= r.v && r.v <= r.w && r.t <= r.v;
  r.pass = r.df_t >= r.bound_t && r.dh_v >= r.bound_v;
  r.weak_pass = r.ordering && r.df_t >= r.weak_bound_t && r.dh_v >= r.weak_bound_v;
  return r;
}

} // namespace parabolic::watanabe
