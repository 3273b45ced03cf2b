#pragma once

// Interval diffeomorphisms: closed-form families and time-1 maps of fields.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "parabolic/error.hpp"
#include "parabolic/field.hpp"
#include "parabolic/flow.hpp"
#include "parabolic/interval.hpp"
#include "parabolic/numerics/root_finding.hpp"
#include "parabolic/polynomial.hpp"

namespace parabolic {

// f(x) = x + P(x)
struct PolyDisplacement {
  FactoredPolynomial disp;
};
// (a x + b) / (c x + d); a germ, not checked for admissibility
struct MobiusGerm {
  double a = 1, b = 0, c = 0, d = 1;
};
// slope x + offset; a germ
struct AffineGerm {
  double slope = 1, offset = 0;
};
struct FlowTimeOne {
  FieldSpec field;
  double tol = kDefaultFlowTol;
};

// f, Df, D2f, D3f at a point
using Derivs = std::array<double, 4>;

struct StepResult {
  double x = 0.0; // preimage / image
  Derivs d{};     // derivatives of f at the preimage
};

struct IterateResult {
  double x = 0.0;     // end point of the orbit segment
  double log_d = 0.0; // log D f^n at the start of the forward segment
};

inline constexpr double kDefaultInverseTol = 1e-13;

class MapSpec {
public:
  using Kind = std::variant<PolyDisplacement, MobiusGerm, AffineGerm, FlowTimeOne>;

  // validated constructors
  static MapSpec poly_displacement(FactoredPolynomial p, Interval domain, std::string name = "") {
    MapSpec m(PolyDisplacement{std::move(p)}, domain, std::move(name));
    m.validate();
    return m;
  }
  static MapSpec time_one_map(const FieldSpec& X, double tol = kDefaultFlowTol, std::string name = "") {
    const auto prof = X.sign_profile();
    if (prof == SignProfile::mixed)
      throw ConstructionError("time-1 map needs a field of one sign on the domain");
    MapSpec m(FlowTimeOne{X, tol}, X.domain(), std::move(name));
    m.validate();
    return m;
  }
  // germs: no admissibility check, used as local test objects
  static MapSpec mobius_germ(double a, double b, double c, double d, Interval domain) {
    if (a * d - b * c <= 0) throw ConstructionError("Mobius germ must preserve orientation");
    return MapSpec(MobiusGerm{a, b, c, d}, domain, "mobius");
  }
  static MapSpec affine_germ(double slope, double offset, Interval domain) {
    if (slope <= 0) throw ConstructionError("affine germ needs positive slope");
    return MapSpec(AffineGerm{slope, offset}, domain, "affine");
  }
  static MapSpec unchecked(Kind k, Interval domain, std::string name = "") {
    return MapSpec(std::move(k), domain, std::move(name));
  }

  const Kind& kind() const noexcept { return kind_; }
  const Interval& domain() const noexcept { return domain_; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  std::string family() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, PolyDisplacement>) return "poly-displacement";
          else if constexpr (std::is_same_v<T, MobiusGerm>) return "mobius";
          else if constexpr (std::is_same_v<T, AffineGerm>) return "affine";
          else return "flow-time-one";
        },
        kind_);
  }
  bool is_flow() const noexcept { return std::holds_alternative<FlowTimeOne>(kind_); }
  const FieldSpec* generating_field() const {
    auto* f = std::get_if<FlowTimeOne>(&kind_);
    return f ? &f->field : nullptr;
  }
  const FactoredPolynomial* displacement_polynomial() const {
    auto* p = std::get_if<PolyDisplacement>(&kind_);
    return p ? &p->disp : nullptr;
  }

  double eval(double x) const {
    check(x);
    return std::visit([&](const auto& k) { return eval_impl(k, x); }, kind_);
  }
  // f(x) - x without cancellation where the family allows it
  double displacement(double x) const {
    check(x);
    return std::visit(
        [&](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, PolyDisplacement>) return k.disp(x);
          else if constexpr (std::is_same_v<T, FlowTimeOne>) return flow_displacement(k.field, 1.0, x, k.tol);
          else return eval_impl(k, x) - x;
        },
        kind_);
  }

  // f and derivatives up to `order` (<= 3) at x
  Derivs derivs(double x, int order = 3) const {
    check(x);
    if (order < 0 || order > 3) throw UnsupportedError("derivatives available up to order 3");
    return std::visit([&](const auto& k) { return derivs_impl(k, x, order); }, kind_);
  }
  double deriv(double x, int order) const {
    if (order < 1 || order > 3) throw UnsupportedError("deriv order must be 1, 2 or 3");
    return derivs(x, order)[order];
  }
  // D f^n(x) as exp of the log-sum along the forward orbit
  double deriv_iterate(int n, double x) const {
    if (n < 0) throw DomainError("negative iterate");
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      auto d = derivs(x, 1);
      s += std::log(d[1]);
      x = d[0];
    }
    return std::exp(s);
  }

  double inverse(double y, double tol = kDefaultInverseTol) const {
    return inverse_step(y, 0, tol).x;
  }

  // x = f^-1(y) and the derivatives of f at x up to `order`
  StepResult inverse_step(double y, int order = 1, double tol = 0.0) const {
    check(y);
    return std::visit([&](const auto& k) { return inverse_impl(k, y, order, tol); }, kind_);
  }

  // x = f^-n(y) and log D f^n(x)
  IterateResult inverse_iterate(double y, int n) const {
    check(y);
    if (n < 0) throw DomainError("negative iterate count");
    if (const auto* fl = std::get_if<FlowTimeOne>(&kind_)) {
      if (n == 0) return {y, 0.0};
      auto j = flow_jet(fl->field, -static_cast<double>(n), y, 1, fl->tol);
      return {j.x, -std::log(j.d1)};
    }
    IterateResult r{y, 0.0};
    for (int i = 0; i < n; ++i) {
      auto s = inverse_step(r.x, 1);
      r.x = s.x;
      r.log_d += std::log(s.d[1]);
    }
    return r;
  }
  // y = f^n(x) and log D f^n(x)
  IterateResult forward_iterate(double x, int n) const {
    check(x);
    if (n < 0) throw DomainError("negative iterate count");
    if (const auto* fl = std::get_if<FlowTimeOne>(&kind_)) {
      if (n == 0) return {x, 0.0};
      auto j = flow_jet(fl->field, static_cast<double>(n), x, 1, fl->tol);
      return {j.x, std::log(j.d1)};
    }
    IterateResult r{x, 0.0};
    for (int i = 0; i < n; ++i) {
      auto d = derivs(r.x, 1);
      r.log_d += std::log(d[1]);
      r.x = d[0];
    }
    return r;
  }
  double iterate(double x, int n) const {
    if (n >= 0) return forward_iterate(x, n).x;
    return inverse_iterate(x, -n).x;
  }

  // Candidate fixed points known exactly from the representation.
  std::optional<std::vector<double>> exact_fixed_points() const {
    std::vector<double> pts;
    if (const auto* p = displacement_polynomial()) {
      if (p->is_zero()) throw ConstructionError("identity map");
      for (const auto& r : p->roots())
        if (domain_.contains(r.at)) pts.push_back(r.at);
    } else if (const auto* fl = std::get_if<FlowTimeOne>(&kind_)) {
      if (fl->field.offset() != 0.0 || !fl->field.polynomial()) return std::nullopt;
      pts = fl->field.known_zeros();
    } else {
      return std::nullopt;
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }

  // Exact tangency data (k, D^{k+1} f(p)) at an exactly known fixed point.
  std::optional<std::pair<int, double>> exact_tangency(double p) const {
    const FactoredPolynomial* poly = displacement_polynomial();
    double scale = 1.0;
    if (!poly) {
      // f - id = X + X X'/2 + ..., so at a parabolic zero the leading term is that of X
      if (const auto* fl = std::get_if<FlowTimeOne>(&kind_); fl && fl->field.offset() == 0.0) {
        poly = fl->field.polynomial();
        scale = fl->field.scale();
      }
    }
    if (!poly) return std::nullopt;
    const int m = poly->multiplicity_at(p);
    if (m < 1) return std::nullopt;
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    return std::make_pair(m - 1, fact * poly->leading_at_root(p) * scale);
  }

  // same map on a smaller invariant interval
  MapSpec restricted(const Interval& sub) const {
    if (sub.lo < domain_.lo || sub.hi > domain_.hi)
      throw DomainError("restriction outside the domain");
    MapSpec m = *this;
    m.domain_ = sub;
    if (auto* fl = std::get_if<FlowTimeOne>(&m.kind_)) fl->field = fl->field.affine_modified(1.0, 0.0, sub);
    return m;
  }

  // R o f o R with R the reflection of the domain
  MapSpec reflected() const {
    const double s = domain_.lo + domain_.hi;
    Kind k = std::visit(
        [&](const auto& v) -> Kind {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, PolyDisplacement>) {
            return PolyDisplacement{v.disp.conjugated(-1.0, s)};
          } else if constexpr (std::is_same_v<T, MobiusGerm>) {
            return MobiusGerm{v.a - s * v.c, s * (v.c * s + v.d) - v.a * s - v.b, -v.c, v.c * s + v.d};
          } else if constexpr (std::is_same_v<T, AffineGerm>) {
            return AffineGerm{v.slope, s - v.slope * s - v.offset};
          } else {
            return FlowTimeOne{v.field.reflected_about(domain_), v.tol};
          }
        },
        kind_);
    MapSpec m(std::move(k), domain_, name_.empty() ? name_ : name_ + "-reflected");
    return m;
  }

  // g = phi o f o phi^-1 with phi(x) = lambda x + mu, lambda > 0 (poly family)
  MapSpec conjugated_affine(double lambda, double mu) const {
    const auto* p = displacement_polynomial();
    if (!p) throw UnsupportedError("affine conjugation implemented for polynomial displacement maps");
    if (lambda <= 0) throw DomainError("conjugating scale must be positive");
    return poly_displacement(p->conjugated(lambda, mu),
                             Interval(lambda * domain_.lo + mu, lambda * domain_.hi + mu), name_);
  }

  // admissibility: endpoints fixed, Df > 0, fixed points parabolic, not the identity
  void validate(int grid = 10001) const {
    const double lo = domain_.lo, hi = domain_.hi;
    const double tol = 1e-12 * std::max(1.0, domain_.length());
    if (std::fabs(displacement(lo)) > tol || std::fabs(displacement(hi)) > tol)
      throw ConstructionError("endpoints are not fixed");
    bool moved = false;
    for (int i = 0; i < grid; ++i) {
      const double x = lo + domain_.length() * i / (grid - 1);
      const auto d = derivs(x, 1);
      if (!(d[1] > 0.0)) {
        std::ostringstream os;
        os << "Df not positive at x = " << x;
        throw ConstructionError(os.str());
      }
      if (i > 0 && i + 1 < grid && (d[0] < lo || d[0] > hi)) throw ConstructionError("map leaves its domain");
      moved = moved || displacement(x) != 0.0;
    }
    if (!moved) throw ConstructionError("map is the identity (not nontrivial)");
    if (auto pts = exact_fixed_points()) {
      for (double p : *pts) {
        const double d1 = derivs(p, 1)[1];
        if (std::fabs(d1 - 1.0) > 1e-9) {
          std::ostringstream os;
          os << "fixed point " << p << " is not parabolic (Df = " << d1 << ")";
          throw ConstructionError(os.str());
        }
      }
    }
  }

private:
  MapSpec(Kind k, Interval domain, std::string name)
      : kind_(std::move(k)), domain_(domain), name_(std::move(name)) {}

  void check(double x) const {
    // tolerate rounding at the ends
    const double slack = 1e-14 * std::max(1.0, domain_.length());
    if (!(x >= domain_.lo - slack && x <= domain_.hi + slack)) {
      std::ostringstream os;
      os << "x = " << x << " outside [" << domain_.lo << ", " << domain_.hi << "]";
      throw DomainError(os.str());
    }
  }

  static double eval_impl(const PolyDisplacement& k, double x) { return x + k.disp(x); }
  static double eval_impl(const MobiusGerm& k, double x) { return (k.a * x + k.b) / (k.c * x + k.d); }
  static double eval_impl(const AffineGerm& k, double x) { return k.slope * x + k.offset; }
  static double eval_impl(const FlowTimeOne& k, double x) { return flow(k.field, 1.0, x, k.tol); }

  static Derivs derivs_impl(const PolyDisplacement& k, double x, int) {
    auto j = k.disp.jet<3>(x);
    return {x + j.c[0], 1.0 + j.c[1], 2.0 * j.c[2], 6.0 * j.c[3]};
  }
  static Derivs derivs_impl(const MobiusGerm& k, double x, int) {
    const double den = k.c * x + k.d, det = k.a * k.d - k.b * k.c;
    const double d1 = det / (den * den);
    return {(k.a * x + k.b) / den, d1, -2.0 * k.c * d1 / den, 6.0 * k.c * k.c * d1 / (den * den)};
  }
  static Derivs derivs_impl(const AffineGerm& k, double x, int) {
    return {k.slope * x + k.offset, k.slope, 0.0, 0.0};
  }
  static Derivs derivs_impl(const FlowTimeOne& k, double x, int order) {
    auto j = flow_jet(k.field, 1.0, x, std::max(order, 1), k.tol);
    return {j.x, j.d1, j.d2, j.d3};
  }

  StepResult inverse_impl(const PolyDisplacement& k, double y, int order, double tol) const {
    StepResult r;
    if (y <= domain_.lo || y >= domain_.hi) {
      r.x = std::clamp(y, domain_.lo, domain_.hi);
    } else {
      auto g = [&](double x) {
        auto j = k.disp.jet<1>(x);
        return std::pair<double, double>{x + j.c[0] - y, 1.0 + j.c[1]};
      };
      const double guess = y - k.disp(y);
      r.x = numerics::newton_bisect_increasing(g, domain_.lo, domain_.hi, guess, tol).x;
    }
    if (order > 0) r.d = derivs_impl(k, r.x, order);
    else r.d[0] = y;
    return r;
  }
  StepResult inverse_impl(const MobiusGerm& k, double y, int order, double) const {
    StepResult r;
    r.x = (k.d * y - k.b) / (k.a - k.c * y);
    r.d = derivs_impl(k, r.x, order);
    return r;
  }
  StepResult inverse_impl(const AffineGerm& k, double y, int order, double) const {
    StepResult r;
    r.x = (y - k.offset) / k.slope;
    r.d = derivs_impl(k, r.x, order);
    return r;
  }
  StepResult inverse_impl(const FlowTimeOne& k, double y, int order, double) const {
    StepResult r;
    auto j = flow_jet(k.field, -1.0, y, std::max(order, 1), k.tol);
    r.x = j.x;
    // derivatives of g = f^-1 at y converted to those of f at x
    const double g1 = j.d1, g2 = j.d2, g3 = j.d3;
    r.d[0] = y;
    r.d[1] = 1.0 / g1;
    r.d[2] = -g2 / (g1 * g1 * g1);
    r.d[3] = (3.0 * g2 * g2 - g1 * g3) / std::pow(g1, 5);
    return r;
  }

  Kind kind_;
  Interval domain_;
  std::string name_;
};

} // namespace parabolic
