#pragma once

// Vector fields on an interval, from a small builtin catalogue.

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "parabolic/error.hpp"
#include "parabolic/interval.hpp"
#include "parabolic/jet.hpp"
#include "parabolic/polynomial.hpp"

namespace parabolic {

enum class SignProfile { nonnegative, nonpositive, mixed };

inline const char* to_string(SignProfile s) {
  switch (s) {
  case SignProfile::nonnegative: return "nonnegative";
  case SignProfile::nonpositive: return "nonpositive";
  default: return "mixed";
  }
}

struct PolyField {
  FactoredPolynomial poly;
};
// 1/2 (cos(1/x) - 1) exp(-1/x)
struct WatanabeY {};
// -exp(-exp(3/x))
struct WatanabeZ {};
// Y + Z
struct WatanabeX {};

class FieldSpec {
public:
  using Impl = std::variant<PolyField, WatanabeY, WatanabeZ, WatanabeX>;

  FieldSpec(std::string family, Impl impl, Interval domain, double scale = 1.0, double offset = 0.0)
      : family_(std::move(family)), impl_(std::move(impl)), domain_(domain), scale_(scale),
        offset_(offset) {}

  static FieldSpec poly(FactoredPolynomial p, Interval domain) {
    return FieldSpec("poly", PolyField{std::move(p)}, domain);
  }
  // eps (x - center)^2
  static FieldSpec quadratic_local(double eps, double center, Interval domain) {
    if (eps == 0.0) throw ConstructionError("quadratic-local field needs eps != 0");
    return FieldSpec("quadratic-local", PolyField{FactoredPolynomial(eps, {{center, 2}})}, domain);
  }
  static FieldSpec watanabe_y(Interval domain = Interval(0.0, 1.0)) {
    return FieldSpec("watanabe-Y", WatanabeY{}, domain);
  }
  static FieldSpec watanabe_z(Interval domain = Interval(0.0, 1.0)) {
    return FieldSpec("watanabe-Z", WatanabeZ{}, domain);
  }
  static FieldSpec watanabe_x(Interval domain = Interval(0.0, 1.0)) {
    return FieldSpec("watanabe-X", WatanabeX{}, domain);
  }

  // scale * X + offset on a new domain
  FieldSpec affine_modified(double scale, double offset, Interval domain) const {
    FieldSpec f = *this;
    f.scale_ *= scale;
    f.offset_ = f.offset_ * scale + offset;
    f.domain_ = domain;
    return f;
  }

  const std::string& family() const noexcept { return family_; }
  const Interval& domain() const noexcept { return domain_; }
  const Impl& impl() const noexcept { return impl_; }
  double scale() const noexcept { return scale_; }
  double offset() const noexcept { return offset_; }
  const FactoredPolynomial* polynomial() const {
    auto* p = std::get_if<PolyField>(&impl_);
    return p ? &p->poly : nullptr;
  }

  template <int K>
  Jet<K> jet(double x) const {
    Jet<K> j = std::visit([&](const auto& f) { return base_jet<K>(f, x); }, impl_);
    if (scale_ != 1.0) j *= scale_;
    j.c[0] += offset_;
    return j;
  }
  double operator()(double x) const { return jet<0>(x).c[0]; }
  // k-th derivative, k <= 3
  double derivative(double x, int k) const {
    if (k < 0 || k > 3) throw UnsupportedError("field derivatives available up to order 3");
    return jet<3>(x).derivative(k);
  }

  // reflected field x -> -X(s - x) with s = lo + hi of `about`; poly family only
  FieldSpec reflected() const { return reflected_about(domain_); }
  FieldSpec reflected_about(const Interval& about) const {
    const auto* p = polynomial();
    if (!p) throw UnsupportedError("reflection only available for polynomial fields");
    // -P(s - x) = -(-1)^deg c prod (x - (s - r))^m
    const double s = about.lo + about.hi;
    std::vector<RootFactor> rs;
    for (const auto& r : p->roots()) rs.push_back({s - r.at, r.multiplicity});
    const double sgn = (p->degree() % 2 == 0) ? -1.0 : 1.0;
    FieldSpec f("poly", PolyField{FactoredPolynomial(sgn * p->coeff(), rs)}, about, scale_, -offset_);
    return f;
  }

  // zeros in the domain (poly only: exact roots; others: none claimed)
  std::vector<double> known_zeros() const {
    std::vector<double> z;
    if (const auto* p = polynomial(); p && offset_ == 0.0)
      for (const auto& r : p->roots())
        if (domain_.contains(r.at)) z.push_back(r.at);
    return z;
  }

  SignProfile sign_profile(int grid = 4001) const {
    bool pos = false, neg = false;
    for (int i = 0; i < grid; ++i) {
      const double x = domain_.lo + domain_.length() * i / (grid - 1);
      const double v = (*this)(x);
      pos = pos || v > 0;
      neg = neg || v < 0;
    }
    if (pos && neg) return SignProfile::mixed;
    return neg ? SignProfile::nonpositive : SignProfile::nonnegative;
  }

private:
  template <int K>
  static Jet<K> base_jet(const PolyField& f, double x) {
    return f.poly.template jet<K>(x);
  }
  template <int K>
  static Jet<K> base_jet(const WatanabeY&, double x) {
    // exp(-1/x) underflows below this, together with all derivatives
    if (x <= 1.0 / 740.0) return Jet<K>{};
    Jet<K> u = Jet<K>::constant(1.0) / Jet<K>::variable(x);
    // (cos u - 1) / 2 = -sin^2(u/2), no cancellation near the zeros u = 2 pi k
    Jet<K> s = sin(0.5 * u);
    return -(s * s) * exp(-u);
  }
  template <int K>
  static Jet<K> base_jet(const WatanabeZ&, double x) {
    if (x <= 3.0 / std::log(800.0)) return Jet<K>{};
    Jet<K> u = 3.0 * (Jet<K>::constant(1.0) / Jet<K>::variable(x));
    return -exp(-exp(u));
  }
  template <int K>
  static Jet<K> base_jet(const WatanabeX&, double x) {
    return base_jet<K>(WatanabeY{}, x) + base_jet<K>(WatanabeZ{}, x);
  }

  std::string family_;
  Impl impl_;
  Interval domain_;
  double scale_ = 1.0;
  double offset_ = 0.0;
};

} // namespace parabolic
