#pragma once

// Polynomials kept in factored form c * prod (x - r_i)^m_i. The factored
// form keeps values near the roots accurate (no cancellation) and makes
// orders of vanishing exact.

#include <cmath>
#include <vector>

#include "parabolic/error.hpp"
#include "parabolic/jet.hpp"

namespace parabolic {

struct RootFactor {
  double at = 0.0;
  int multiplicity = 1;
};

class FactoredPolynomial {
public:
  FactoredPolynomial() = default;
  FactoredPolynomial(double coeff, std::vector<RootFactor> roots)
      : coeff_(coeff), roots_(std::move(roots)) {
    for (const auto& r : roots_)
      if (r.multiplicity < 1 || !std::isfinite(r.at))
        throw ConstructionError("root factor needs finite location and multiplicity >= 1");
    if (!std::isfinite(coeff_)) throw ConstructionError("non-finite polynomial coefficient");
  }

  double coeff() const noexcept { return coeff_; }
  const std::vector<RootFactor>& roots() const noexcept { return roots_; }
  bool is_zero() const noexcept { return coeff_ == 0.0; }

  int degree() const noexcept {
    int d = 0;
    for (const auto& r : roots_) d += r.multiplicity;
    return d;
  }

  double operator()(double x) const {
    double v = coeff_;
    for (const auto& r : roots_) {
      const double d = x - r.at;
      for (int i = 0; i < r.multiplicity; ++i) v *= d;
    }
    return v;
  }

  template <int N>
  Jet<N> jet(double x) const {
    Jet<N> acc = Jet<N>::constant(coeff_);
    for (const auto& r : roots_) {
      Jet<N> d = Jet<N>::variable(x - r.at);
      for (int i = 0; i < r.multiplicity; ++i) acc = acc * d;
    }
    return acc;
  }

  // k-th derivative at x for any k (falls back to expanded coefficients past jet order 3)
  double derivative(double x, int k) const {
    if (k < 0) throw DomainError("negative derivative order");
    if (k <= 3) {
      auto j = jet<3>(x);
      return j.derivative(k);
    }
    std::vector<double> c = expanded_about(x);
    if (k >= static_cast<int>(c.size())) return 0.0;
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  // Taylor coefficients about x0 (exact expansion, length degree+1)
  std::vector<double> expanded_about(double x0) const {
    std::vector<double> c{coeff_};
    for (const auto& r : roots_) {
      for (int m = 0; m < r.multiplicity; ++m) {
        // multiply by (h + (x0 - r))
        const double s = x0 - r.at;
        std::vector<double> n(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
          n[i] += c[i] * s;
          n[i + 1] += c[i];
        }
        c = std::move(n);
      }
    }
    return c;
  }

  // order of vanishing at x (exact root match), 0 if not a root
  int multiplicity_at(double x) const noexcept {
    int m = 0;
    for (const auto& r : roots_)
      if (r.at == x) m += r.multiplicity;
    return coeff_ == 0.0 ? 1000 : m;
  }

  // P(x) = lead * (x - x0)^m + ..., returns lead for the exact root x0
  double leading_at_root(double x0) const {
    double v = coeff_;
    for (const auto& r : roots_) {
      if (r.at == x0) continue;
      v *= std::pow(x0 - r.at, r.multiplicity);
    }
    return v;
  }

  // Q(x) = lambda * P((x - mu) / lambda): the displacement of phi o (id + P) o phi^-1
  // for phi(x) = lambda x + mu.
  FactoredPolynomial conjugated(double lambda, double mu) const {
    if (lambda == 0.0) throw DomainError("degenerate affine conjugation");
    std::vector<RootFactor> rs;
    rs.reserve(roots_.size());
    for (const auto& r : roots_) rs.push_back({lambda * r.at + mu, r.multiplicity});
    return FactoredPolynomial(coeff_ * std::pow(lambda, 1 - degree()), std::move(rs));
  }

  FactoredPolynomial scaled(double s) const { return FactoredPolynomial(coeff_ * s, roots_); }

private:
  double coeff_ = 0.0;
  std::vector<RootFactor> roots_;
};

} // namespace parabolic
