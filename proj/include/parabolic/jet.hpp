#pragma once

// Truncated Taylor arithmetic. Jet<N> holds the coefficients c_0..c_N of
// g(x0 + h) = sum c_k h^k, so the k-th derivative is k! * c_k.

#include <array>
#include <cmath>

namespace parabolic {

template <int N>
struct Jet {
  static_assert(N >= 0);
  std::array<double, N + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double x0) {
    Jet j;
    j.c[0] = x0;
    if constexpr (N >= 1) j.c[1] = 1.0;
    return j;
  }

  double value() const { return c[0]; }
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  Jet operator-() const {
    Jet r;
    for (int i = 0; i <= N; ++i) r.c[i] = -c[i];
    return r;
  }
  Jet& operator+=(const Jet& o) {
    for (int i = 0; i <= N; ++i) c[i] += o.c[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i <= N; ++i) c[i] -= o.c[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  Jet& operator+=(double s) {
    c[0] += s;
    return *this;
  }
};

template <int N> Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <int N> Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <int N> Jet<N> operator+(Jet<N> a, double s) { return a += s; }
template <int N> Jet<N> operator+(double s, Jet<N> a) { return a += s; }
template <int N> Jet<N> operator-(Jet<N> a, double s) { return a += -s; }
template <int N> Jet<N> operator-(double s, const Jet<N>& a) { return (-a) += s; }
template <int N> Jet<N> operator*(Jet<N> a, double s) { return a *= s; }
template <int N> Jet<N> operator*(double s, Jet<N> a) { return a *= s; }

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  for (int k = 0; k <= N; ++k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
    r.c[k] = s;
  }
  return r;
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> q;
  for (int k = 0; k <= N; ++k) {
    double s = a.c[k];
    for (int i = 1; i <= k; ++i) s -= b.c[i] * q.c[k - i];
    q.c[k] = s / b.c[0];
  }
  return q;
}

template <int N> Jet<N> operator/(Jet<N> a, double s) { return a *= (1.0 / s); }

template <int N>
Jet<N> pow(const Jet<N>& a, int m) {
  Jet<N> r = Jet<N>::constant(1.0);
  for (int i = 0; i < m; ++i) r = r * a;
  return r;
}

template <int N>
Jet<N> exp(const Jet<N>& a) {
  Jet<N> e;
  e.c[0] = std::exp(a.c[0]);
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += i * a.c[i] * e.c[k - i];
    e.c[k] = s / k;
  }
  return e;
}

template <int N>
Jet<N> log(const Jet<N>& a) {
  Jet<N> l;
  l.c[0] = std::log(a.c[0]);
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int i = 1; i < k; ++i) s += i * l.c[i] * a.c[k - i];
    l.c[k] = (a.c[k] - s / k) / a.c[0];
  }
  return l;
}

template <int N>
void sincos(const Jet<N>& a, Jet<N>& s, Jet<N>& co) {
  s.c[0] = std::sin(a.c[0]);
  co.c[0] = std::cos(a.c[0]);
  for (int k = 1; k <= N; ++k) {
    double ss = 0.0, cc = 0.0;
    for (int i = 1; i <= k; ++i) {
      ss += i * a.c[i] * co.c[k - i];
      cc += i * a.c[i] * s.c[k - i];
    }
    s.c[k] = ss / k;
    co.c[k] = -cc / k;
  }
}

template <int N> Jet<N> sin(const Jet<N>& a) { Jet<N> s, c; sincos(a, s, c); return s; }
template <int N> Jet<N> cos(const Jet<N>& a) { Jet<N> s, c; sincos(a, s, c); return c; }

} // namespace parabolic
