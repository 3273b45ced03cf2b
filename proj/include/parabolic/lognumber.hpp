#pragma once

// Signed reals stored through up to two nested logarithms.
//
//   level 0: |v| = exp(mag)
//   level 1: |v| = exp(s1 * exp(mag))
//   level 2: |v| = exp(s1 * exp(s2 * exp(mag)))
//
// s1, s2 are the inner signs (inner[0], inner[1]). Arithmetic works by
// peeling one logarithm at a time until both operands are level 0.

#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "parabolic/error.hpp"

namespace parabolic {

class LogNumber {
public:
  static constexpr int kMaxLevel = 2;
  // exp() of a level-0 value collapses back to level 0 below this size
  static constexpr double kCollapse = 700.0;
  // relative log gap beyond which the smaller addend is absorbed
  static constexpr double kAbsorb = 40.0;

  LogNumber() = default;

  static LogNumber zero() { return LogNumber(); }
  static LogNumber from_double(double x) {
    if (!std::isfinite(x)) throw UsageError("LogNumber from non-finite double");
    LogNumber r;
    if (x == 0.0) return r;
    r.sign_ = x > 0 ? 1 : -1;
    r.mag_ = std::log(std::fabs(x));
    return r;
  }
  // sign * exp(log_abs)
  static LogNumber from_log(int sign, double log_abs) {
    LogNumber r;
    if (sign == 0) return r;
    if (!std::isfinite(log_abs)) throw UsageError("LogNumber with non-finite log magnitude");
    r.sign_ = sign > 0 ? 1 : -1;
    r.mag_ = log_abs;
    return r;
  }
  // sign * exp(s1 * exp(mag)) at level 1, or deeper with two inner signs
  static LogNumber nested(int sign, int level, double mag, std::array<int, 2> inner) {
    if (level < 0 || level > kMaxLevel) throw UsageError("LogNumber level out of range");
    if (!std::isfinite(mag)) throw UsageError("LogNumber with non-finite magnitude");
    LogNumber r;
    if (sign == 0) return r;
    r.sign_ = sign > 0 ? 1 : -1;
    r.level_ = level;
    r.mag_ = mag;
    for (int i = 0; i < level; ++i) {
      if (inner[i] == 0) throw UsageError("inner sign must be +1 or -1");
      r.inner_[i] = inner[i] > 0 ? 1 : -1;
    }
    return r;
  }

  int sign() const noexcept { return sign_; }
  int level() const noexcept { return level_; }
  double mag() const noexcept { return mag_; }
  std::array<int, 2> inner_signs() const noexcept { return inner_; }
  bool is_zero() const noexcept { return sign_ == 0; }

  // log|v| as a LogNumber one level shallower
  LogNumber log_abs() const {
    if (sign_ == 0) throw UsageError("log of zero");
    if (level_ == 0) return from_double(mag_);
    LogNumber r;
    r.sign_ = inner_[0];
    r.level_ = level_ - 1;
    r.mag_ = mag_;
    r.inner_ = {inner_[1], 1};
    return r;
  }

  // exp(v), always positive
  static LogNumber exp_of(const LogNumber& v) {
    if (v.sign_ == 0) return from_log(1, 0.0);
    if (v.level_ == 0 && v.mag_ <= std::log(kCollapse)) return from_log(1, v.sign_ * std::exp(v.mag_));
    if (v.level_ > 0) {
      const double d = v.to_double();
      if (std::fabs(d) <= kCollapse) return from_log(1, d);
    }
    if (v.level_ >= kMaxLevel) throw UsageError("LogNumber nesting beyond level 2");
    LogNumber r;
    r.sign_ = 1;
    r.level_ = v.level_ + 1;
    r.mag_ = v.mag_;
    r.inner_ = {v.sign_, v.level_ >= 1 ? v.inner_[0] : 1};
    return r;
  }

  // Native value; underflows to 0 or overflows to +-inf when not representable.
  double to_double() const {
    if (sign_ == 0) return 0.0;
    double l = mag_;
    for (int i = level_ - 1; i >= 0; --i) l = inner_[i] * std::exp(l);
    return sign_ * std::exp(l);
  }
  // log|v| as a double (may be +-inf)
  double log_abs_double() const {
    if (sign_ == 0) return -std::numeric_limits<double>::infinity();
    double l = mag_;
    for (int i = level_ - 1; i >= 0; --i) l = inner_[i] * std::exp(l);
    return l;
  }

  LogNumber operator-() const {
    LogNumber r = *this;
    r.sign_ = -sign_;
    return r;
  }

  // compares |a| with |b|: -1, 0, +1
  static int compare_abs(const LogNumber& a, const LogNumber& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return (a.sign_ != 0) - (b.sign_ != 0);
    if (a.level_ == 0 && b.level_ == 0) return (a.mag_ > b.mag_) - (a.mag_ < b.mag_);
    return compare(a.log_abs(), b.log_abs());
  }
  static int compare(const LogNumber& a, const LogNumber& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
    if (a.sign_ == 0) return 0;
    const int c = compare_abs(a, b);
    return a.sign_ > 0 ? c : -c;
  }

  // sum with dominant-term absorption. absorbed_log_ratio receives
  // log(|small| / |big|) when the smaller term is dropped, else 0.
  static LogNumber add(const LogNumber& a, const LogNumber& b, double* absorbed_log_ratio = nullptr) {
    if (absorbed_log_ratio) *absorbed_log_ratio = 0.0;
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    const bool a_big = compare_abs(a, b) >= 0;
    const LogNumber& big = a_big ? a : b;
    const LogNumber& small = a_big ? b : a;
    if (big.level_ == 0 && small.level_ == 0) {
      const double d = small.mag_ - big.mag_; // <= 0
      if (d < -kAbsorb) {
        if (absorbed_log_ratio) *absorbed_log_ratio = d;
        return big;
      }
      if (big.sign_ == small.sign_) return from_log(big.sign_, big.mag_ + std::log1p(std::exp(d)));
      if (d == 0.0) return zero();
      return from_log(big.sign_, big.mag_ + std::log1p(-std::exp(d)));
    }
    // gap = log|big| - log|small| >= 0
    const LogNumber gap = add(big.log_abs(), -small.log_abs());
    const double g = gap.to_double();
    if (!(g <= kAbsorb)) {
      if (absorbed_log_ratio) *absorbed_log_ratio = std::isfinite(g) ? -g : -std::numeric_limits<double>::infinity();
      return big;
    }
    const double corr = big.sign_ == small.sign_ ? std::log1p(std::exp(-g)) : std::log1p(-std::exp(-g));
    if (!std::isfinite(corr))
      throw UsageError("cancellation below LogNumber resolution");
    LogNumber l = add(big.log_abs(), from_double(corr));
    LogNumber r = exp_of(l);
    r.sign_ = big.sign_;
    return r;
  }

  static LogNumber mul(const LogNumber& a, const LogNumber& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return zero();
    LogNumber r;
    if (a.level_ == 0 && b.level_ == 0) {
      r = from_log(1, a.mag_ + b.mag_);
    } else {
      r = exp_of(add(a.log_abs(), b.log_abs()));
    }
    r.sign_ = a.sign_ * b.sign_;
    return r;
  }
  static LogNumber div(const LogNumber& a, const LogNumber& b) {
    if (b.sign_ == 0) throw UsageError("LogNumber division by zero");
    if (a.sign_ == 0) return zero();
    LogNumber r;
    if (a.level_ == 0 && b.level_ == 0) {
      r = from_log(1, a.mag_ - b.mag_);
    } else {
      r = exp_of(add(a.log_abs(), -b.log_abs()));
    }
    r.sign_ = a.sign_ * b.sign_;
    return r;
  }
  // |a|^p with the sign kept only for integral p
  static LogNumber pow(const LogNumber& a, double p) {
    if (a.sign_ == 0) {
      if (p > 0) return zero();
      throw UsageError("non-positive power of zero");
    }
    LogNumber r = exp_of(mul(from_double(p), a.log_abs()));
    if (a.sign_ < 0) {
      if (std::floor(p) != p) throw UsageError("fractional power of a negative LogNumber");
      if (std::fmod(std::fabs(p), 2.0) == 1.0) r.sign_ = -1;
    }
    return r;
  }
  static LogNumber log(const LogNumber& a) {
    if (a.sign_ <= 0) throw UsageError("log of a non-positive LogNumber");
    return a.log_abs();
  }

  friend LogNumber operator+(const LogNumber& a, const LogNumber& b) { return add(a, b); }
  friend LogNumber operator-(const LogNumber& a, const LogNumber& b) { return add(a, -b); }
  friend LogNumber operator*(const LogNumber& a, const LogNumber& b) { return mul(a, b); }
  friend LogNumber operator/(const LogNumber& a, const LogNumber& b) { return div(a, b); }
  friend bool operator<(const LogNumber& a, const LogNumber& b) { return compare(a, b) < 0; }
  friend bool operator>(const LogNumber& a, const LogNumber& b) { return compare(a, b) > 0; }
  friend bool operator<=(const LogNumber& a, const LogNumber& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const LogNumber& a, const LogNumber& b) { return compare(a, b) >= 0; }
  friend bool operator==(const LogNumber& a, const LogNumber& b) { return compare(a, b) == 0; }

  std::string str() const {
    if (sign_ == 0) return "0";
    std::string s = sign_ > 0 ? "+" : "-";
    std::string body = "exp(" + std::to_string(mag_) + ")";
    for (int i = level_ - 1; i >= 0; --i) body = std::string("exp(") + (inner_[i] < 0 ? "-" : "") + body + ")";
    return s + body;
  }
  friend std::ostream& operator<<(std::ostream& os, const LogNumber& v) { return os << v.str(); }

private:
  int sign_ = 0;
  int level_ = 0;
  double mag_ = 0.0;
  std::array<int, 2> inner_{1, 1};
};

} // namespace parabolic
