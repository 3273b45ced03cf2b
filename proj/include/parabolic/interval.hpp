#pragma once

#include <cmath>
#include <string>

#include "parabolic/error.hpp"

namespace parabolic {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  Interval() = default;
  Interval(double l, double h) : lo(l), hi(h) {
    if (!std::isfinite(l) || !std::isfinite(h) || !(l < h))
      throw DomainError("interval needs finite lo < hi, got [" + std::to_string(l) + ", " +
                        std::to_string(h) + "]");
  }

  double length() const noexcept { return hi - lo; }
  double mid() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  bool contains_interior(double x) const noexcept { return x > lo && x < hi; }
  // the orientation-reversing affine involution of the interval
  double reflect(double x) const noexcept { return lo + hi - x; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

} // namespace parabolic
