#pragma once

// Positive per-n series and log-log exponent fits.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "parabolic/error.hpp"
#include "parabolic/numerics/regression.hpp"

namespace parabolic {

struct Series {
  std::string quantity;
  std::vector<int> n;
  std::vector<double> value;

  std::size_t size() const noexcept { return n.size(); }
  void push(int k, double v) {
    n.push_back(k);
    value.push_back(v);
  }
  double at(int k) const {
    for (std::size_t i = 0; i < n.size(); ++i)
      if (n[i] == k) return value[i];
    throw DomainError("series has no entry for n = " + std::to_string(k));
  }
};

struct GrowthExponentFit {
  std::string quantity;
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n_lo = 0;
  int n_hi = 0;
  bool clean_power_law = true; // r^2 >= 0.98
};

// least-squares line through (log n, log value) for n in [n_lo, n_hi]
inline GrowthExponentFit exponent_fit(const std::vector<int>& ns, const std::vector<double>& vals,
                                      int n_lo, int n_hi, std::string quantity = "") {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < n_lo || ns[i] > n_hi) continue;
    if (!(vals[i] > 0.0)) {
      std::ostringstream os;
      os << "non-positive value " << vals[i] << " at n = " << ns[i] << " inside the fit window";
      throw DomainError(os.str());
    }
    x.push_back(std::log(static_cast<double>(ns[i])));
    y.push_back(std::log(vals[i]));
  }
  if (x.size() < 2) throw DomainError("fit window holds fewer than two points");
  auto lf = numerics::linear_fit(x, y);
  GrowthExponentFit f;
  f.quantity = std::move(quantity);
  f.exponent = lf.slope;
  f.intercept = lf.intercept;
  f.r_squared = lf.r_squared;
  f.n_lo = n_lo;
  f.n_hi = n_hi;
  f.clean_power_law = lf.r_squared >= 0.98;
  return f;
}

inline GrowthExponentFit exponent_fit(const Series& s, int n_lo, int n_hi) {
  return exponent_fit(s.n, s.value, n_lo, n_hi, s.quantity);
}
// default window [N/4, N]
inline GrowthExponentFit exponent_fit(const Series& s) {
  if (s.n.empty()) throw DomainError("empty series");
  const int N = s.n.back();
  return exponent_fit(s, std::max(1, N / 4), N);
}

} // namespace parabolic
