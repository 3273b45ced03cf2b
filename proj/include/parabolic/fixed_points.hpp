#pragma once

// Fixed points, tangency orders, components and orientation normalization.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "parabolic/error.hpp"
#include "parabolic/map.hpp"
#include "parabolic/numerics/optimize.hpp"
#include "parabolic/numerics/quadrature.hpp"
#include "parabolic/numerics/regression.hpp"
#include "parabolic/numerics/root_finding.hpp"

namespace parabolic {

enum class SideRole { repelling, contracting };
enum class Direction { pushes_right, pushes_left };

inline const char* to_string(SideRole r) { return r == SideRole::repelling ? "repelling" : "contracting"; }
inline const char* to_string(Direction d) { return d == Direction::pushes_right ? "pushes-right" : "pushes-left"; }

struct FixedPointInfo {
  double location = 0.0;
  std::optional<int> tangency_order; // empty means FLAT
  double leading_coeff = 0.0;        // D^{k+1} f at the point
  std::optional<SideRole> left_side;  // role toward the component on the left
  std::optional<SideRole> right_side; // role toward the component on the right
  bool parabolic = true;
  double fitted_slope = 0.0; // log-log slope of |f - id| near the point
  bool symbolic = false;     // order and coefficient taken from the representation
  bool fit_agrees = true;    // fit and symbolic data agree

  bool flat() const noexcept { return !tangency_order.has_value(); }
};

struct Component {
  Interval interval;
  double repelling_endpoint = 0.0;
  Direction direction = Direction::pushes_right;

  double contracting_endpoint() const {
    return repelling_endpoint == interval.lo ? interval.hi : interval.lo;
  }
};

inline constexpr double kFixedPointResolution = 1e-6; // relative to |domain|

namespace detail {

// slope of log|f(p +- s) - (p +- s)| against log s on s in [1e-6, 1e-2] |I|
inline double tangency_slope(const MapSpec& f, double p, int side) {
  const double L = f.domain().length();
  std::vector<double> xs, ys;
  for (int i = 0; i <= 16; ++i) {
    const double s = L * std::pow(10.0, -6.0 + 4.0 * i / 16.0);
    const double x = p + side * s;
    if (!f.domain().contains_interior(x)) continue;
    const double d = std::fabs(f.displacement(x));
    if (d <= 0.0 || !std::isfinite(d)) continue;
    xs.push_back(std::log(s));
    ys.push_back(std::log(d));
  }
  if (xs.size() < 4) return std::numeric_limits<double>::infinity();
  return numerics::linear_fit(xs, ys).slope;
}

inline std::vector<double> scan_fixed_points(const MapSpec& f, double tol) {
  const Interval& I = f.domain();
  const int grid = 4001;
  std::vector<double> xs(grid), ds(grid);
  for (int i = 0; i < grid; ++i) {
    xs[i] = I.lo + I.length() * i / (grid - 1);
    ds[i] = f.displacement(xs[i]);
  }
  std::vector<double> pts{I.lo, I.hi};
  for (int i = 1; i + 1 < grid; ++i) {
    if (ds[i] == 0.0) {
      pts.push_back(xs[i]);
    } else if ((ds[i] < 0) != (ds[i + 1] < 0) && ds[i + 1] != 0.0) {
      auto g = [&](double x) {
        const double d = f.displacement(x);
        return std::pair<double, double>{d, 0.0};
      };
      pts.push_back(numerics::newton_bisect(g, xs[i], xs[i + 1], 0.5 * (xs[i] + xs[i + 1]), tol).x);
    } else if (std::fabs(ds[i]) <= std::fabs(ds[i - 1]) && std::fabs(ds[i]) <= std::fabs(ds[i + 1])) {
      // touching zero: local minimum of |f - id|
      auto m = numerics::golden_section_maximize([&](double x) { return -std::fabs(f.displacement(x)); },
                                                 xs[i - 1], xs[i + 1], 1e-12 * I.length());
      if (-m.value <= tol) pts.push_back(m.x);
    }
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

} // namespace detail

inline std::vector<FixedPointInfo> fixed_points(const MapSpec& f, double tol = 1e-13) {
  const Interval& I = f.domain();
  std::vector<double> pts;
  bool exact = false;
  if (auto e = f.exact_fixed_points()) {
    pts = *e;
    exact = true;
  } else {
    pts = detail::scan_fixed_points(f, tol);
  }
  // clusters closer than the resolution are ambiguous
  const double res = kFixedPointResolution * I.length();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] - pts[i] < res) {
      std::vector<double> cl{pts[i], pts[i + 1]};
      std::ostringstream os;
      os << "fixed points " << pts[i] << " and " << pts[i + 1] << " closer than the resolution " << res;
      if (!exact) {
        // scanning can report the same touching zero twice
        if (pts[i + 1] - pts[i] < 1e-9 * I.length()) {
          pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i) + 1);
          --i;
          continue;
        }
      }
      throw AmbiguityError(os.str(), cl);
    }
  }

  std::vector<FixedPointInfo> out;
  for (double p : pts) {
    FixedPointInfo fp;
    fp.location = p;
    fp.parabolic = std::fabs(f.derivs(p, 1)[1] - 1.0) <= 1e-9;
    double slope = 0.0;
    int nside = 0;
    for (int side : {-1, 1}) {
      if (!I.contains_interior(p + side * res)) continue;
      const double sl = detail::tangency_slope(f, p, side);
      if (std::isfinite(sl)) {
        slope += sl;
        ++nside;
      } else {
        slope = std::numeric_limits<double>::infinity();
      }
    }
    fp.fitted_slope = nside > 0 ? slope / nside : std::numeric_limits<double>::infinity();
    std::optional<int> fit_order;
    if (std::isfinite(fp.fitted_slope)) {
      const double r = std::round(fp.fitted_slope);
      if (std::fabs(fp.fitted_slope - r) <= 0.1 && r >= 2) fit_order = static_cast<int>(r) - 1;
    }
    const bool fit_flat = !std::isfinite(fp.fitted_slope) || fp.fitted_slope > 12.0;

    if (auto ex = f.exact_tangency(p)) {
      fp.symbolic = true;
      fp.tangency_order = ex->first;
      fp.leading_coeff = ex->second;
      fp.fit_agrees = fit_order && *fit_order == ex->first;
    } else if (fit_order) {
      fp.tangency_order = fit_order;
      const int k = *fit_order;
      double fact = 1.0;
      for (int i = 2; i <= k + 1; ++i) fact *= i;
      // Richardson on (k+1)! * disp(p + s) / s^{k+1}, error linear in s
      const int side = I.contains_interior(p + res) ? 1 : -1;
      auto q = [&](double s) {
        return fact * f.displacement(p + side * s) / std::pow(side * s, k + 1);
      };
      const double s0 = 1e-3 * I.length();
      const double q1 = q(s0), q2 = q(0.5 * s0), q3 = q(0.25 * s0);
      const double r1 = 2 * q2 - q1, r2 = 2 * q3 - q2;
      fp.leading_coeff = (4 * r2 - r1) / 3.0;
    } else if (fit_flat) {
      fp.tangency_order.reset();
      fp.leading_coeff = 0.0;
    } else {
      // between integers and below the flat threshold: keep the nearest order, flag the fit
      fp.tangency_order = std::max(1, static_cast<int>(std::round(fp.fitted_slope)) - 1);
      fp.fit_agrees = false;
    }
    out.push_back(fp);
  }

  // side roles from the sign of f - id inside each gap
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    const double mid = 0.5 * (out[i].location + out[i + 1].location);
    const bool right = f.displacement(mid) > 0;
    out[i].right_side = right ? SideRole::repelling : SideRole::contracting;
    out[i + 1].left_side = right ? SideRole::contracting : SideRole::repelling;
  }
  return out;
}

inline std::vector<Component> components(const MapSpec& f, const std::vector<FixedPointInfo>& fps) {
  std::vector<Component> cs;
  for (std::size_t i = 0; i + 1 < fps.size(); ++i) {
    Component c;
    c.interval = Interval(fps[i].location, fps[i + 1].location);
    const bool right = f.displacement(c.interval.mid()) > 0;
    c.direction = right ? Direction::pushes_right : Direction::pushes_left;
    c.repelling_endpoint = right ? c.interval.lo : c.interval.hi;
    cs.push_back(c);
  }
  return cs;
}

inline std::vector<Component> components(const MapSpec& f) { return components(f, fixed_points(f)); }

// The restriction to a component, reflected when it pushes left, so the
// repelling endpoint always sits on the left.
struct NormalizedComponent {
  MapSpec map;
  Component original;
  bool reflected = false;

  double to_original(double x) const { return reflected ? original.interval.reflect(x) : x; }
  double to_normalized(double x) const { return reflected ? original.interval.reflect(x) : x; }
  const Interval& interval() const { return map.domain(); }
  double repeller() const { return map.domain().lo; }
};

inline MapSpec normalize_orientation(const MapSpec& f, const Component& c) {
  MapSpec g = f.restricted(c.interval);
  if (c.direction == Direction::pushes_left) g = g.reflected();
  return g;
}

inline NormalizedComponent normalized(const MapSpec& f, const Component& c) {
  return {normalize_orientation(f, c), c, c.direction == Direction::pushes_left};
}

// |D2f / Df| integrated over the domain, split at sign changes of D2f
inline double variation_log_df(const MapSpec& f, double rtol = 1e-11) {
  const Interval& I = f.domain();
  const int grid = 1001;
  std::vector<double> knots{I.lo};
  auto d2 = [&](double x) { return f.derivs(x, 2)[2]; };
  double xp = I.lo, vp = d2(xp);
  for (int i = 1; i < grid; ++i) {
    const double x = I.lo + I.length() * i / (grid - 1);
    const double v = d2(x);
    if ((vp < 0) != (v < 0) && vp != 0.0 && v != 0.0) {
      auto g = [&](double s) { return std::pair<double, double>{d2(s), 0.0}; };
      knots.push_back(numerics::newton_bisect(g, xp, x, 0.5 * (xp + x), 1e-15 * I.length()).x);
    }
    xp = x;
    vp = v;
  }
  knots.push_back(I.hi);
  auto integrand = [&](double x) {
    auto d = f.derivs(x, 2);
    return std::fabs(d[2] / d[1]);
  };
  return numerics::integrate_pieces(integrand, knots, rtol, 1e-15).value;
}

} // namespace parabolic
