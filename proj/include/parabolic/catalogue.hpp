#pragma once

// Named test maps used across the tests, the tool and the configs.

#include <string>
#include <vector>

#include "parabolic/error.hpp"
#include "parabolic/field.hpp"
#include "parabolic/map.hpp"

namespace parabolic::catalogue {

// x^2 (1 - x)^2 on [0, 1]
inline FieldSpec bump_field() {
  return FieldSpec::poly(FactoredPolynomial(1.0, {{0.0, 2}, {1.0, 2}}), Interval(0.0, 1.0));
}

// time-1 map of x^2 (1 - x)^2
inline MapSpec F1(double tol = 1e-12) { return MapSpec::time_one_map(bump_field(), tol, "F1"); }
// x + x^2 (1 - x)^2
inline MapSpec F2() {
  return MapSpec::poly_displacement(FactoredPolynomial(1.0, {{0.0, 2}, {1.0, 2}}), Interval(0, 1), "F2");
}
// x + x^3 (1 - x)^2
inline MapSpec F3() {
  return MapSpec::poly_displacement(FactoredPolynomial(1.0, {{0.0, 3}, {1.0, 2}}), Interval(0, 1), "F3");
}
// x + 4 x^2 (x - 1/2)^2 (1 - x)^2
inline MapSpec F5() {
  return MapSpec::poly_displacement(FactoredPolynomial(4.0, {{0.0, 2}, {0.5, 2}, {1.0, 2}}),
                                    Interval(0, 1), "F5");
}
// x - x^2 (1 - x)^2
inline MapSpec F2_reflected() {
  MapSpec m = F2().reflected();
  m.set_name("F2-reflected");
  return m;
}
inline MapSpec F1_reflected(double tol = 1e-12) {
  MapSpec m = F1(tol).reflected();
  m.set_name("F1-reflected");
  return m;
}

inline std::vector<std::string> ids() { return {"F1", "F2", "F3", "F5", "F2-reflected", "F1-reflected"}; }

inline MapSpec by_id(const std::string& id) {
  if (id == "F1") return F1();
  if (id == "F2") return F2();
  if (id == "F3") return F3();
  if (id == "F5") return F5();
  if (id == "F2-reflected") return F2_reflected();
  if (id == "F1-reflected") return F1_reflected();
  throw DomainError("unknown catalogue map '" + id + "'");
}

} // namespace parabolic::catalogue
