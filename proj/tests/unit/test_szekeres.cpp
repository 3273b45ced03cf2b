#include <cmath>

#include <gtest/gtest.h>

#include "parabolic/catalogue.hpp"
#include "parabolic/szekeres.hpp"

using namespace parabolic;

namespace {

double bump(double x) { return x * x * (1 - x) * (1 - x); }

} // namespace

TEST(Szekeres, RecoversGeneratingFieldOfFlowMap) {
  const auto f = catalogue::F1();
  const auto c = components(f).front();
  const auto nc = normalized(f, c);
  for (double x : {0.05, 0.25, 0.5, 0.8, 0.95}) {
    const auto s = szekeres_at(nc, x);
    EXPECT_TRUE(s.converged) << x;
    EXPECT_NEAR(s.value / bump(x), 1.0, 1e-5) << x;
  }
  EXPECT_NEAR(szekeres_at(nc, 0.5).value, 0.0625, 1e-6);
  EXPECT_NEAR(szekeres_at(nc, 0.25).value, 0.03515625, 1e-6);
}

TEST(Szekeres, CocycleRelation) {
  // X(f(x)) = Df(x) X(x)
  const auto f = catalogue::F2();
  const auto nc = normalized(f, components(f).front());
  for (double x : {0.1, 0.4, 0.7}) {
    const double lhs = szekeres_at(nc, f.eval(x)).value;
    const double rhs = f.deriv(x, 1) * szekeres_at(nc, x).value;
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-6) << x;
  }
}

TEST(Szekeres, ReflectedComponentFlipsSign) {
  const auto f = catalogue::F1_reflected();
  const auto c = components(f).front();
  EXPECT_EQ(c.direction, Direction::pushes_left);
  const auto s = szekeres_at(f, c, 0.3);
  EXPECT_NEAR(s.value, -bump(0.3), 1e-6 * bump(0.3));
}

TEST(Szekeres, SampleOutsideComponentThrows) {
  const auto f = catalogue::F5();
  const auto cs = components(f);
  EXPECT_THROW(szekeres_at(f, cs[0], 0.7), DomainError);
  EXPECT_THROW(szekeres_at(f, cs[0], 0.0), DomainError);
}

TEST(FieldMax, BumpFieldMaximum) {
  const auto f = catalogue::F1();
  const auto m = field_max(f, components(f).front());
  EXPECT_NEAR(m.max_abs, 0.0625, 1e-6);
  EXPECT_NEAR(m.location, 0.5, 1e-3);
}

TEST(LimitRhs, FlowMapValue) {
  // (1/2) D2f(0) max|X| = (1/2)(2)(1/16)
  const auto L = main_limit_rhs(catalogue::F1());
  EXPECT_NEAR(L.overall, 0.0625, 1e-6);
  ASSERT_EQ(L.terms.size(), 1u);
  EXPECT_EQ(L.terms[0].order, 1);
  EXPECT_NEAR(L.terms[0].d2f, 2.0, 1e-6);
}

TEST(LimitRhs, ClosedFormMapValue) {
  // frozen from the pipeline, cross-checked against direct maximization at N = 2000
  const auto L = main_limit_rhs(catalogue::F2());
  EXPECT_NEAR(L.overall, 0.0626626, 2e-6);
  EXPECT_TRUE(L.converged);
}

TEST(LimitRhs, CubicRepellerHasNoQuadraticTerm) {
  const auto L = main_limit_rhs(catalogue::F3());
  ASSERT_EQ(L.terms.size(), 1u);
  EXPECT_EQ(L.terms[0].order, 2);
  EXPECT_DOUBLE_EQ(L.overall, 0.0);
}

TEST(PropRate, CubicRepeller) {
  // (k^{k+1} D3f(0) / 3!)^{1/k} max|X| = sqrt(8) max|X| for k = 2, D3f(0) = 6
  const auto f = catalogue::F3();
  const auto c = components(f).front();
  const double mx = field_max(f, c).max_abs;
  EXPECT_NEAR(prop_rate_rhs(f, c), std::sqrt(8.0) * mx, 1e-12);
}

TEST(Orbit, BackwardOrbitAsymptotics) {
  // scipy brentq backward orbits at n = 10^4: F2 y = 0.5 -> 1.0025248195128253,
  // F3 y = 0.5 -> 0.7177394427207866
  const auto f2 = catalogue::F2();
  const auto o2 = orbit_asymptotic(f2, components(f2).front(), 0.5, 10000);
  EXPECT_NEAR(o2.last, 1.0025248195128253, 1e-9);
  EXPECT_NEAR(o2.theoretical, 1.0, 1e-12);
  const auto f3 = catalogue::F3();
  const auto o3 = orbit_asymptotic(f3, components(f3).front(), 0.5, 10000);
  EXPECT_NEAR(o3.last, 0.7177394427207866, 1e-9);
  EXPECT_NEAR(o3.theoretical, std::sqrt(0.5), 1e-12);
}

TEST(Repeller, DataForFlowMap) {
  const auto f = catalogue::F1();
  const auto rd = repeller_data(normalized(f, components(f).front()));
  EXPECT_EQ(rd.order, 1);
  EXPECT_NEAR(rd.leading, 2.0, 1e-5);
  EXPECT_FALSE(rd.quality_flag);
}
