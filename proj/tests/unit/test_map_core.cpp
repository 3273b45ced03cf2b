#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "parabolic/catalogue.hpp"
#include "parabolic/fixed_points.hpp"
#include "parabolic/map.hpp"

using namespace parabolic;

namespace {

double f2(double x) { return x + x * x * (1 - x) * (1 - x); }

} // namespace

TEST(MapSpec, EvalClosedForm) {
  const auto f = catalogue::F2();
  EXPECT_DOUBLE_EQ(f.eval(0.5), 0.5625);
  EXPECT_DOUBLE_EQ(f.eval(0.0), 0.0);
  EXPECT_DOUBLE_EQ(f.eval(1.0), 1.0);
}

TEST(MapSpec, SymbolicDerivativesAtRepeller) {
  const auto f = catalogue::F2();
  EXPECT_DOUBLE_EQ(f.deriv(0.0, 1), 1.0);
  EXPECT_DOUBLE_EQ(f.deriv(0.0, 2), 2.0);
  EXPECT_DOUBLE_EQ(f.deriv(0.0, 3), -12.0);
}

TEST(MapSpec, DerivativesMatchFiniteDifferences) {
  for (const auto& id : {"F2", "F3", "F5", "F2-reflected"}) {
    const auto f = catalogue::by_id(id);
    auto e = [&](double x) { return f.eval(x); };
    for (double x : {0.13, 0.37, 0.61, 0.88}) {
      EXPECT_NEAR(f.deriv(x, 1), oracle::derivative(e, x, 1e-3), 1e-6 * std::fabs(f.deriv(x, 1))) << id;
      EXPECT_NEAR(f.deriv(x, 2), oracle::second_derivative(e, x, 1e-3), 1e-6 * std::max(1.0, std::fabs(f.deriv(x, 2))))
          << id;
      EXPECT_NEAR(f.deriv(x, 3), oracle::third_derivative(e, x, 2e-3), 1e-5 * std::max(1.0, std::fabs(f.deriv(x, 3))))
          << id;
    }
  }
}

TEST(MapSpec, IterateDerivativeMatchesCentralDifference) {
  const auto f = catalogue::F2();
  auto fn = [](double x) { return oracle::iterate(f2, 50, x); };
  const double fd = (fn(0.1 + 1e-6) - fn(0.1 - 1e-6)) / 2e-6;
  EXPECT_NEAR(f.deriv_iterate(50, 0.1), fd, 1e-4 * fd);
  EXPECT_DOUBLE_EQ(f.deriv_iterate(0, 0.3), 1.0);
}

TEST(MapSpec, InverseRoundTrips) {
  const auto f = catalogue::F2();
  EXPECT_NEAR(f.inverse(0.5625), 0.5, 1e-13);
  for (double y : {1e-9, 1e-4, 0.2, 0.7, 1 - 1e-6}) EXPECT_NEAR(f.eval(f.inverse(y)), y, 1e-15);
  const auto g = catalogue::F2_reflected();
  for (double y : {0.01, 0.4, 0.99}) EXPECT_NEAR(g.eval(g.inverse(y)), y, 1e-15);
}

TEST(MapSpec, OutOfDomainThrows) {
  const auto f = catalogue::F2();
  EXPECT_THROW(f.eval(1.5), DomainError);
  EXPECT_THROW(f.deriv(0.5, 4), UnsupportedError);
  EXPECT_THROW(f.deriv_iterate(-1, 0.5), DomainError);
}

TEST(MapSpec, FlowMapDerivativesMatchFiniteDifferences) {
  const auto f = catalogue::F1();
  auto e = [&](double x) { return f.eval(x); };
  // D2 f(0) = 2 for the time-one map of x^2 (1 - x)^2
  EXPECT_NEAR(f.deriv(0.0, 2), 2.0, 1e-6);
  EXPECT_NEAR(f.deriv(0.3, 1), oracle::derivative(e, 0.3, 1e-3), 1e-8);
}

TEST(FixedPoints, QuadraticTangencyBothEnds) {
  const auto fps = fixed_points(catalogue::F2());
  ASSERT_EQ(fps.size(), 2u);
  EXPECT_DOUBLE_EQ(fps[0].location, 0.0);
  EXPECT_EQ(fps[0].tangency_order, 1);
  EXPECT_NEAR(fps[0].leading_coeff, 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(fps[1].location, 1.0);
  EXPECT_EQ(fps[1].tangency_order, 1);
  for (const auto& p : fps) EXPECT_TRUE(p.parabolic);
}

TEST(FixedPoints, CubicTangency) {
  const auto fps = fixed_points(catalogue::F3());
  ASSERT_EQ(fps.size(), 2u);
  EXPECT_EQ(fps[0].tangency_order, 2);
  EXPECT_NEAR(fps[0].leading_coeff, 6.0, 1e-12);
}

TEST(FixedPoints, FlowMapOrdersFromFit) {
  const auto fps = fixed_points(catalogue::F1());
  ASSERT_EQ(fps.size(), 2u);
  EXPECT_EQ(fps[0].tangency_order, 1);
  EXPECT_EQ(fps[1].tangency_order, 1);
}

TEST(Components, InteriorFixedPointSplits) {
  const auto cs = components(catalogue::F5());
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_DOUBLE_EQ(cs[0].interval.hi, 0.5);
  EXPECT_DOUBLE_EQ(cs[1].interval.lo, 0.5);
  for (const auto& c : cs) EXPECT_EQ(c.direction, Direction::pushes_right);
  EXPECT_DOUBLE_EQ(cs[0].repelling_endpoint, 0.0);
  EXPECT_DOUBLE_EQ(cs[1].repelling_endpoint, 0.5);
}

TEST(Components, ReflectionReversesDirection) {
  const auto cs = components(catalogue::F2_reflected());
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_DOUBLE_EQ(cs[0].repelling_endpoint, 1.0);
  EXPECT_EQ(cs[0].direction, Direction::pushes_left);
  const auto nc = normalized(catalogue::F2_reflected(), cs[0]);
  EXPECT_TRUE(nc.reflected);
  // normalized map pushes right again
  EXPECT_GT(nc.map.eval(0.3), 0.3);
  EXPECT_NEAR(nc.map.eval(0.3), f2(0.3), 1e-15);
}

TEST(Variation, LogDerivativeTotalVariation) {
  // dense-grid oracle, 2e6 cells: 0.7795210136793627
  const double oracle_tv = oracle::grid_variation(
      [](double x) { return std::log(1 + 2 * x * (1 - x) * (1 - 2 * x)); }, 0.0, 1.0, 200000);
  const double v = variation_log_df(catalogue::F2());
  EXPECT_NEAR(v, 0.77952101368, 1e-9);
  EXPECT_NEAR(v, oracle_tv, 1e-6);
}
