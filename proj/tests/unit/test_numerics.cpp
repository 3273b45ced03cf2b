#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "parabolic/jet.hpp"
#include "parabolic/lognumber.hpp"
#include "parabolic/numerics/ode.hpp"
#include "parabolic/numerics/optimize.hpp"
#include "parabolic/numerics/quadrature.hpp"
#include "parabolic/numerics/regression.hpp"
#include "parabolic/numerics/root_finding.hpp"
#include "parabolic/series.hpp"

using namespace parabolic;

TEST(Jet, ProductAndCompositionMatchHandDerivatives) {
  // g(x) = exp(x) * log(1 + x^2) at x = 0.3
  auto x = Jet<3>::variable(0.3);
  auto g = exp(x) * log(1.0 + x * x);
  const double e = std::exp(0.3), L = std::log(1.09);
  const double l1 = 0.6 / 1.09, l2 = (2 - 2 * 0.09) / (1.09 * 1.09);
  EXPECT_NEAR(g.derivative(0), e * L, 1e-15);
  EXPECT_NEAR(g.derivative(1), e * (L + l1), 1e-14);
  EXPECT_NEAR(g.derivative(2), e * (L + 2 * l1 + l2), 1e-13);
}

TEST(Jet, SinCosThirdDerivative) {
  auto x = Jet<3>::variable(0.7);
  EXPECT_NEAR(sin(x).derivative(3), -std::cos(0.7), 1e-14);
  EXPECT_NEAR(cos(x).derivative(3), std::sin(0.7), 1e-14);
}

TEST(LogNumber, RoundTripAndArithmeticAgreeWithDoubles) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mag(-30.0, 30.0);
  std::uniform_int_distribution<int> sgn(0, 1);
  for (int i = 0; i < 2000; ++i) {
    const double a = (sgn(rng) ? 1 : -1) * std::exp(mag(rng));
    const double b = (sgn(rng) ? 1 : -1) * std::exp(mag(rng));
    const auto A = LogNumber::from_double(a), B = LogNumber::from_double(b);
    EXPECT_NEAR(A.to_double() / a, 1.0, 1e-13);
    EXPECT_NEAR((A * B).to_double() / (a * b), 1.0, 1e-12);
    EXPECT_NEAR((A / B).to_double() / (a / b), 1.0, 1e-12);
    const double s = a + b;
    if (std::fabs(s) > 1e-6 * std::max(std::fabs(a), std::fabs(b)))
      EXPECT_NEAR((A + B).to_double() / s, 1.0, 1e-8);
    EXPECT_EQ(A < B, a < b);
  }
}

TEST(LogNumber, NestedLevelsCompareBeyondDoubleRange) {
  // exp(exp(800)) vs exp(exp(799))
  const auto big = LogNumber::nested(1, 1, 800.0, {1, 1});
  const auto less = LogNumber::nested(1, 1, 799.0, {1, 1});
  EXPECT_GT(big, less);
  EXPECT_LT(-big, -less);
  // exp(-exp(800)) is tiny but positive
  const auto tiny = LogNumber::nested(1, 1, 800.0, {-1, 1});
  EXPECT_GT(tiny, LogNumber::zero());
  EXPECT_LT(tiny, LogNumber::from_double(1e-300));
  EXPECT_EQ(LogNumber::log(big).level(), 0);
  EXPECT_GT(LogNumber::log(big), LogNumber::from_double(1e300));
}

TEST(LogNumber, AbsorptionReportsDroppedRatio) {
  const auto big = LogNumber::from_log(1, 500.0);
  const auto small = LogNumber::from_log(1, 100.0);
  double absorbed = 0.0;
  const auto s = LogNumber::add(big, small, &absorbed);
  EXPECT_EQ(s, big);
  EXPECT_NEAR(absorbed, -400.0, 1e-9);
}

TEST(Dop853, LogisticMatchesClosedForm) {
  auto rhs = [](const numerics::State<1>& y, numerics::State<1>& dy) { dy[0] = y[0] * (1 - y[0]); };
  auto o = numerics::OdeOptions<1>::uniform(1e-13, 1e-15);
  for (double t : {0.5, 3.0, -2.0}) {
    const double y = numerics::integrate_dop853<1>(rhs, {0.2}, t, o)[0];
    const double exact = 0.2 * std::exp(t) / (1 - 0.2 + 0.2 * std::exp(t));
    EXPECT_NEAR(y, exact, 1e-12) << t;
  }
}

TEST(Dop853, HarmonicOscillatorTwoDimensional) {
  auto rhs = [](const numerics::State<2>& y, numerics::State<2>& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  auto o = numerics::OdeOptions<2>::uniform(1e-12, 1e-14);
  const auto y = numerics::integrate_dop853<2>(rhs, {1.0, 0.0}, 10.0, o);
  EXPECT_NEAR(y[0], std::cos(10.0), 1e-10);
  EXPECT_NEAR(y[1], -std::sin(10.0), 1e-10);
}

TEST(RootFinding, CubicRootToUlp) {
  auto fdf = [](double x) { return std::pair{x * x * x - 2.0, 3 * x * x}; };
  const auto r = numerics::newton_bisect(fdf, 0.0, 2.0, 1.0, 0.0);
  EXPECT_NEAR(r.x, std::cbrt(2.0), 4e-16);
}

TEST(RootFinding, UnbracketedThrows) {
  auto fdf = [](double x) { return std::pair{x * x + 1.0, 2 * x}; };
  EXPECT_THROW(numerics::newton_bisect(fdf, -1.0, 1.0, 0.0, 1e-12), NumericError);
}

TEST(Optimize, BrentAndGoldenFindInteriorMaximum) {
  auto f = [](double x) { return x * (1 - x) * (1 - 2 * x); };
  const double xs = (3 - std::sqrt(3.0)) / 6;
  EXPECT_NEAR(numerics::brent_maximize(f, 0.0, 0.5, 1e-12).x, xs, 1e-8);
  EXPECT_NEAR(numerics::golden_section_maximize(f, 0.0, 0.5, 1e-12).x, xs, 1e-8);
}

TEST(Quadrature, SmoothAndEndpointSingular) {
  auto r = numerics::integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, std::numbers::e - 1, 1e-13);
  // integrable log singularity at 0 needs knots graded toward it
  std::vector<double> knots{0.0};
  for (int j = 40; j >= 0; --j) knots.push_back(std::ldexp(1.0, -j));
  auto s = numerics::integrate_pieces([](double x) { return std::log(x); }, knots, 1e-10);
  EXPECT_NEAR(s.value, -1.0, 1e-10);
  EXPECT_THROW(numerics::integrate([](double x) { return 1.0 / std::sqrt(x) + std::log(x) * 1e3; }, 0.0, 1.0, 1e-10),
               NumericError);
  auto p = numerics::integrate_pieces([](double x) { return std::fabs(x - 0.3); }, {0.0, 0.3, 1.0});
  EXPECT_NEAR(p.value, 0.045 + 0.245, 1e-14);
}

TEST(Regression, ExactLineAndPowerLawFit) {
  const auto fit = numerics::linear_fit({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(fit.slope, 2.0, 1e-14);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-14);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-14);
  Series s;
  for (int n = 1; n <= 100; ++n) s.push(n, 3.0 * std::pow(n, 1.5));
  const auto e = exponent_fit(s, 25, 100);
  EXPECT_NEAR(e.exponent, 1.5, 1e-12);
  EXPECT_TRUE(e.clean_power_law);
}

TEST(Regression, LeastSquaresRecoversQuadratic) {
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (int i = 0; i < 20; ++i) {
    const double x = 0.1 * i;
    rows.push_back({1.0, x, x * x});
    rhs.push_back(2.0 - x + 0.5 * x * x);
  }
  const auto c = numerics::least_squares(rows, rhs);
  EXPECT_NEAR(c[0], 2.0, 1e-12);
  EXPECT_NEAR(c[1], -1.0, 1e-12);
  EXPECT_NEAR(c[2], 0.5, 1e-12);
}
