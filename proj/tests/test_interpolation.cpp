#include <gtest/gtest.h>

#include <random>

#include "polyccd/interpolation.hpp"
#include "test_support.hpp"

using namespace polyccd;

TEST(Interpolate, QuadraticThroughThreePoints) {
  const std::vector<Sample> s{{0, -1}, {1, 0}, {2, 3}};
  const Polynomial p = interpolate(s, 2);
  EXPECT_NEAR(p[0], -1.0, 1e-12);
  EXPECT_NEAR(p[1], 0.0, 1e-12);
  EXPECT_NEAR(p[2], 1.0, 1e-12);
}

TEST(Interpolate, OversampledDegreeBoundLeavesTrailingZeros) {
  const TimeWindow w(0.0, 2.0);
  std::vector<Sample> s;
  for (double t : chebyshev_nodes(w, 5)) s.push_back({t, t * t - 1.0});
  const Polynomial p = interpolate(s, 4);
  EXPECT_NEAR(p[0], -1.0, 1e-12);
  EXPECT_NEAR(p[1], 0.0, 1e-12);
  EXPECT_NEAR(p[2], 1.0, 1e-12);
  EXPECT_LT(std::abs(p[3]), 1e-9);
  EXPECT_LT(std::abs(p[4]), 1e-9);
}

// Coefficients are compared in the window's normalized variable: in the raw
// t basis on [0, 3] the degree-20 coefficient map has condition ~1e13, so no
// double-precision method recovers them to 1e-7.
TEST(Interpolate, Degree20RoundTripOnZeroThree) {
  std::mt19937_64 rng(17);
  const TimeWindow w(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Polynomial ps = oracle::random_polynomial(rng, 20);
    std::vector<Sample> s;
    for (double t : chebyshev_nodes(w, 21)) s.push_back({t, ps(w.to_unit(t))});
    const Polynomial back = to_unit_variable(interpolate(s, 20), w);
    for (int i = 0; i <= 20; ++i) {
      EXPECT_NEAR(back[static_cast<std::size_t>(i)], ps[static_cast<std::size_t>(i)], 1e-7 * ps.max_abs_coeff());
    }
  }
}

TEST(Interpolate, UnitWindowRoundTripUpToDegree20) {
  std::mt19937_64 rng(19);
  for (int deg = 1; deg <= 20; ++deg) {
    const Polynomial p = oracle::random_polynomial(rng, deg);
    const Polynomial q = interpolate_unit_function([&](double s) { return p(s); }, deg);
    for (int i = 0; i <= deg; ++i) EXPECT_NEAR(q[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(i)], 1e-7);
  }
}

TEST(Interpolate, LooseUnitBoundRecoversTrueDegree) {
  // A degree-12 polynomial sampled at 301 nodes: the surplus terms must not
  // turn into amplified noise.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> c(13);
  for (double& v : c) v = u(rng);
  const Polynomial p(c);
  const Polynomial q = interpolate_unit_function([&](double s) { return p(s); }, 300);
  EXPECT_LE(q.degree_bound(), 12);
  for (double s = -1.0; s <= 1.0; s += 0.01) EXPECT_NEAR(q(s), p(s), 1e-12);
}

TEST(Interpolate, DuplicateTimesRejected) {
  const std::vector<Sample> s{{0, 1}, {1, 2}, {1, 3}};
  try {
    interpolate(s, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateSamples);
  }
}

TEST(Interpolate, NearSingularRejected) {
  std::vector<Sample> s;
  for (int k = 0; k <= 30; ++k) s.push_back({k * 1e-9, 1.0 + k});
  s.back().t = 1.0;
  EXPECT_THROW(interpolate(s, 30), Error);
}

TEST(Interpolate, WrongSampleCountRejected) {
  const std::vector<Sample> s{{0, 1}, {1, 2}};
  EXPECT_THROW(interpolate(s, 2), Error);
}

TEST(FitLeastSquares, ExactCubic) {
  std::vector<Sample> s;
  for (int k = 0; k < 40; ++k) {
    const double t = -1.0 + k * 0.1;
    s.push_back({t, 2 - t + 0.5 * t * t * t});
  }
  EXPECT_LT(fit_least_squares(s, 3).max_abs_error, 1e-10);
}

TEST(FitLeastSquares, SineDegree5) {
  std::vector<Sample> s;
  for (int k = 0; k < 200; ++k) {
    const double t = k / 199.0;
    s.push_back({t, std::sin(t)});
  }
  const auto fit = fit_least_squares(s, 5);
  double worst = 0.0;
  for (int k = 0; k <= 10000; ++k) {
    const double t = k / 10000.0;
    worst = std::max(worst, std::abs(fit.poly(t) - std::sin(t)));
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(FitLeastSquares, ConstantDegreeZero) {
  const std::vector<Sample> s{{0, 4}, {1, 4}, {2, 4}};
  const auto fit = fit_least_squares(s, 0);
  EXPECT_EQ(fit.poly, (Polynomial{4.0}));
  EXPECT_EQ(fit.max_abs_error, 0.0);
}

TEST(FitLeastSquares, RankDeficientRejected) {
  const std::vector<Sample> s{{1, 0}, {1, 1}, {1, 2}, {1, 3}};
  try {
    fit_least_squares(s, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
  }
  const std::vector<Sample> two{{0, 0}, {0, 1}, {1, 2}, {1, 3}};
  EXPECT_THROW(fit_least_squares(two, 2), Error);
}
