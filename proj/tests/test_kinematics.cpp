#include <gtest/gtest.h>

#include <random>

#include "polyccd/kinematics.hpp"

using namespace polyccd;

namespace {

/// Minimizes the snap integral over degree-7 coefficients subject to the six
/// boundary constraints by solving the KKT system directly.
Eigen::Matrix<double, 8, 1> kkt_min_snap(double T, const std::array<double, 3>& s0, const std::array<double, 3>& s1) {
  Eigen::Matrix<double, 8, 8> h = Eigen::Matrix<double, 8, 8>::Zero();
  auto falling = [](int k, int r) {
    double f = 1.0;
    for (int j = 0; j < r; ++j) f *= k - j;
    return f;
  };
  for (int i = 4; i < 8; ++i) {
    for (int j = 4; j < 8; ++j) {
      const int e = i + j - 7;
      h(i, j) = falling(i, 4) * falling(j, 4) * std::pow(T, e) / e;
    }
  }
  Eigen::Matrix<double, 6, 8> a = Eigen::Matrix<double, 6, 8>::Zero();
  for (int r = 0; r < 3; ++r) {
    for (int k = r; k < 8; ++k) {
      a(r, k) = k == r ? falling(k, r) : 0.0;
      a(3 + r, k) = falling(k, r) * std::pow(T, k - r);
    }
  }
  Eigen::Matrix<double, 14, 14> kkt = Eigen::Matrix<double, 14, 14>::Zero();
  kkt.topLeftCorner<8, 8>() = 2.0 * h;
  kkt.topRightCorner<8, 6>() = a.transpose();
  kkt.bottomLeftCorner<6, 8>() = a;
  Eigen::Matrix<double, 14, 1> rhs = Eigen::Matrix<double, 14, 1>::Zero();
  for (int r = 0; r < 3; ++r) {
    rhs(8 + r) = s0[static_cast<std::size_t>(r)];
    rhs(11 + r) = s1[static_cast<std::size_t>(r)];
  }
  const Eigen::Matrix<double, 14, 1> sol = kkt.fullPivLu().solve(rhs);
  return sol.head<8>();
}

double snap_cost(const Polynomial& p, const TimeWindow& w) {
  const Polynomial s = p.derivative(4);
  const Polynomial s2 = s * s;
  // Exact integral of the squared snap polynomial.
  double acc = 0.0;
  for (int k = 0; k <= s2.degree_bound(); ++k) {
    acc += s2[static_cast<std::size_t>(k)] * (std::pow(w.end(), k + 1) - std::pow(w.start(), k + 1)) / (k + 1);
  }
  return acc;
}

}  // namespace

TEST(RotationMatrix, ZeroAnglesIdentity) { EXPECT_TRUE(rotation_matrix(0, 0, 0).isApprox(Mat3::Identity())); }

TEST(RotationMatrix, YawQuarterTurn) {
  Mat3 want;
  want << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_LT((rotation_matrix(0, 0, std::numbers::pi / 2) - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RotationMatrix, Orthonormal) {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const Mat3 r = rotation_matrix(u(rng), u(rng) / 2, u(rng));
    EXPECT_LT((r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
  }
}

TEST(MinSnap, RestToRestSamePointIsConstant) {
  FlatState s{Vec3(1, 2, 3), Vec3::Zero(), Vec3::Zero()};
  const auto p = min_snap_segment(s, s, TimeWindow(0, 2));
  for (int a = 0; a < 3; ++a) {
    EXPECT_NEAR(p[a][0], s.position(a), 1e-12);
    for (int k = 1; k <= 7; ++k) EXPECT_NEAR(p[a][static_cast<std::size_t>(k)], 0.0, 1e-12);
  }
}

TEST(MinSnap, MatchesKktOracle) {
  const FlatState s0{Vec3(0, 0, 0), Vec3::Zero(), Vec3::Zero()};
  const FlatState s1{Vec3(1, 1, 1), Vec3::Zero(), Vec3::Zero()};
  const auto p = min_snap_segment(s0, s1, TimeWindow(0, 1));
  const auto c = kkt_min_snap(1.0, {0, 0, 0}, {1, 0, 0});
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(p.x[static_cast<std::size_t>(k)], c(k), 1e-8);
}

TEST(MinSnap, MatchesKktOracleOnRandomStates) {
  std::mt19937_64 rng(89);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double T = 0.5 + std::abs(u(rng));
    const std::array<double, 3> a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
    const FlatState s0{Vec3(a[0], 0, 0), Vec3(a[1], 0, 0), Vec3(a[2], 0, 0)};
    const FlatState s1{Vec3(b[0], 0, 0), Vec3(b[1], 0, 0), Vec3(b[2], 0, 0)};
    const auto p = min_snap_segment(s0, s1, TimeWindow(0, T));
    const auto c = kkt_min_snap(T, a, b);
    for (int k = 0; k < 8; ++k) EXPECT_NEAR(p.x[static_cast<std::size_t>(k)], c(k), 1e-7 * std::max(1.0, std::abs(c(k))));
  }
}

TEST(MinSnap, BoundaryConditionsAndLocalOptimality) {
  const FlatState s0 = FlatState::from_array({300, 300, 300, 320, 0, 200, 0, 0, 0});
  const FlatState s1 = FlatState::from_array({600, 650, 700, 0, 0, 0, 0, 0, 0});
  const TimeWindow w(0, 3);
  const auto p = min_snap_segment(s0, s1, w);
  for (int a = 0; a < 3; ++a) {
    const Polynomial d1 = p[a].derivative(), d2 = p[a].derivative(2);
    EXPECT_NEAR(p[a](0), s0.position(a), 1e-8 * 700);
    EXPECT_NEAR(d1(0), s0.velocity(a), 1e-8 * 700);
    EXPECT_NEAR(d2(0), s0.acceleration(a), 1e-8 * 700);
    EXPECT_NEAR(p[a](3), s1.position(a), 1e-8 * 700);
    EXPECT_NEAR(d1(3), s1.velocity(a), 1e-8 * 700);
    EXPECT_NEAR(d2(3), s1.acceleration(a), 1e-8 * 700);
    // The two free directions keep all six boundary values fixed.
    const Polynomial tau = Polynomial::identity();
    const Polynomial bump = tau * tau * tau * (tau - Polynomial{3.0}) * (tau - Polynomial{3.0}) *
                            (tau - Polynomial{3.0});
    const double base = snap_cost(p[a], w);
    for (const Polynomial& dir : {bump, bump * tau}) {
      for (double eps : {1e-3, -1e-3}) EXPECT_GE(snap_cost(p[a] + dir * eps, w), base - 1e-9 * std::max(1.0, base));
    }
  }
}

TEST(MinSnap, ShiftedWindowMatchesUnshifted) {
  const FlatState s0{Vec3(1, 0, 0), Vec3(1, 0, 0), Vec3::Zero()};
  const FlatState s1{Vec3(3, 1, 0), Vec3::Zero(), Vec3::Zero()};
  const auto a = min_snap_segment(s0, s1, TimeWindow(0, 2));
  const auto b = min_snap_segment(s0, s1, TimeWindow(5, 7));
  for (double t : {0.0, 0.3, 1.1, 2.0}) EXPECT_NEAR(a.x(t), b.x(t + 5), 1e-9);
}

TEST(QuadrotorFlat, HoverIsLevel) {
  const auto rp = quadrotor_roll_pitch(Vec3::Zero(), 0.0);
  EXPECT_EQ(rp.phi, 0.0);
  EXPECT_EQ(rp.theta, 0.0);
}

TEST(QuadrotorFlat, ForwardAccelerationEqualToGravity) {
  const auto rp = quadrotor_roll_pitch(Vec3(kDefaultGravity, 0, 0), 0.0);
  EXPECT_NEAR(rp.theta, std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(rp.phi, 0.0, 1e-15);
}

TEST(QuadrotorFlat, FreeFallRejected) {
  try {
    quadrotor_roll_pitch(Vec3(0, 0, -kDefaultGravity + 0.05), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FreeFallSingularity);
  }
}

TEST(QuadrotorFlat, SamplesAlongTrajectory) {
  const PolyVec3 traj{Polynomial{0, 0, 1.0}, Polynomial{0, 0, -0.5}, Polynomial{0}};
  const std::vector<double> times{0.0, 1.0};
  const auto out = quadrotor_flat_orientation(traj, Polynomial{0.0}, times);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_NEAR(out[0].theta, std::atan(2.0 / kDefaultGravity), 1e-14);
  EXPECT_GT(out[0].phi, 0.0);
}

TEST(AgvHeading, StraightLines) {
  const std::vector<double> times{0.0, 0.5, 1.0};
  for (const auto& s : agv_heading(Polynomial{0, 1}, Polynomial{0}, times)) EXPECT_EQ(s.value, 0.0);
  for (const auto& s : agv_heading(Polynomial{0, 1}, Polynomial{0, 1}, times)) {
    EXPECT_NEAR(s.value, std::numbers::pi / 4, 1e-15);
  }
}

TEST(AgvHeading, ZeroSpeedRejected) {
  const std::vector<double> times{0.0, 1.0};
  EXPECT_THROW(agv_heading(Polynomial{0, 0, 1}, Polynomial{0}, times), Error);
}

TEST(AgvHeading, ArcHeadingMatchesTwistAndIsContinuous) {
  const TimeWindow w(0, 6);
  const auto arc = arc_to_polynomial(1.0, 1.0, Vec3(0, 0, 3.0), w, 30);
  std::vector<double> times;
  for (int k = 0; k <= 600; ++k) times.push_back(k * 0.01);
  const auto h = agv_heading(arc.x, arc.y, times);
  for (std::size_t k = 0; k < h.size(); ++k) {
    EXPECT_NEAR(h[k].value, 3.0 + times[k], 1e-6);
    if (k) {
      EXPECT_LT(std::abs(h[k].value - h[k - 1].value), std::numbers::pi);
    }
  }
}

TEST(FitOrientation, ConstantAngleDegreeZero) {
  std::vector<Sample> s;
  for (int k = 0; k < 20; ++k) s.push_back({k * 0.1, 0.3});
  const auto fit = fit_orientation(s, TimeWindow(0, 1.9));
  EXPECT_EQ(fit.degree, 0);
  EXPECT_EQ(fit.max_error, 0.0);
}

TEST(FitOrientation, ZeroYaw) {
  std::vector<Sample> s;
  for (int k = 0; k < 20; ++k) s.push_back({k * 0.1, 0.0});
  const auto fit = fit_orientation(s, TimeWindow(0, 1.9));
  EXPECT_EQ(fit.sin, (Polynomial{0.0}));
  EXPECT_EQ(fit.cos, (Polynomial{1.0}));
}

TEST(FitOrientation, EscalatesUntilBudgetMet) {
  const TimeWindow w(0, 2);
  const auto fit = fit_angle_function([](double t) { return 1.5 * std::sin(2.0 * t); }, w);
  EXPECT_GE(fit.degree, 2);
  EXPECT_LE(fit.degree, 12);
  EXPECT_LT(fit.max_error, kDegree);
}

TEST(FitOrientation, CapExceededRejected) {
  const TimeWindow w(0, 10);
  try {
    fit_angle_function([](double t) { return 3.0 * std::sin(9.0 * t); }, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotApproximable);
  }
}

TEST(FitOrientation, TooFewSamplesRejected) {
  const std::vector<Sample> s{{0, 1}};
  EXPECT_THROW(fit_orientation(s, TimeWindow(0, 1)), Error);
}

TEST(TrajectoryBundleTest, FittedRotationNearlyOrthonormal) {
  const TimeWindow w(0, 3);
  const PolyVec3 pos{Polynomial{0, 1}, Polynomial{0}, Polynomial{1}};
  const PolyVec3 euler{Polynomial{0.1, 0.2, -0.05}, Polynomial{0, 0.3}, Polynomial{0.5, 0.4, 0.1}};
  const auto b = TrajectoryBundle::explicit_euler(pos, w, euler);
  EXPECT_LT(b.fit_error(), kDegree);
  EXPECT_EQ(b.n(), 1);
  EXPECT_GE(b.p(), 2);
  for (int k = 0; k <= 1000; ++k) {
    const double t = 3.0 * k / 1000;
    const Mat3 r = b.fitted_rotation(t);
    EXPECT_LT((r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff(), 0.05);
    for (int i = 0; i < 3; ++i) {
      const double s = b.angle_fit(i).sin(w.to_unit(t)), c = b.angle_fit(i).cos(w.to_unit(t));
      EXPECT_NEAR(s * s + c * c, 1.0, 0.05);
    }
  }
}

TEST(TrajectoryBundleTest, QuadrotorFlatHoverIsConstant) {
  const PolyVec3 pos{Polynomial{0, 1}, Polynomial{2}, Polynomial{3}};
  const auto b = TrajectoryBundle::quadrotor_flat(pos, TimeWindow(0, 1), Polynomial{0.0});
  EXPECT_EQ(b.p(), 0);
  EXPECT_TRUE(b.fitted_rotation(0.5).isApprox(Mat3::Identity()));
}

TEST(TrajectoryBundleTest, AgvHeadingAlongArc) {
  const TimeWindow w(0, 2);
  const auto arc = arc_to_polynomial(1.0, 0.8, Vec3(0, 0, 3.0), w, 12);
  const auto b = TrajectoryBundle::agv_heading(PolyVec3{arc.x, arc.y, Polynomial{0}}, w);
  for (double t : {0.0, 0.7, 1.5, 2.0}) EXPECT_NEAR(wrap_to_pi(b.exact_angles(t).z() - (3.0 + 0.8 * t)), 0.0, 1e-6);
  EXPECT_LT(b.fit_error(), kDegree);
}

TEST(ArcToPolynomial, StraightLineWhenOmegaZero) {
  const auto arc = arc_to_polynomial(2.0, 0.0, Vec3(1, 1, 0.5), TimeWindow(0, 3), 5);
  EXPECT_EQ(arc.truncation_bound, 0.0);
  for (double t : {0.0, 1.0, 3.0}) {
    EXPECT_NEAR(arc.x(t), 1 + 2 * t * std::cos(0.5), 1e-14);
    EXPECT_NEAR(arc.y(t), 1 + 2 * t * std::sin(0.5), 1e-14);
  }
}

TEST(ArcToPolynomial, MatchesAnalyticArc) {
  const TimeWindow w(0, 0.5);
  const auto arc = arc_to_polynomial(1.0, 1.0, Vec3(0, 0, 0), w, 6);
  double worst = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double t = 0.5 * k / 1000;
    worst = std::max(worst, std::abs(arc.x(t) - std::sin(t)));
    worst = std::max(worst, std::abs(arc.y(t) - (1.0 - std::cos(t))));
  }
  EXPECT_LT(worst, 1e-5);
  EXPECT_LE(worst, arc.truncation_bound);
}

TEST(ArcToPolynomial, ShiftedWindowAndStationary) {
  const TimeWindow w(2, 3);
  const auto arc = arc_to_polynomial(1.5, -0.7, Vec3(1, -1, 0.2), w, 12);
  for (double t : {2.0, 2.4, 3.0}) {
    const double tau = t - 2.0;
    EXPECT_NEAR(arc.x(t), 1 + 1.5 / -0.7 * (std::sin(0.2 - 0.7 * tau) - std::sin(0.2)), 1e-9);
    EXPECT_NEAR(arc.y(t), -1 - 1.5 / -0.7 * (std::cos(0.2 - 0.7 * tau) - std::cos(0.2)), 1e-9);
  }
  const auto still = arc_to_polynomial(0.0, 1.0, Vec3(4, 5, 0), w, 4);
  EXPECT_EQ(still.x(2.5), 4.0);
  EXPECT_EQ(still.y(2.5), 5.0);
  EXPECT_THROW(arc_to_polynomial(1, 1, Vec3::Zero(), w, 2), Error);
}
