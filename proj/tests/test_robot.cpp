#include <gtest/gtest.h>

#include <random>

#include "polyccd/robot.hpp"
#include "reference_trajectories.hpp"

using namespace polyccd;

namespace {

double max_lift_residual(const RobotModel& m, const TrajectoryBundle& b, const std::vector<LiftedEdge>& lifted, int n,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(b.window().start(), b.window().end());
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = u(rng);
    const auto edges = world_edges(m, b, t, PoseSource::Fitted);
    for (std::size_t i = 0; i < lifted.size(); ++i) {
      const Edge got = lifted[i].edge_at(t);
      worst = std::max({worst, (got.start - edges[i].start).norm(), (got.end - edges[i].end).norm()});
    }
  }
  return worst;
}

}  // namespace

TEST(BoxModel, QuadrotorSize) {
  const RobotModel m = box_model(0.6, 0.6, 0.2);
  EXPECT_EQ(m.vertices.size(), 8u);
  EXPECT_EQ(m.edges.size(), 12u);
  EXPECT_TRUE(std::any_of(m.vertices.begin(), m.vertices.end(),
                          [](const Vec3& v) { return (v - Vec3(0.3, 0.3, 0.1)).norm() < 1e-15; }));
}

TEST(BoxModel, CubeEdgeLengths) {
  const RobotModel m = box_model(2, 2, 2);
  for (const auto& [a, b] : m.edges) EXPECT_DOUBLE_EQ((m.vertices[a] - m.vertices[b]).norm(), 2.0);
}

TEST(BoxModel, FlatBoxRejected) { EXPECT_THROW(box_model(1, 1, 0), Error); }

TEST(RobotModelTest, ValidationErrors) {
  RobotModel m;
  EXPECT_THROW(m.validate(), Error);
  m.vertices = {Vec3::Zero(), Vec3::Zero()};
  m.edges = {{0, 1}};
  EXPECT_THROW(m.validate(), Error);
  m.vertices[1] = Vec3(1, 0, 0);
  m.edges = {{0, 2}};
  EXPECT_THROW(m.validate(), Error);
  m.edges = {{0, 1}};
  m.anchors = {{Vec3::Zero(), 5}};
  EXPECT_THROW(m.validate(), Error);
}

TEST(DegreeCalculus, RotationBoundsMatchUniformFormula) {
  const auto r = rotation_degrees(4, 4, 4);
  for (int j = 0; j < 3; ++j) {
    EXPECT_LE(r[0][static_cast<std::size_t>(j)], 12);
    EXPECT_LE(r[2][static_cast<std::size_t>(j)], 8);
  }
  EXPECT_EQ(r[0][1], 12);
  EXPECT_EQ(r[2][2], 8);
  // Zero yaw: the quadrotor vertex bounds become (max(n, 2p), max(n, 2p), max(n, 2p)).
  const auto q = rotation_degrees(4, 4, 0);
  EXPECT_EQ(q[0][2], 8);
  EXPECT_EQ(q[2][0], 4);
}

TEST(DegreeCalculus, CrossAndDet) {
  const DegVec3 a{{1, 2, 3}}, b{{4, 0, 1}};
  EXPECT_EQ(dot_degree(a, b), 5);
  EXPECT_EQ(cross_degree(a, b), (DegVec3{{3, 7, 6}}));
  EXPECT_EQ(det_degree(a, b, DegVec3::uniform(1)), 8);
}

TEST(LiftEdges, StaticPoseGivesBodyCoordinates) {
  const RobotModel m = box_model(1, 2, 3);
  const auto b = TrajectoryBundle::constant_orientation(PolyVec3{Polynomial{0}, Polynomial{0}, Polynomial{0}},
                                                        TimeWindow(0, 1));
  const auto lifted = lift_edges(m, b);
  ASSERT_EQ(lifted.size(), 12u);
  for (std::size_t k = 0; k < lifted.size(); ++k) {
    const auto [a, c] = m.edges[k];
    EXPECT_EQ(lifted[k].start_degree, DegVec3::uniform(0));
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(lifted[k].start[i][0], m.vertices[a](i), 1e-15);
      EXPECT_NEAR(lifted[k].vector[i][0], m.vertices[c](i) - m.vertices[a](i), 1e-15);
    }
  }
}

TEST(LiftEdges, PureTranslation) {
  const RobotModel m = box_model(1, 1, 1);
  const TimeWindow w(0, 4);
  const auto b = TrajectoryBundle::constant_orientation(PolyVec3{Polynomial{0, 1}, Polynomial{0}, Polynomial{0}}, w);
  const auto lifted = lift_edges(m, b);
  for (std::size_t k = 0; k < lifted.size(); ++k) {
    const auto [a, c] = m.edges[k];
    EXPECT_EQ(lifted[k].start_degree, (DegVec3{{1, 0, 0}}));
    EXPECT_EQ(lifted[k].vector_degree, DegVec3::uniform(0));
    for (double t : {0.0, 1.7, 4.0}) {
      EXPECT_NEAR(lifted[k].start_at(t).x(), m.vertices[a].x() + t, 1e-13);
      EXPECT_LT((lifted[k].vector_at(t) - (m.vertices[c] - m.vertices[a])).norm(), 1e-14);
    }
  }
}

TEST(LiftEdges, QuadrotorT1MatchesDirectPose) {
  const RobotModel m = box_model(60, 60, 20);
  const TimeWindow w(0, 3);
  const auto b = TrajectoryBundle::quadrotor_flat(oracle::quadrotor_t1(), w, Polynomial{0.0}, oracle::kGravityCm);
  EXPECT_LE(b.p(), 4);
  const auto lifted = lift_edges(m, b);
  // Scene scale: positions reach 700 cm.
  EXPECT_LT(max_lift_residual(m, b, lifted, 50, 5), 1e-6 * 700);
  for (const auto& le : lifted) {
    EXPECT_LE(le.start_degree[0], std::max(7, 3 * b.p()));
    EXPECT_LE(le.start_degree[2], std::max(7, 2 * b.p()));
  }
}

double worst_norm_deviation(const TrajectoryBundle& b) {
  double nd = 0.0;
  for (int i = 0; i < 3; ++i) {
    const AngleFit& f = b.angle_fit(i);
    for (int k = 0; k <= 1000; ++k) {
      const double s = -1.0 + 2.0 * k / 1000;
      nd = std::max(nd, std::abs(f.sin(s) * f.sin(s) + f.cos(s) * f.cos(s) - 1.0));
    }
  }
  return nd;
}

double worst_length_deviation(const RobotModel& m, const std::vector<LiftedEdge>& lifted, const TimeWindow& w) {
  double worst = 0.0;
  for (std::size_t k = 0; k < m.edges.size(); ++k) {
    const auto [a, c] = m.edges[k];
    const double body = (m.vertices[c] - m.vertices[a]).norm();
    for (int i = 0; i <= 1000; ++i) {
      const double t = w.start() + w.length() * i / 1000;
      worst = std::max(worst, std::abs(lifted[k].vector_at(t).norm() - body) / body);
    }
  }
  return worst;
}

// The stretch of a lifted edge is set by how far each sin/cos pair drifts off
// the unit circle; with a tight norm budget it stays under 0.5%.
TEST(LiftEdges, RigidLengthPreserved) {
  const RobotModel m = box_model(0.6, 0.6, 0.2);
  const TimeWindow w(0, 3);
  const PolyVec3 euler{Polynomial{0.1, 0.3, -0.1}, Polynomial{-0.2, 0.1}, Polynomial{0.0, 0.8, -0.1}};
  FitOptions tight;
  tight.norm_slack = 0.003;
  const auto b = TrajectoryBundle::explicit_euler(PolyVec3{Polynomial{0, 1, 0.2}, Polynomial{1, -0.5}, Polynomial{2}},
                                                  w, euler, tight);
  const auto lifted = lift_edges(m, b);
  EXPECT_LT(worst_length_deviation(m, lifted, w), 0.005);
  EXPECT_LT(max_lift_residual(m, b, lifted, 50, 7), 1e-6 * 3);
}

// At the default budget (p = 4 on T1) the stretch exceeds 0.5% but stays within
// the 1.5 delta bound implied by the fits.
TEST(LiftEdges, RigidLengthBoundedByFitNormDrift) {
  const RobotModel m = box_model(60, 60, 20);
  const TimeWindow w(0, 3);
  const auto b = TrajectoryBundle::quadrotor_flat(oracle::quadrotor_t1(), w, Polynomial{0.0}, oracle::kGravityCm);
  const auto lifted = lift_edges(m, b);
  EXPECT_LE(worst_length_deviation(m, lifted, w), 1.5 * worst_norm_deviation(b) + 1e-9);
}

TEST(LiftEdges, DoubledBoundsChangeNothing) {
  const RobotModel m = box_model(0.6, 0.6, 0.2);
  const TimeWindow w(0, 3);
  const PolyVec3 euler{Polynomial{0.1, 0.3, -0.1}, Polynomial{-0.2, 0.1}, Polynomial{0.0, 0.8, -0.1}};
  const auto b = TrajectoryBundle::explicit_euler(PolyVec3{Polynomial{0, 1, 0.2}, Polynomial{1, -0.5}, Polynomial{2}},
                                                  w, euler);
  const auto l1 = lift_edges(m, b);
  const auto l2 = lift_edges(m, b, LiftOptions{2});
  for (std::size_t k = 0; k < l1.size(); ++k) {
    for (int i = 0; i <= 200; ++i) {
      const double t = 3.0 * i / 200;
      EXPECT_LT((l1[k].start_at(t) - l2[k].start_at(t)).norm(), 1e-8);
      EXPECT_LT((l1[k].vector_at(t) - l2[k].vector_at(t)).norm(), 1e-8);
    }
  }
}

TEST(LiftEdges, AnchoredCable) {
  RobotModel m = box_model(1, 1, 1);
  m.anchors.push_back({Vec3(10, 0, 5), 7});
  const TimeWindow w(0, 2);
  const auto b =
      TrajectoryBundle::constant_orientation(PolyVec3{Polynomial{0, 1, 0.5}, Polynomial{0}, Polynomial{1, 1}}, w);
  const auto lifted = lift_edges(m, b);
  ASSERT_EQ(lifted.size(), 13u);
  const LiftedEdge& cable = lifted.back();
  EXPECT_TRUE(cable.anchored);
  EXPECT_EQ(cable.start_degree, DegVec3::uniform(0));
  EXPECT_EQ(cable.vector_degree, (DegVec3{{2, 0, 1}}));
  for (double t : {0.0, 0.9, 2.0}) {
    const Vec3 vertex = b.position()(t) + m.vertices[7];
    EXPECT_LT((cable.start_at(t) - Vec3(10, 0, 5)).norm(), 1e-14);
    EXPECT_LT((cable.vector_at(t) - (vertex - Vec3(10, 0, 5))).norm(), 1e-12);
  }
}
