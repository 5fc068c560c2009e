#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "polyccd/kinematics.hpp"
#include "polyccd/obstacles.hpp"
#include "polyccd/robot.hpp"

namespace polyccd {

/// Robot, trajectory and obstacles of one collision query.
struct Scenario {
  RobotModel robot;
  TrajectoryBundle trajectory;
  std::vector<Obstacle> obstacles;
  double margin = 0.0;
};

enum class ObstacleClass { Ellipsoid, Sphere, Cylinder, Polyhedron };

inline const char* to_string(ObstacleClass c) {
  switch (c) {
    case ObstacleClass::Ellipsoid: return "ellipsoid";
    case ObstacleClass::Sphere: return "sphere";
    case ObstacleClass::Cylinder: return "cylinder";
    case ObstacleClass::Polyhedron: return "polyhedron";
  }
  return "unknown";
}

inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

/// Random obstacle of the given class placed near `anchor`.
inline Obstacle random_obstacle(std::mt19937_64& rng, ObstacleClass cls, const Vec3& anchor) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto between = [&](double a, double b) { return a + (b - a) * u(rng); };
  switch (cls) {
    case ObstacleClass::Ellipsoid:
      return Ellipsoid::from_axes(anchor, random_rotation(rng), Vec3(between(0.2, 1.0), between(0.2, 1.0), between(0.2, 1.0)));
    case ObstacleClass::Sphere:
      return Sphere{anchor, between(0.2, 0.8)};
    case ObstacleClass::Cylinder: {
      const Vec3 axis = random_rotation(rng).col(0) * between(0.5, 2.0);
      return Cylinder{anchor - 0.5 * axis, anchor + 0.5 * axis, between(0.05, 0.4)};
    }
    case ObstacleClass::Polyhedron: {
      Polyhedron p = box_mesh(Vec3::Zero(), Vec3(between(0.3, 1.2), between(0.3, 1.2), between(0.3, 1.2)));
      const Mat3 r = random_rotation(rng);
      for (auto& v : p.vertices) v = anchor + r * v;
      return p;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown obstacle class");
}

/// Seeded scene: a 0.6 x 0.6 x 0.2 box quadrotor on a random degree-7
/// min-snap segment over [0, 3] (yaw 0, flatness roll and pitch) with one
/// obstacle of the given class placed near a random point of the path.
inline Scenario random_scene(std::uint64_t seed, ObstacleClass cls) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto vec = [&](double r) { return Vec3(r * u(rng), r * u(rng), r * u(rng)); };
  const TimeWindow window(0.0, 3.0);
  const Vec3 p0 = vec(1.0);
  const Vec3 dir = random_rotation(rng).col(0);
  const double dist = 3.0 + 1.5 * (u(rng) + 1.0);
  const FlatState start{p0, vec(1.5), vec(1.0)};
  const FlatState goal{p0 + dist * dir, vec(1.5), vec(1.0)};
  PolyVec3 pos = min_snap_segment(start, goal, window);
  TrajectoryBundle traj = TrajectoryBundle::quadrotor_flat(pos, window, Polynomial{0.0});
  const double t_star = 0.3 + 2.4 * 0.5 * (u(rng) + 1.0);
  const Vec3 anchor = pos(t_star) + vec(0.6);
  std::vector<Obstacle> obstacles{random_obstacle(rng, cls, anchor)};
  return Scenario{box_model(0.6, 0.6, 0.2), std::move(traj), std::move(obstacles), 0.0};
}

/// Single body edge (-0.1, 0, 0)-(0.1, 0, 0) moving along x(t) = t - 5 over
/// [0, 10] without rotation; `obstacle` sits at the origin.
inline Scenario analytic_line_scene(Obstacle obstacle, const Vec3& edge_direction = Vec3::UnitX()) {
  RobotModel robot;
  robot.vertices = {-0.1 * edge_direction, 0.1 * edge_direction};
  robot.edges = {{0, 1}};
  const TimeWindow window(0.0, 10.0);
  auto traj = TrajectoryBundle::constant_orientation(PolyVec3{Polynomial{-5.0, 1.0}, Polynomial{0.0}, Polynomial{0.0}}, window);
  return Scenario{std::move(robot), std::move(traj), {std::move(obstacle)}, 0.0};
}

/// Single-edge robot moving along z(t) = t - 5 with its edge along z,
/// crossing a large horizontal triangle through the origin.
inline Scenario analytic_triangle_scene() {
  RobotModel robot;
  robot.vertices = {Vec3(0, 0, -0.1), Vec3(0, 0, 0.1)};
  robot.edges = {{0, 1}};
  const TimeWindow window(0.0, 10.0);
  auto traj = TrajectoryBundle::constant_orientation(PolyVec3{Polynomial{0.0}, Polynomial{0.0}, Polynomial{-5.0, 1.0}}, window);
  Polyhedron tri{{Vec3(-3, -2, 0), Vec3(3, -2, 0), Vec3(0, 4, 0)}, {{0, 1, 2}}};
  return Scenario{std::move(robot), std::move(traj), {std::move(tri)}, 0.0};
}

/// A 0.04 m cube crossing a 1 mm wall (x in [4.9995, 5.0005]) at 10 m/s along
/// x(t) = 10 t - 0.05. They overlap for t in [0.50295, 0.50705], strictly
/// between the 0.01 s samples 0.50 and 0.51.
inline Scenario tunneling_scene() {
  const TimeWindow window(0.0, 1.0);
  auto traj = TrajectoryBundle::constant_orientation(
      PolyVec3{Polynomial{-0.05, 10.0}, Polynomial{0.0}, Polynomial{0.0}}, window);
  Polyhedron wall = box_mesh(Vec3(5.0, 0.0, 0.0), Vec3(0.001, 2.0, 2.0));
  return Scenario{box_model(0.04, 0.04, 0.04), std::move(traj), {std::move(wall)}, 0.0};
}

}  // namespace polyccd
