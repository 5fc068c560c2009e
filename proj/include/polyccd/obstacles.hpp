#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "polyccd/error.hpp"
#include "polyccd/geometry.hpp"

namespace polyccd {

/// Smallest admissible eigenvalue of an ellipsoid matrix, relative to the largest.
inline constexpr double kEllipsoidEigenFloor = 1e-10;

/// {x : (x - c)^T A (x - c) <= 1} with A symmetric positive definite.
class Ellipsoid {
 public:
  Ellipsoid(const Vec3& center, const Mat3& a) : c_(center), a_(a) {
    if (!c_.allFinite() || !a_.allFinite()) throw Error(ErrorCode::InvalidArgument, "ellipsoid: non-finite input");
    if (!((a_ - a_.transpose()).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, a_.cwiseAbs().maxCoeff()))) {
      throw Error(ErrorCode::InvalidArgument, "ellipsoid: matrix is not symmetric");
    }
    const Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (a_ + a_.transpose()));
    lambda_ = es.eigenvalues();
    q_ = es.eigenvectors();
    if (!(lambda_(0) > kEllipsoidEigenFloor * lambda_(2))) {
      throw Error(ErrorCode::InvalidArgument,
                  "ellipsoid: matrix is not positive definite (eigenvalues " + std::to_string(lambda_(0)) + ", " +
                      std::to_string(lambda_(1)) + ", " + std::to_string(lambda_(2)) + ")");
    }
    l_ = lambda_.cwiseSqrt().asDiagonal() * q_.transpose();
  }

  /// Principal frame given by the columns of `axes` (orthonormal) with the given semi-axis lengths.
  static Ellipsoid from_axes(const Vec3& center, const Mat3& axes, const Vec3& semi_axes) {
    if (!(semi_axes.minCoeff() > 0.0)) throw Error(ErrorCode::InvalidArgument, "ellipsoid: semi-axes must be positive");
    const Vec3 lam = semi_axes.cwiseInverse().cwiseAbs2();
    const Mat3 a = axes * lam.asDiagonal() * axes.transpose();
    return Ellipsoid(center, 0.5 * (a + a.transpose()));
  }

  const Vec3& center() const { return c_; }
  const Mat3& matrix() const { return a_; }
  /// Eigenvalues ascending; eigenvectors() holds the matching columns.
  const Vec3& eigenvalues() const { return lambda_; }
  const Mat3& eigenvectors() const { return q_; }
  Vec3 semi_axes() const { return lambda_.cwiseSqrt().cwiseInverse(); }

  /// Lambda^{1/2} Q^T, the linear part of the map to the unit sphere.
  const Mat3& affine_matrix() const { return l_; }

  /// x~ = Lambda^{1/2} Q^T (x - c).
  Vec3 transform(const Vec3& x) const { return l_ * (x - c_); }
  /// Direction vectors skip the translation.
  Vec3 transform_vector(const Vec3& v) const { return l_ * v; }

  double level(const Vec3& x) const { return (x - c_).dot(a_ * (x - c_)); }
  bool contains(const Vec3& x) const { return level(x) <= 1.0; }

 private:
  Vec3 c_;
  Mat3 a_;
  Vec3 lambda_;
  Mat3 q_;
  Mat3 l_;
};

inline Vec3 affine_transform(const Ellipsoid& h, const Vec3& x) { return h.transform(x); }

/// Grows each semi-axis by margin.
inline Ellipsoid inflate(const Ellipsoid& h, double margin) {
  if (!(margin >= 0.0)) throw Error(ErrorCode::InvalidArgument, "inflate: margin must be non-negative");
  if (margin == 0.0) return h;
  Vec3 lam;
  for (int i = 0; i < 3; ++i) {
    const double r = 1.0 / std::sqrt(h.eigenvalues()(i)) + margin;
    lam(i) = 1.0 / (r * r);
  }
  const Mat3 a = h.eigenvectors() * lam.asDiagonal() * h.eigenvectors().transpose();
  return Ellipsoid(h.center(), 0.5 * (a + a.transpose()));
}

struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;

  void validate() const {
    if (!center.allFinite() || !(radius > 0.0) || !std::isfinite(radius)) {
      throw Error(ErrorCode::InvalidArgument, "sphere: radius must be positive and finite");
    }
  }
};

inline Ellipsoid sphere_to_ellipsoid(const Sphere& s) {
  s.validate();
  return Ellipsoid(s.center, Mat3::Identity() / (s.radius * s.radius));
}

/// Points within `radius` of the axis segment [axis_start, axis_end].
struct Cylinder {
  Vec3 axis_start = Vec3::Zero();
  Vec3 axis_end = Vec3::UnitZ();
  double radius = 1.0;

  Edge axis() const { return {axis_start, axis_end}; }

  void validate() const {
    if (!axis_start.allFinite() || !axis_end.allFinite()) throw Error(ErrorCode::InvalidArgument, "cylinder: non-finite axis");
    if (!((axis_end - axis_start).norm() > 0.0)) throw Error(ErrorCode::InvalidArgument, "cylinder: zero-length axis");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::InvalidArgument, "cylinder: radius must be positive");
  }
};

/// Triangle mesh.
struct Polyhedron {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::size_t, 3>> triangles;

  std::size_t size() const { return triangles.size(); }
  Triangle triangle(std::size_t k) const {
    const auto& t = triangles[k];
    return {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
  }

  void validate() const {
    if (triangles.empty()) throw Error(ErrorCode::InvalidArgument, "polyhedron: no triangles");
    for (const auto& v : vertices) {
      if (!v.allFinite()) throw Error(ErrorCode::InvalidArgument, "polyhedron: non-finite vertex");
    }
    for (std::size_t k = 0; k < triangles.size(); ++k) {
      for (std::size_t i : triangles[k]) {
        if (i >= vertices.size()) {
          throw Error(ErrorCode::InvalidArgument, "polyhedron: triangle " + std::to_string(k) + " references a missing vertex");
        }
      }
      if (triangle(k).degenerate()) {
        throw Error(ErrorCode::InvalidArgument, "polyhedron: triangle " + std::to_string(k) + " is degenerate");
      }
    }
  }

  /// Even-odd ray test along a fixed skew direction; meaningful for closed meshes.
  bool contains(const Vec3& p) const {
    const Vec3 dir = Vec3(0.5773, 0.5774, 0.5775).normalized();
    int crossings = 0;
    for (std::size_t k = 0; k < triangles.size(); ++k) {
      const Triangle t = triangle(k);
      const Vec3 e1 = t.e1(), e2 = t.e2();
      const Vec3 h = dir.cross(e2);
      const double a = e1.dot(h);
      if (std::abs(a) < 1e-14) continue;
      const Vec3 s = p - t.v0;
      const double u = s.dot(h) / a;
      if (u < 0.0 || u > 1.0) continue;
      const Vec3 q = s.cross(e1);
      const double v = dir.dot(q) / a;
      if (v < 0.0 || u + v > 1.0) continue;
      if (e2.dot(q) / a > 0.0) ++crossings;
    }
    return crossings % 2 == 1;
  }
};

/// Axis-aligned box as 12 outward-facing triangles.
inline Polyhedron box_mesh(const Vec3& center, const Vec3& size) {
  if (!(size.minCoeff() > 0.0)) throw Error(ErrorCode::InvalidArgument, "box_mesh: sizes must be positive");
  Polyhedron p;
  for (int k = 0; k < 8; ++k) {
    p.vertices.push_back(center + Vec3((k & 1 ? 0.5 : -0.5) * size.x(), (k & 2 ? 0.5 : -0.5) * size.y(),
                                       (k & 4 ? 0.5 : -0.5) * size.z()));
  }
  p.triangles = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                 {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return p;
}

using Obstacle = std::variant<Ellipsoid, Sphere, Cylinder, Polyhedron>;

inline const char* obstacle_kind(const Obstacle& o) {
  static constexpr const char* kNames[] = {"ellipsoid", "sphere", "cylinder", "polyhedron"};
  return kNames[o.index()];
}

}  // namespace polyccd
