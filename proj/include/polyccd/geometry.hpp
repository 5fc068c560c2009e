#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "polyccd/error.hpp"

namespace polyccd {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// det[a, b, c] with a, b, c as columns.
inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return a.cross(b).dot(c); }

struct Edge {
  Vec3 start = Vec3::Zero();
  Vec3 end = Vec3::Zero();

  Vec3 vector() const { return end - start; }
  double length() const { return vector().norm(); }
  Vec3 at(double s) const { return start + s * vector(); }
};

struct Triangle {
  Vec3 v0 = Vec3::Zero();
  Vec3 v1 = Vec3::Zero();
  Vec3 v2 = Vec3::Zero();

  Vec3 e1() const { return v1 - v0; }
  Vec3 e2() const { return v2 - v0; }
  double twice_area() const { return e1().cross(e2()).norm(); }
  bool degenerate() const { return !(twice_area() > 1e-12); }
};

/// Distance from p to segment e by the three-branch projection test.
inline double dEP(const Edge& e, const Vec3& p) {
  const Vec3 d = e.vector();
  const double dd = d.squaredNorm();
  if (!(dd > 0.0)) throw Error(ErrorCode::InvalidArgument, "dEP: zero-length edge");
  const Vec3 sp = p - e.start;
  const double proj = sp.dot(d);
  if (proj <= 0.0) return sp.norm();
  if (proj < dd) return d.cross(sp).norm() / std::sqrt(dd);
  return (p - e.end).norm();
}

/// Determinants of the common-perpendicular system M t = e_ij with
/// M = [e_i, -e_j, -(e_i x e_j)]: t_i = u1/u0, t_j = u2/u0, t_p = u3/u0.
struct EdgeEdgeParams {
  double u0 = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;

  double ti() const { return u1 / u0; }
  double tj() const { return u2 / u0; }
  double tp() const { return u3 / u0; }
};

/// Relative threshold on |e_i x e_j|^2 / (|e_i|^2 |e_j|^2) below which a pair is parallel.
inline constexpr double kParallelTolerance = 1e-12;

/// Empty when the pair is parallel.
inline std::optional<EdgeEdgeParams> edge_edge_params(const Edge& ei, const Edge& ej) {
  const Vec3 a = ei.vector();
  const Vec3 b = ej.vector();
  const Vec3 c = a.cross(b);
  const double cc = c.squaredNorm();
  if (cc <= kParallelTolerance * a.squaredNorm() * b.squaredNorm()) return std::nullopt;
  const Vec3 eij = ej.start - ei.start;
  EdgeEdgeParams p;
  p.u0 = det3(a, -b, -c);
  p.u1 = det3(eij, -b, -c);
  p.u2 = det3(a, eij, -c);
  p.u3 = det3(a, -b, eij);
  return p;
}

/// Segment-segment distance by the nine-branch (t_i, t_j) table; empty for
/// parallel pairs. Corner branches take the smaller of the two adjacent
/// endpoint-to-segment distances: a single vertex-vertex distance is not the
/// segment distance there in general.
inline std::optional<double> dEE(const Edge& ei, const Edge& ej) {
  const auto prm = edge_edge_params(ei, ej);
  if (!prm) return std::nullopt;
  const double ti = prm->ti();
  const double tj = prm->tj();
  const bool i_in = 0.0 <= ti && ti <= 1.0;
  const bool j_in = 0.0 <= tj && tj <= 1.0;
  const Vec3& vi = ti < 0.0 ? ei.start : ei.end;
  const Vec3& vj = tj < 0.0 ? ej.start : ej.end;
  if (i_in && j_in) return std::abs(prm->u3) / std::sqrt(prm->u0);
  if (j_in) return dEP(ej, vi);
  if (i_in) return dEP(ei, vj);
  return std::min(dEP(ej, vi), dEP(ei, vj));
}

/// Segment-segment distance for any pair, parallel or not (oracle path).
inline double segment_distance(const Edge& ei, const Edge& ej) {
  if (const auto d = dEE(ei, ej)) return *d;
  const double li = ei.vector().squaredNorm();
  const double lj = ej.vector().squaredNorm();
  if (li == 0.0 && lj == 0.0) return (ei.start - ej.start).norm();
  if (li == 0.0) return dEP(ej, ei.start);
  if (lj == 0.0) return dEP(ei, ej.start);
  // Parallel: the minimum is attained at one of the four endpoints.
  return std::min({dEP(ej, ei.start), dEP(ej, ei.end), dEP(ei, ej.start), dEP(ei, ej.end)});
}

struct EdgeTriangleHit {
  double k = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
};
struct EdgeTriangleMiss {
  double k = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
};
struct ParallelToPlane {};

using EdgeTriangleResult = std::variant<EdgeTriangleHit, EdgeTriangleMiss, ParallelToPlane>;

/// Determinants of Q k = e_0 with Q = [-e, e_1, e_2]: k = v0/v3, k1 = v1/v3, k2 = v2/v3.
struct EdgeTriangleParams {
  double v0 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
};

inline EdgeTriangleParams edge_triangle_params(const Edge& e, const Triangle& tri) {
  const Vec3 d = e.vector();
  const Vec3 e0 = e.start - tri.v0;
  const Vec3 e1 = tri.e1();
  const Vec3 e2 = tri.e2();
  return {det3(e0, e1, e2), det3(-d, e0, e2), det3(-d, e1, e0), det3(-d, e1, e2)};
}

inline EdgeTriangleResult edge_triangle(const Edge& e, const Triangle& tri) {
  if (tri.degenerate()) throw Error(ErrorCode::InvalidArgument, "edge_triangle: degenerate triangle");
  const auto p = edge_triangle_params(e, tri);
  const double scale = e.length() * tri.twice_area();
  if (std::abs(p.v3) <= kParallelTolerance * scale) return ParallelToPlane{};
  const double k = p.v0 / p.v3;
  const double k1 = p.v1 / p.v3;
  const double k2 = p.v2 / p.v3;
  if (0.0 <= k && k <= 1.0 && 0.0 <= k1 && 0.0 <= k2 && k1 + k2 <= 1.0) return EdgeTriangleHit{k, k1, k2};
  return EdgeTriangleMiss{k, k1, k2};
}

}  // namespace polyccd
