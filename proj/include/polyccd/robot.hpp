#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "polyccd/error.hpp"
#include "polyccd/geometry.hpp"
#include "polyccd/interpolation.hpp"
#include "polyccd/kinematics.hpp"

namespace polyccd {

/// Cable edge from a fixed world point to a body vertex.
struct Anchor {
  Vec3 world_point = Vec3::Zero();
  std::size_t vertex = 0;
};

/// Rigid body as body-frame vertices, free edges between vertices, and
/// anchored cable edges.
struct RobotModel {
  std::vector<Vec3> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<Anchor> anchors;

  std::size_t edge_count() const { return edges.size() + anchors.size(); }

  void validate() const {
    if (edge_count() == 0) throw Error(ErrorCode::InvalidArgument, "robot model has no edges");
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto [a, b] = edges[k];
      if (a >= vertices.size() || b >= vertices.size()) {
        throw Error(ErrorCode::InvalidArgument, "edge " + std::to_string(k) + " references a missing vertex");
      }
      if (!((vertices[a] - vertices[b]).norm() > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "edge " + std::to_string(k) + " has zero length");
      }
    }
    for (std::size_t k = 0; k < anchors.size(); ++k) {
      if (anchors[k].vertex >= vertices.size()) {
        throw Error(ErrorCode::InvalidArgument, "anchor " + std::to_string(k) + " references a missing vertex");
      }
    }
  }

  /// Largest vertex distance from the body origin.
  double body_radius() const {
    double r = 0.0;
    for (const auto& v : vertices) r = std::max(r, v.norm());
    return r;
  }
};

/// Box centred at the body origin: 8 vertices at the half-extents, 12 edges.
inline RobotModel box_model(double sx, double sy, double sz) {
  if (!(sx > 0.0 && sy > 0.0 && sz > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "box_model: sizes must be positive (a zero size gives zero-length edges)");
  }
  RobotModel m;
  for (int k = 0; k < 8; ++k) {
    m.vertices.emplace_back((k & 1 ? 0.5 : -0.5) * sx, (k & 2 ? 0.5 : -0.5) * sy, (k & 4 ? 0.5 : -0.5) * sz);
  }
  // Vertices differing in exactly one bit of their index share an edge.
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t bit : {1u, 2u, 4u}) {
      if (!(a & bit)) m.edges.emplace_back(a, a | bit);
    }
  }
  return m;
}

/// Per-coordinate degree bounds of a polynomial 3-vector.
struct DegVec3 {
  std::array<int, 3> d{0, 0, 0};

  int operator[](int i) const { return d[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return d[static_cast<std::size_t>(i)]; }
  int max() const { return std::max({d[0], d[1], d[2]}); }
  friend bool operator==(const DegVec3&, const DegVec3&) = default;

  static DegVec3 uniform(int k) { return {{k, k, k}}; }
  DegVec3 max_with(const DegVec3& o) const {
    return {{std::max(d[0], o.d[0]), std::max(d[1], o.d[1]), std::max(d[2], o.d[2])}};
  }
  DegVec3 scaled(int k) const { return {{d[0] * k, d[1] * k, d[2] * k}}; }
};

/// Degree bound of a . b.
inline int dot_degree(const DegVec3& a, const DegVec3& b) {
  return std::max({a[0] + b[0], a[1] + b[1], a[2] + b[2]});
}

/// Per-coordinate degree bounds of a x b.
inline DegVec3 cross_degree(const DegVec3& a, const DegVec3& b) {
  return {{std::max(a[1] + b[2], a[2] + b[1]), std::max(a[2] + b[0], a[0] + b[2]), std::max(a[0] + b[1], a[1] + b[0])}};
}

/// Degree bound of det[a, b, c].
inline int det_degree(const DegVec3& a, const DegVec3& b, const DegVec3& c) { return dot_degree(cross_degree(a, b), c); }

/// Degree bounds of each rotation-matrix entry, given per-angle fit degrees.
inline std::array<std::array<int, 3>, 3> rotation_degrees(int pphi, int ptheta, int ppsi) {
  const int all = pphi + ptheta + ppsi;
  return {{{ptheta + ppsi, std::max(all, pphi + ppsi), std::max(all, pphi + ppsi)},
           {ptheta + ppsi, std::max(all, pphi + ppsi), std::max(all, pphi + ppsi)},
           {ptheta, pphi + ptheta, pphi + ptheta}}};
}

/// World-frame polynomials of one robot edge on the unit variable of the
/// bundle's window: start vertex path and edge vector.
struct LiftedEdge {
  PolyVec3 start;
  PolyVec3 vector;
  DegVec3 start_degree;
  DegVec3 vector_degree;
  TimeWindow window{0.0, 1.0};
  std::size_t index = 0;
  bool anchored = false;

  Vec3 start_at(double t) const { return start(window.to_unit(t)); }
  Vec3 vector_at(double t) const { return vector(window.to_unit(t)); }
  Edge edge_at(double t) const {
    const Vec3 s = start_at(t);
    return {s, s + vector_at(t)};
  }
};

enum class PoseSource { Exact, Fitted };

/// World vertex positions at time t: p0(t) + R(t) v.
inline std::vector<Vec3> world_vertices(const RobotModel& model, const TrajectoryBundle& traj, double t,
                                        PoseSource src = PoseSource::Fitted) {
  const Mat3 r = src == PoseSource::Exact ? traj.exact_rotation(t) : traj.fitted_rotation(t);
  const Vec3 p0 = traj.position()(t);
  std::vector<Vec3> out;
  out.reserve(model.vertices.size());
  for (const auto& v : model.vertices) out.push_back(p0 + r * v);
  return out;
}

/// World edges at time t, free edges first, then anchored edges.
inline std::vector<Edge> world_edges(const RobotModel& model, const TrajectoryBundle& traj, double t,
                                     PoseSource src = PoseSource::Fitted) {
  const auto w = world_vertices(model, traj, t, src);
  std::vector<Edge> out;
  out.reserve(model.edge_count());
  for (const auto& [a, b] : model.edges) out.push_back({w[a], w[b]});
  for (const auto& an : model.anchors) out.push_back({an.world_point, w[an.vertex]});
  return out;
}

struct LiftOptions {
  /// Multiplies every degree bound; 1 is the exact calculus.
  int degree_multiplier = 1;
};

namespace detail {

/// Interpolates f on the unit window at the given per-coordinate degree bounds.
template <typename F>
PolyVec3 lift_vector(F&& f, const DegVec3& deg) {
  PolyVec3 out;
  for (int c = 0; c < 3; ++c) {
    const auto nodes = chebyshev_nodes_unit(deg[c] + 1);
    std::vector<double> values(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) values[k] = f(nodes[k])(c);
    out[c] = interpolate_unit(values);
  }
  return out;
}

}  // namespace detail

/// Lifts every edge of the model along the bundle by sample-and-interpolate on
/// the unit window, with the degree bounds of the translation and rotation
/// degree calculus: vertices max(n_c, deg R_c.), edge vectors deg R_c..
inline std::vector<LiftedEdge> lift_edges(const RobotModel& model, const TrajectoryBundle& traj,
                                          const LiftOptions& opts = {}) {
  model.validate();
  const TimeWindow& w = traj.window();
  const auto rdeg = rotation_degrees(traj.phi().degree, traj.theta().degree, traj.psi().degree);
  DegVec3 pos_deg;
  for (int c = 0; c < 3; ++c) pos_deg[c] = traj.position()[c].effective_degree();

  auto rot_part = [&](const Vec3& v) {
    DegVec3 d;
    for (int c = 0; c < 3; ++c) {
      for (int j = 0; j < 3; ++j) {
        if (v(j) != 0.0) d[c] = std::max(d[c], rdeg[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)]);
      }
    }
    return d;
  };
  const int mult = std::max(1, opts.degree_multiplier);
  auto position_at_unit = [&](double s) { return traj.position()(w.from_unit(s)); };

  std::vector<LiftedEdge> out;
  out.reserve(model.edge_count());
  auto lift_vertex = [&](std::size_t vi, PolyVec3& poly, DegVec3& deg) {
    const Vec3 v = model.vertices[vi];
    deg = pos_deg.max_with(rot_part(v)).scaled(mult);
    poly = detail::lift_vector([&](double s) { return Vec3(position_at_unit(s) + traj.fitted_rotation_unit(s) * v); },
                               deg);
  };
  for (std::size_t k = 0; k < model.edges.size(); ++k) {
    const auto [a, b] = model.edges[k];
    LiftedEdge le;
    le.window = w;
    le.index = k;
    lift_vertex(a, le.start, le.start_degree);
    const Vec3 d = model.vertices[b] - model.vertices[a];
    le.vector_degree = rot_part(d).scaled(mult);
    le.vector = detail::lift_vector([&](double s) { return Vec3(traj.fitted_rotation_unit(s) * d); }, le.vector_degree);
    out.push_back(std::move(le));
  }
  for (std::size_t k = 0; k < model.anchors.size(); ++k) {
    const Anchor& an = model.anchors[k];
    LiftedEdge le;
    le.window = w;
    le.index = model.edges.size() + k;
    le.anchored = true;
    le.start = PolyVec3{Polynomial{an.world_point.x()}, Polynomial{an.world_point.y()}, Polynomial{an.world_point.z()}};
    PolyVec3 vertex;
    lift_vertex(an.vertex, vertex, le.vector_degree);
    for (int c = 0; c < 3; ++c) vertex[c] -= le.start[c];
    le.vector = std::move(vertex);
    out.push_back(std::move(le));
  }
  return out;
}

}  // namespace polyccd
