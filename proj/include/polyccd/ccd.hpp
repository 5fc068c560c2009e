#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <variant>
#include <vector>

#include "polyccd/error.hpp"
#include "polyccd/geometry.hpp"
#include "polyccd/inequality_solver.hpp"
#include "polyccd/interpolation.hpp"
#include "polyccd/interval_set.hpp"
#include "polyccd/kinematics.hpp"
#include "polyccd/obstacles.hpp"
#include "polyccd/robot.hpp"

namespace polyccd {

/// A condition polynomial whose samples all lie within this fraction of the
/// magnitudes that produced them is identically zero.
inline constexpr double kConditionZeroTolerance = 1e-12;

/// Union over clauses of conjunctions of sign conditions on shared
/// polynomials, all in the unit variable of `window`.
class ConditionSystem {
 public:
  explicit ConditionSystem(const TimeWindow& window, std::string label = {})
      : window_(window), label_(std::move(label)) {}

  const TimeWindow& window() const { return window_; }
  const std::string& label() const { return label_; }
  const std::vector<UnitConstraint>& polynomials() const { return polys_; }
  const std::vector<std::vector<Literal>>& clauses() const { return clauses_; }

  std::size_t add(Polynomial p) {
    polys_.emplace_back(std::move(p));
    return polys_.size() - 1;
  }
  void add_clause(std::vector<Literal> clause) { clauses_.push_back(std::move(clause)); }

  /// Appends every polynomial and clause of `other`.
  void absorb(const ConditionSystem& other) {
    const std::size_t base = polys_.size();
    polys_.insert(polys_.end(), other.polys_.begin(), other.polys_.end());
    for (auto clause : other.clauses_) {
      for (auto& lit : clause) lit.index += base;
      clauses_.push_back(std::move(clause));
    }
  }

  int clause_degree(const std::vector<Literal>& clause) const {
    int d = 0;
    for (const auto& lit : clause) d += polys_[lit.index].poly().degree_bound();
    return d;
  }

  /// Clauses run in ascending total degree and literals in ascending degree,
  /// so the cheapest early exits come first.
  IntervalSet solve(SolveStats& stats) const {
    std::vector<std::size_t> order(clauses_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return clause_degree(clauses_[a]) < clause_degree(clauses_[b]);
    });
    std::vector<Interval> unit;
    for (std::size_t k : order) {
      std::vector<Literal> clause = clauses_[k];
      std::stable_sort(clause.begin(), clause.end(), [&](const Literal& a, const Literal& b) {
        return polys_[a.index].poly().degree_bound() < polys_[b.index].poly().degree_bound();
      });
      const auto part = solve_clause_unit(clause, polys_, stats);
      unit.insert(unit.end(), part.begin(), part.end());
    }
    return map_from_unit(unit, window_);
  }

  IntervalSet solve() const {
    SolveStats stats;
    return solve(stats);
  }

 private:
  TimeWindow window_;
  std::string label_;
  std::vector<UnitConstraint> polys_;
  std::vector<std::vector<Literal>> clauses_;
};

namespace detail {

struct ScaledValue {
  double value = 0.0;
  double scale = 0.0;
};

/// Samples f at the Chebyshev nodes for `degree` and interpolates; returns the
/// zero polynomial when every sample is roundoff against its scale.
template <typename F>
Polynomial sample_condition(F&& f, int degree) {
  const auto nodes = chebyshev_nodes_unit(degree + 1);
  std::vector<double> values(nodes.size());
  double vmax = 0.0;
  double smax = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const ScaledValue sv = f(nodes[k]);
    values[k] = sv.value;
    vmax = std::max(vmax, std::abs(sv.value));
    smax = std::max(smax, sv.scale);
  }
  if (vmax <= kConditionZeroTolerance * smax) return Polynomial{0.0};
  // Samples carry cancellation error of a few eps against their scale.
  return interpolate_unit(values, 64.0 * std::numeric_limits<double>::epsilon() * smax);
}

inline int square_degree(const DegVec3& a) { return dot_degree(a, a); }

}  // namespace detail

/// dEP(e, O) <= d for an edge given relative to the point O: p_s(s) is the
/// start vertex minus O and e(s) the edge vector, both on the unit variable.
///   C1: w1 >= 0, w2 >= 0          (nearest point is the start vertex)
///   C2: w3 >= 0, -w2 >= 0, w5 >= 0 (nearest point is interior)
///   C3: w6 >= 0, -w5 >= 0          (nearest point is the end vertex)
/// with w1 = d^2 - |p_s|^2, w2 = p_s . e, w3 = d^2 |e|^2 - |e x p_s|^2,
/// w5 = w2 + e . e, w6 = d^2 - |p_s + e|^2.
template <typename PS, typename E>
ConditionSystem edge_point_system(PS&& ps, const DegVec3& dps, E&& e, const DegVec3& de, double d,
                                  const TimeWindow& window, int degree_multiplier = 1, std::string label = {}) {
  if (!(d > 0.0)) throw Error(ErrorCode::InvalidArgument, "edge_point_system: distance must be positive");
  const int m = std::max(1, degree_multiplier);
  const double d2 = d * d;
  const DegVec3 dpe = dps.max_with(de);
  const DegVec3 dx = cross_degree(de, dps);
  using detail::ScaledValue;
  using detail::sample_condition;

  ConditionSystem sys(window, std::move(label));
  const auto w1 = sys.add(sample_condition(
      [&](double s) {
        const double pp = ps(s).squaredNorm();
        return ScaledValue{d2 - pp, std::max(d2, pp)};
      },
      detail::square_degree(dps) * m));
  const auto w2 = sys.add(sample_condition(
      [&](double s) {
        const Vec3 p = ps(s), v = e(s);
        return ScaledValue{p.dot(v), p.norm() * v.norm()};
      },
      dot_degree(dps, de) * m));
  const auto w3 = sys.add(sample_condition(
      [&](double s) {
        const Vec3 p = ps(s), v = e(s);
        const double ee = v.squaredNorm();
        return ScaledValue{d2 * ee - v.cross(p).squaredNorm(), std::max(d2 * ee, ee * p.squaredNorm())};
      },
      std::max(detail::square_degree(de), detail::square_degree(dx)) * m));
  const auto w5 = sys.add(sample_condition(
      [&](double s) {
        const Vec3 p = ps(s), v = e(s);
        return ScaledValue{p.dot(v) + v.squaredNorm(), p.norm() * v.norm() + v.squaredNorm()};
      },
      std::max(dot_degree(dps, de), detail::square_degree(de)) * m));
  const auto w6 = sys.add(sample_condition(
      [&](double s) {
        const double pp = (ps(s) + e(s)).squaredNorm();
        return ScaledValue{d2 - pp, std::max(d2, pp)};
      },
      detail::square_degree(dpe) * m));
  sys.add_clause({{w1, 1}, {w2, 1}});
  sys.add_clause({{w3, 1}, {w2, -1}, {w5, 1}});
  sys.add_clause({{w6, 1}, {w5, -1}});
  return sys;
}

/// Edge-point system of a lifted edge against the origin of its frame.
inline ConditionSystem edge_point_system(const LiftedEdge& le, double d, int degree_multiplier = 1) {
  return edge_point_system([&](double s) { return le.start(s); }, le.start_degree,
                           [&](double s) { return le.vector(s); }, le.vector_degree, d, le.window, degree_multiplier,
                           "edge " + std::to_string(le.index));
}

namespace detail {

/// Per-coordinate degrees of M v for a constant matrix M.
inline DegVec3 linear_map_degree(const Mat3& m, const DegVec3& v) {
  DegVec3 out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (m(r, c) != 0.0) out[r] = std::max(out[r], v[c]);
    }
  }
  return out;
}

inline PolyVec3 linear_map(const Mat3& m, const PolyVec3& v, const Vec3& offset) {
  PolyVec3 out;
  for (int r = 0; r < 3; ++r) {
    Polynomial acc{0.0};
    for (int c = 0; c < 3; ++c) {
      if (m(r, c) != 0.0) acc += m(r, c) * v[c];
    }
    acc += Polynomial{offset(r)};
    out[r] = std::move(acc);
  }
  return out;
}

}  // namespace detail

/// The lifted edge mapped into the unit-sphere frame of h, coefficient by coefficient.
inline LiftedEdge transform_edge(const LiftedEdge& le, const Ellipsoid& h) {
  const Mat3& l = h.affine_matrix();
  LiftedEdge out = le;
  out.start = detail::linear_map(l, le.start, -(l * h.center()));
  out.vector = detail::linear_map(l, le.vector, Vec3::Zero());
  out.start_degree = detail::linear_map_degree(l, le.start_degree);
  out.vector_degree = detail::linear_map_degree(l, le.vector_degree);
  return out;
}

/// Edge-ellipsoid contact: the edge-point system at distance 1 in the ellipsoid's unit frame.
inline ConditionSystem edge_ellipsoid_system(const LiftedEdge& le, const Ellipsoid& h, int degree_multiplier = 1) {
  return edge_point_system(transform_edge(le, h), 1.0, degree_multiplier);
}

/// dEE(e_i, e_j) <= radius for a moving edge e_i against the static axis e_j.
///
/// Interior case: u1 >= 0, u2 >= 0, u0 - u1 >= 0, u0 - u2 >= 0, d^2 u0 - u3^2 >= 0
/// with u0 = det M, M = [e_i, -e_j, -(e_i x e_j)], and u1..u3 the Cramer
/// numerators for t_i, t_j, t_p. Every boundary case is an endpoint-to-segment
/// distance, covered by the four edge-point systems of the endpoints. When
/// e_i stays parallel to the axis (u0 identically zero) only the interior case drops.
inline ConditionSystem edge_cylinder_system(const LiftedEdge& le, const Cylinder& cyl, double radius,
                                            int degree_multiplier = 1) {
  cyl.validate();
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "edge_cylinder_system: radius must be positive");
  const int m = std::max(1, degree_multiplier);
  const Vec3 js = cyl.axis_start;
  const Vec3 je = cyl.axis_end;
  const Vec3 ej = je - js;
  const DegVec3 zero;
  const DegVec3 dei = le.vector_degree;
  const DegVec3 deij = le.start_degree;
  const DegVec3 dcross = cross_degree(dei, zero);
  using detail::ScaledValue;
  using detail::sample_condition;

  ConditionSystem sys(le.window, "edge " + std::to_string(le.index));
  auto geometry = [&](double s) {
    const Vec3 ei = le.vector(s);
    const Vec3 eij = js - le.start(s);
    const Vec3 c = ei.cross(ej);
    // |c| |ei| |ej| bounds every Cramer determinant up to the |eij| factor.
    return std::tuple{ei, eij, c, ei.norm() * ej.norm()};
  };
  const Polynomial u0 = sample_condition(
      [&](double s) {
        const auto [ei, eij, c, n] = geometry(s);
        return ScaledValue{det3(ei, -ej, -c), n * n};
      },
      det_degree(dei, zero, dcross) * m);
  if (!u0.is_zero()) {
    const Polynomial u1 = sample_condition(
        [&](double s) {
          const auto [ei, eij, c, n] = geometry(s);
          return ScaledValue{det3(eij, -ej, -c), eij.norm() * ej.norm() * c.norm()};
        },
        det_degree(deij, zero, dcross) * m);
    const Polynomial u2 = sample_condition(
        [&](double s) {
          const auto [ei, eij, c, n] = geometry(s);
          return ScaledValue{det3(ei, eij, -c), ei.norm() * eij.norm() * c.norm()};
        },
        det_degree(dei, deij, dcross) * m);
    const int du3 = det_degree(dei, zero, deij);
    const Polynomial u3sq_gap = sample_condition(
        [&](double s) {
          const auto [ei, eij, c, n] = geometry(s);
          const double u3 = det3(ei, -ej, eij);
          const double a = radius * radius * det3(ei, -ej, -c);
          return ScaledValue{a - u3 * u3, std::max(std::abs(a), n * n * eij.squaredNorm())};
        },
        std::max(det_degree(dei, zero, dcross), 2 * du3) * m);
    const auto i1 = sys.add(u1);
    const auto i2 = sys.add(u2);
    const auto i01 = sys.add(u0 - u1);
    const auto i02 = sys.add(u0 - u2);
    const auto i3 = sys.add(u3sq_gap);
    sys.add_clause({{i1, 1}, {i2, 1}, {i01, 1}, {i02, 1}, {i3, 1}});
  }

  auto ps_axis_minus = [&](auto&& vertex, const DegVec3& dv) {
    return edge_point_system([&](double s) { return Vec3(js - vertex(s)); }, dv, [&](double) { return ej; }, zero,
                             radius, le.window, m);
  };
  auto ps_edge_minus = [&](const Vec3& point) {
    return edge_point_system([&](double s) { return Vec3(le.start(s) - point); }, le.start_degree,
                             [&](double s) { return le.vector(s); }, le.vector_degree, radius, le.window, m);
  };
  sys.absorb(ps_axis_minus([&](double s) { return le.start(s); }, le.start_degree));
  sys.absorb(ps_axis_minus([&](double s) { return Vec3(le.start(s) + le.vector(s)); },
                           le.start_degree.max_with(le.vector_degree)));
  sys.absorb(ps_edge_minus(js));
  sys.absorb(ps_edge_minus(je));
  return sys;
}

/// Edge-triangle intersection, C+ (v3 >= 0) or C- (v3 <= 0):
///   +-v3 >= 0, +-v0 >= 0, +-(v3 - v0) >= 0, +-v1 >= 0, +-v2 >= 0, +-(v3 - v1 - v2) >= 0
/// with Q k = e0, Q = [-e, e1, e2], e0 = V_s - V0, and v0..v3 as in edge_triangle_params.
/// Empty when the edge stays parallel to the plane (v3 identically zero).
inline ConditionSystem edge_triangle_system(const LiftedEdge& le, const Triangle& tri, int degree_multiplier = 1) {
  if (tri.degenerate()) throw Error(ErrorCode::InvalidArgument, "edge_triangle_system: degenerate triangle");
  const int m = std::max(1, degree_multiplier);
  const Vec3 e1 = tri.e1();
  const Vec3 e2 = tri.e2();
  const double area = tri.twice_area();
  const DegVec3 zero;
  const DegVec3 de = le.vector_degree;
  const DegVec3 de0 = le.start_degree;
  using detail::ScaledValue;
  using detail::sample_condition;

  ConditionSystem sys(le.window, "edge " + std::to_string(le.index));
  const Polynomial v3 = sample_condition(
      [&](double s) {
        const Vec3 e = le.vector(s);
        return ScaledValue{det3(-e, e1, e2), e.norm() * area};
      },
      det_degree(de, zero, zero) * m);
  if (v3.is_zero()) return sys;
  const Polynomial v0 = sample_condition(
      [&](double s) {
        const Vec3 e0 = le.start(s) - tri.v0;
        return ScaledValue{det3(e0, e1, e2), e0.norm() * area};
      },
      det_degree(de0, zero, zero) * m);
  auto cramer = [&](bool first) {
    return sample_condition(
        [&](double s) {
          const Vec3 e = le.vector(s);
          const Vec3 e0 = le.start(s) - tri.v0;
          const double v = first ? det3(-e, e0, e2) : det3(-e, e1, e0);
          return ScaledValue{v, e.norm() * e0.norm() * std::max(e1.norm(), e2.norm())};
        },
        det_degree(de, de0, zero) * m);
  };
  const Polynomial v1 = cramer(true);
  const Polynomial v2 = cramer(false);
  const std::size_t idx[6] = {sys.add(v3), sys.add(v0), sys.add(v3 - v0), sys.add(v1), sys.add(v2),
                              sys.add(v3 - v1 - v2)};
  for (int sign : {1, -1}) {
    std::vector<Literal> clause;
    for (std::size_t i : idx) clause.push_back({i, sign});
    sys.add_clause(std::move(clause));
  }
  return sys;
}

struct CcdOptions {
  /// Worker threads for check_scene; 0 picks the hardware concurrency.
  int threads = 1;
  /// Multiplies every lift and condition degree bound.
  int degree_multiplier = 1;
  /// Skips (edge, primitive) pairs whose swept boxes cannot come within range.
  bool bounding_reject = true;
  /// Fuses polyhedron gaps whose midpoint has the robot origin inside the mesh.
  bool fuse_interior = false;
};

namespace detail {

struct Box3 {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void add(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  void add(const Box3& b) {
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  Box3 grown(double r) const { return {lo - Vec3::Constant(r), hi + Vec3::Constant(r)}; }
  bool overlaps(const Box3& b) const { return (lo.array() <= b.hi.array()).all() && (b.lo.array() <= hi.array()).all(); }
  /// Distance from the origin to the box.
  double distance_to_origin() const {
    const Vec3 c = lo.cwiseMax(Vec3::Zero()).cwiseMin(hi);
    return c.norm();
  }
};

/// Range enclosure of a unit-variable polynomial: c0 -+ sum_{k>=1} |c_k|.
inline Box3 unit_range(const PolyVec3& p) {
  Box3 b;
  for (int c = 0; c < 3; ++c) {
    double r = 0.0;
    for (int k = 1; k <= p[c].degree_bound(); ++k) r += std::abs(p[c][static_cast<std::size_t>(k)]);
    b.lo(c) = p[c][0] - r;
    b.hi(c) = p[c][0] + r;
  }
  return b;
}

inline Box3 swept_box(const LiftedEdge& le) {
  PolyVec3 end;
  for (int c = 0; c < 3; ++c) end[c] = le.start[c] + le.vector[c];
  Box3 b = unit_range(le.start);
  b.add(unit_range(end));
  return b;
}

inline Box3 triangle_box(const Triangle& t) {
  Box3 b;
  b.add(t.v0);
  b.add(t.v1);
  b.add(t.v2);
  return b;
}

inline double box_slack(const Box3& b) { return 1e-9 * std::max(1.0, b.hi.cwiseAbs().cwiseMax(b.lo.cwiseAbs()).maxCoeff()); }

}  // namespace detail

/// Obstacle after applying the margin: spheres become ellipsoids, ellipsoids
/// are inflated, cylinders grow their radius.
struct PreparedObstacle {
  std::variant<Ellipsoid, Cylinder, Polyhedron> shape;
};

inline PreparedObstacle prepare_obstacle(const Obstacle& obs, double margin) {
  if (!(margin >= 0.0) || !std::isfinite(margin)) throw Error(ErrorCode::InvalidArgument, "margin must be non-negative");
  if (const auto* e = std::get_if<Ellipsoid>(&obs)) return {inflate(*e, margin)};
  if (const auto* s = std::get_if<Sphere>(&obs)) return {sphere_to_ellipsoid({s->center, s->radius + margin})};
  if (const auto* c = std::get_if<Cylinder>(&obs)) {
    c->validate();
    return {Cylinder{c->axis_start, c->axis_end, c->radius + margin}};
  }
  const auto& p = std::get<Polyhedron>(obs);
  p.validate();
  if (margin > 0.0) {
    throw Error(ErrorCode::InvalidArgument,
                "polyhedron obstacles take no margin (edge-triangle intrusion only); dilate the mesh instead");
  }
  return {p};
}

/// Number of independent primitives: triangles for meshes, one otherwise.
inline std::size_t primitive_count(const PreparedObstacle& o) {
  if (const auto* p = std::get_if<Polyhedron>(&o.shape)) return p->size();
  return 1;
}

/// Collision set of one lifted edge against one primitive of an obstacle.
inline IntervalSet check_edge_primitive(const LiftedEdge& le, const PreparedObstacle& obs, std::size_t primitive,
                                        const CcdOptions& opts, SolveStats& stats) {
  const int m = std::max(1, opts.degree_multiplier);
  if (const auto* h = std::get_if<Ellipsoid>(&obs.shape)) {
    const LiftedEdge te = transform_edge(le, *h);
    if (opts.bounding_reject) {
      const auto box = detail::swept_box(te);
      if (box.distance_to_origin() > 1.0 + detail::box_slack(box)) return {};
    }
    return edge_point_system(te, 1.0, m).solve(stats);
  }
  if (const auto* c = std::get_if<Cylinder>(&obs.shape)) {
    if (opts.bounding_reject) {
      detail::Box3 cb;
      cb.add(c->axis_start);
      cb.add(c->axis_end);
      const auto box = detail::swept_box(le);
      if (!box.overlaps(cb.grown(c->radius + detail::box_slack(box)))) return {};
    }
    return edge_cylinder_system(le, *c, c->radius, m).solve(stats);
  }
  const Triangle tri = std::get<Polyhedron>(obs.shape).triangle(primitive);
  if (opts.bounding_reject) {
    const auto box = detail::swept_box(le);
    if (!box.overlaps(detail::triangle_box(tri).grown(detail::box_slack(box)))) return {};
  }
  return edge_triangle_system(le, tri, m).solve(stats);
}

/// Fills gaps of a polyhedron's collision set whose midpoint has the robot
/// reference point inside the mesh.
inline IntervalSet fuse_interior_gaps(const IntervalSet& set, const Polyhedron& mesh, const TrajectoryBundle& traj) {
  if (set.size() < 2) return set;
  std::vector<Interval> out{set[0]};
  for (std::size_t k = 1; k < set.size(); ++k) {
    const double mid = 0.5 * (out.back().hi + set[k].lo);
    if (mesh.contains(traj.position()(mid))) {
      out.back().hi = set[k].hi;
    } else {
      out.push_back(set[k]);
    }
  }
  return IntervalSet(std::move(out));
}

struct CcdReport {
  std::vector<IntervalSet> per_obstacle;
  /// per_edge[obstacle][edge].
  std::vector<std::vector<IntervalSet>> per_edge;
  IntervalSet overall;
  std::optional<double> toi;
  SolveStats stats;
};

/// Checks a lifted robot against a scene. Work is split over (edge, obstacle,
/// primitive) triples; results are reduced in a fixed order.
inline CcdReport check_lifted_scene(std::span<const LiftedEdge> edges, const TrajectoryBundle& traj,
                                    std::span<const Obstacle> scene, double margin, const CcdOptions& opts = {}) {
  std::vector<PreparedObstacle> prepared;
  prepared.reserve(scene.size());
  for (const auto& o : scene) prepared.push_back(prepare_obstacle(o, margin));

  struct Task {
    std::size_t edge, obstacle, primitive;
  };
  std::vector<Task> tasks;
  for (std::size_t o = 0; o < prepared.size(); ++o) {
    const std::size_t np = primitive_count(prepared[o]);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      for (std::size_t p = 0; p < np; ++p) tasks.push_back({e, o, p});
    }
  }
  std::vector<IntervalSet> results(tasks.size());
  std::vector<SolveStats> stats(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      try {
        const Task& t = tasks[k];
        results[k] = check_edge_primitive(edges[t.edge], prepared[t.obstacle], t.primitive, opts, stats[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  int threads = opts.threads > 0 ? opts.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(1, tasks.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  CcdReport report;
  report.per_obstacle.resize(prepared.size());
  report.per_edge.assign(prepared.size(), std::vector<IntervalSet>(edges.size()));
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const Task& t = tasks[k];
    report.stats += stats[k];
    if (results[k].empty()) continue;
    auto& pe = report.per_edge[t.obstacle][t.edge];
    pe = pe.unite(results[k]);
  }
  for (std::size_t o = 0; o < prepared.size(); ++o) {
    IntervalSet all;
    for (const auto& s : report.per_edge[o]) all = all.unite(s);
    if (opts.fuse_interior) {
      if (const auto* mesh = std::get_if<Polyhedron>(&prepared[o].shape)) all = fuse_interior_gaps(all, *mesh, traj);
    }
    report.per_obstacle[o] = all;
    report.overall = report.overall.unite(all);
  }
  if (!report.overall.empty()) report.toi = report.overall.first();
  return report;
}

inline std::vector<LiftedEdge> lift_for_ccd(const RobotModel& model, const TrajectoryBundle& traj, const CcdOptions& opts) {
  return lift_edges(model, traj, LiftOptions{std::max(1, opts.degree_multiplier)});
}

inline CcdReport check_scene(const RobotModel& model, const TrajectoryBundle& traj, std::span<const Obstacle> scene,
                             double margin, const CcdOptions& opts = {}) {
  const auto edges = lift_for_ccd(model, traj, opts);
  return check_lifted_scene(edges, traj, scene, margin, opts);
}

inline IntervalSet check_robot_obstacle(const RobotModel& model, const TrajectoryBundle& traj, const Obstacle& obs,
                                        double margin, const CcdOptions& opts = {}) {
  return check_scene(model, traj, std::span<const Obstacle>(&obs, 1), margin, opts).overall;
}

}  // namespace polyccd
