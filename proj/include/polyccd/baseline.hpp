#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "polyccd/error.hpp"
#include "polyccd/geometry.hpp"
#include "polyccd/interval_set.hpp"
#include "polyccd/kinematics.hpp"
#include "polyccd/obstacles.hpp"
#include "polyccd/robot.hpp"

namespace polyccd {

inline constexpr int kGjkMaxIterations = 128;
inline constexpr double kGjkTolerance = 1e-9;

namespace detail {

struct SimplexPoint {
  Vec3 w;  // a - b
  Vec3 a;
  Vec3 b;
};

/// Closest point to the origin on the convex hull of up to four points,
/// by checking every face of the simplex. Shrinks `s` to the supporting face
/// and returns barycentric weights for it.
inline Vec3 closest_on_simplex(std::vector<SimplexPoint>& s, std::vector<double>& weights) {
  const std::size_t n = s.size();
  double best = std::numeric_limits<double>::infinity();
  Vec3 best_p = Vec3::Zero();
  unsigned best_mask = 0;
  std::vector<double> best_w;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    // Minimize |sum l_i w_i| with sum l_i = 1 over the affine hull of the subset.
    const std::size_t k = idx.size();
    std::vector<double> lam(k, 0.0);
    if (k == 1) {
      lam[0] = 1.0;
    } else {
      Eigen::MatrixXd g(k - 1, k - 1);
      Eigen::VectorXd r(k - 1);
      const Vec3 w0 = s[idx[0]].w;
      for (std::size_t i = 1; i < k; ++i) {
        const Vec3 di = s[idx[i]].w - w0;
        r(static_cast<Eigen::Index>(i - 1)) = -di.dot(w0);
        for (std::size_t j = 1; j < k; ++j) g(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1)) = di.dot(s[idx[j]].w - w0);
      }
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
      if (lu.rank() < static_cast<Eigen::Index>(k - 1)) continue;
      const Eigen::VectorXd x = lu.solve(r);
      double sum = 0.0;
      for (std::size_t i = 1; i < k; ++i) {
        lam[i] = x(static_cast<Eigen::Index>(i - 1));
        sum += lam[i];
      }
      lam[0] = 1.0 - sum;
      if (std::any_of(lam.begin(), lam.end(), [](double l) { return l < 0.0; })) continue;
    }
    Vec3 p = Vec3::Zero();
    for (std::size_t i = 0; i < k; ++i) p += lam[i] * s[idx[i]].w;
    const double d = p.squaredNorm();
    if (d < best) {
      best = d;
      best_p = p;
      best_mask = mask;
      best_w = lam;
    }
  }
  std::vector<SimplexPoint> kept;
  for (std::size_t i = 0; i < n; ++i) {
    if (best_mask & (1u << i)) kept.push_back(s[i]);
  }
  s = std::move(kept);
  weights = std::move(best_w);
  return best_p;
}

}  // namespace detail

/// Support mapping of a convex set: the point farthest along a direction.
using SupportFn = std::function<Vec3(const Vec3&)>;

/// Distance between two convex sets given by support mappings (0 when they
/// overlap). `scale` sets the absolute size of the termination tolerance.
inline double gjk_distance(const SupportFn& sa, const SupportFn& sb, double scale = 1.0) {
  const double eps = kGjkTolerance * std::max(scale, 1e-300);
  auto support = [&](const Vec3& d) {
    const Vec3 a = sa(d);
    const Vec3 b = sb(-d);
    return detail::SimplexPoint{a - b, a, b};
  };
  std::vector<detail::SimplexPoint> simplex{support(Vec3::UnitX())};
  std::vector<double> weights{1.0};
  Vec3 v = simplex[0].w;
  for (int it = 0; it < kGjkMaxIterations; ++it) {
    const double vv = v.squaredNorm();
    if (vv <= eps * eps) return 0.0;
    const detail::SimplexPoint p = support(-v);
    // Duality gap: |v|^2 - v.w bounds |v|^2 - dist^2.
    if (vv - v.dot(p.w) <= eps * std::sqrt(vv)) return std::sqrt(vv);
    simplex.push_back(p);
    v = detail::closest_on_simplex(simplex, weights);
    if (simplex.size() == 4) return 0.0;
    if (v.squaredNorm() >= vv) return std::sqrt(vv);  // no progress
  }
  return v.norm();
}

inline SupportFn point_set_support(std::span<const Vec3> pts) {
  if (pts.empty()) throw Error(ErrorCode::InvalidArgument, "gjk: empty point set");
  std::vector<Vec3> copy(pts.begin(), pts.end());
  return [copy = std::move(copy)](const Vec3& d) {
    std::size_t best = 0;
    double bd = copy[0].dot(d);
    for (std::size_t i = 1; i < copy.size(); ++i) {
      const double v = copy[i].dot(d);
      if (v > bd) {
        bd = v;
        best = i;
      }
    }
    return copy[best];
  };
}

inline double point_set_scale(std::span<const Vec3> pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return std::max(s, 1.0);
}

/// Distance between the convex hulls of two point sets.
inline double gjk_distance(std::span<const Vec3> a, std::span<const Vec3> b) {
  return gjk_distance(point_set_support(a), point_set_support(b), std::max(point_set_scale(a), point_set_scale(b)));
}

inline SupportFn ellipsoid_support(const Ellipsoid& h) {
  const Mat3 ainv = h.eigenvectors() * h.eigenvalues().cwiseInverse().asDiagonal() * h.eigenvectors().transpose();
  const Vec3 c = h.center();
  return [ainv, c](const Vec3& d) {
    const Vec3 ad = ainv * d;
    const double n = std::sqrt(std::max(d.dot(ad), 0.0));
    return n > 0.0 ? Vec3(c + ad / n) : c;
  };
}

/// Points within `radius` of a segment.
inline SupportFn capsule_support(const Edge& axis, double radius) {
  return [axis, radius](const Vec3& d) {
    const double n = d.norm();
    const Vec3 end = axis.vector().dot(d) > 0.0 ? axis.end : axis.start;
    return n > 0.0 ? Vec3(end + radius * d / n) : end;
  };
}

enum class SampleMode { GjkHull, ExactEdges };

struct SampledVerdict {
  std::vector<double> times;
  std::vector<bool> in_collision;
  IntervalSet intervals;
};

/// Grid t_s, t_s + dt, ... up to and including t_e when it lands on the grid
/// (within 1e-9 dt); t_e itself is always the last sample.
inline std::vector<double> sample_grid(const TimeWindow& w, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "sample step must be positive");
  const auto n = static_cast<std::size_t>(std::floor(w.length() / dt + 1e-9));
  std::vector<double> t;
  t.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) t.push_back(std::min(w.start() + static_cast<double>(k) * dt, w.end()));
  if (w.end() - t.back() > 1e-9 * dt) t.push_back(w.end());
  t.back() = std::min(t.back(), w.end());
  return t;
}

/// Runs of true samples as closed intervals between their first and last sample times.
inline IntervalSet mask_intervals(std::span<const double> times, const std::vector<bool>& mask) {
  std::vector<Interval> out;
  for (std::size_t i = 0; i < mask.size();) {
    if (!mask[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < mask.size() && mask[j + 1]) ++j;
    out.push_back({times[i], times[j]});
    i = j + 1;
  }
  return IntervalSet(std::move(out), 0.0);
}

/// Exact-geometry collision predicate for a world-frame edge set against one obstacle.
inline bool edges_collide(std::span<const Edge> edges, const Obstacle& obs, double margin) {
  if (const auto* e = std::get_if<Ellipsoid>(&obs)) {
    const Ellipsoid h = inflate(*e, margin);
    for (const auto& ed : edges) {
      if (dEP(Edge{h.transform(ed.start), h.transform(ed.end)}, Vec3::Zero()) <= 1.0) return true;
    }
    return false;
  }
  if (const auto* s = std::get_if<Sphere>(&obs)) {
    for (const auto& ed : edges) {
      if (dEP(ed, s->center) <= s->radius + margin) return true;
    }
    return false;
  }
  if (const auto* c = std::get_if<Cylinder>(&obs)) {
    for (const auto& ed : edges) {
      if (segment_distance(ed, c->axis()) <= c->radius + margin) return true;
    }
    return false;
  }
  const auto& mesh = std::get<Polyhedron>(obs);
  for (const auto& ed : edges) {
    for (std::size_t k = 0; k < mesh.size(); ++k) {
      if (std::holds_alternative<EdgeTriangleHit>(edge_triangle(ed, mesh.triangle(k)))) return true;
    }
  }
  return false;
}

/// Convex-hull predicate: the robot body hull (and each cable segment) against the obstacle's convex hull.
inline bool hull_collides(const RobotModel& model, std::span<const Vec3> world_vertices, const Obstacle& obs,
                          double margin) {
  SupportFn obstacle;
  double scale = point_set_scale(world_vertices);
  if (const auto* e = std::get_if<Ellipsoid>(&obs)) {
    obstacle = ellipsoid_support(inflate(*e, margin));
  } else if (const auto* s = std::get_if<Sphere>(&obs)) {
    obstacle = capsule_support(Edge{s->center, s->center}, s->radius + margin);
  } else if (const auto* c = std::get_if<Cylinder>(&obs)) {
    obstacle = capsule_support(c->axis(), c->radius + margin);
  } else {
    const auto& mesh = std::get<Polyhedron>(obs);
    obstacle = point_set_support(mesh.vertices);
    scale = std::max(scale, point_set_scale(mesh.vertices));
  }
  const double tol = 1e-12 * scale;
  if (gjk_distance(point_set_support(world_vertices), obstacle, scale) <= tol) return true;
  for (const auto& an : model.anchors) {
    const std::array<Vec3, 2> seg{an.world_point, world_vertices[an.vertex]};
    if (gjk_distance(point_set_support(seg), obstacle, scale) <= tol) return true;
  }
  return false;
}

/// Point-wise collision checking on a uniform grid, with the pose taken
/// either from the exact orientation or from the fitted polynomials.
inline SampledVerdict sampled_check(const RobotModel& model, const TrajectoryBundle& traj,
                                    std::span<const Obstacle> scene, double dt, SampleMode mode,
                                    double margin = 0.0, PoseSource pose = PoseSource::Exact) {
  model.validate();
  for (const auto& o : scene) {
    if (std::holds_alternative<Polyhedron>(o) && margin > 0.0) {
      throw Error(ErrorCode::InvalidArgument, "polyhedron obstacles take no margin");
    }
  }
  // Fold the margin into the obstacles once, outside the sample loop.
  std::vector<Obstacle> grown;
  grown.reserve(scene.size());
  for (const auto& o : scene) {
    if (const auto* e = std::get_if<Ellipsoid>(&o)) {
      grown.emplace_back(inflate(*e, margin));
    } else if (const auto* s = std::get_if<Sphere>(&o)) {
      grown.emplace_back(Sphere{s->center, s->radius + margin});
    } else if (const auto* c = std::get_if<Cylinder>(&o)) {
      grown.emplace_back(Cylinder{c->axis_start, c->axis_end, c->radius + margin});
    } else {
      grown.push_back(o);
    }
  }
  SampledVerdict v;
  v.times = sample_grid(traj.window(), dt);
  v.in_collision.assign(v.times.size(), false);
  for (std::size_t i = 0; i < v.times.size(); ++i) {
    const double t = v.times[i];
    if (mode == SampleMode::ExactEdges) {
      const auto edges = world_edges(model, traj, t, pose);
      v.in_collision[i] = std::any_of(grown.begin(), grown.end(), [&](const Obstacle& o) { return edges_collide(edges, o, 0.0); });
    } else {
      const auto verts = world_vertices(model, traj, t, pose);
      v.in_collision[i] = std::any_of(grown.begin(), grown.end(), [&](const Obstacle& o) { return hull_collides(model, verts, o, 0.0); });
    }
  }
  v.intervals = mask_intervals(v.times, v.in_collision);
  return v;
}

}  // namespace polyccd
