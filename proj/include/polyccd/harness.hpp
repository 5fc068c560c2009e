#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "polyccd/baseline.hpp"
#include "polyccd/ccd.hpp"
#include "polyccd/scenes.hpp"

namespace polyccd {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSceneFormat = "polyccd-scene/1";
inline constexpr const char* kReportFormat = "polyccd-report/1";
inline constexpr const char* kTrajectoryFormat = "polyccd-trajectory/1";

enum class CoefficientOrder { ConstantFirst, HighestFirst };

inline const char* to_string(CoefficientOrder o) {
  return o == CoefficientOrder::ConstantFirst ? "constant_first" : "highest_first";
}

enum class OrientationMode { Constant, ExplicitEuler, QuadrotorFlat, AgvHeading };

inline const char* to_string(OrientationMode m) {
  switch (m) {
    case OrientationMode::Constant: return "constant";
    case OrientationMode::ExplicitEuler: return "explicit_euler";
    case OrientationMode::QuadrotorFlat: return "quadrotor_flat";
    case OrientationMode::AgvHeading: return "agv_heading";
  }
  return "constant";
}

/// Orientation source of a scene trajectory. Only the fields of `mode` are used.
struct OrientationSpec {
  OrientationMode mode = OrientationMode::Constant;
  Vec3 angles = Vec3::Zero();  // constant
  PolyVec3 euler;              // explicit_euler
  Polynomial yaw{0.0};         // quadrotor_flat
  double gravity = kDefaultGravity;

  friend bool operator==(const OrientationSpec& a, const OrientationSpec& b) {
    if (a.mode != b.mode) return false;
    switch (a.mode) {
      case OrientationMode::Constant: return a.angles == b.angles;
      case OrientationMode::ExplicitEuler:
        return a.euler.x == b.euler.x && a.euler.y == b.euler.y && a.euler.z == b.euler.z;
      case OrientationMode::QuadrotorFlat: return a.yaw == b.yaw && a.gravity == b.gravity;
      case OrientationMode::AgvHeading: return true;
    }
    return false;
  }
};

struct TrajectorySpec {
  TimeWindow window{0.0, 1.0};
  PolyVec3 position;
  OrientationSpec orientation;
  FitOptions fit;

  friend bool operator==(const TrajectorySpec& a, const TrajectorySpec& b) {
    return a.window == b.window && a.position.x == b.position.x && a.position.y == b.position.y &&
           a.position.z == b.position.z && a.orientation == b.orientation && a.fit.max_error == b.fit.max_error &&
           a.fit.norm_slack == b.fit.norm_slack && a.fit.min_degree == b.fit.min_degree &&
           a.fit.max_degree == b.fit.max_degree && a.fit.fit_samples == b.fit.fit_samples &&
           a.fit.validation_samples == b.fit.validation_samples;
  }
};

/// Robot given either as a box shorthand or as explicit vertices and edges.
struct RobotSpec {
  std::optional<Vec3> box;
  RobotModel model;

  RobotModel build() const { return box ? box_model((*box)(0), (*box)(1), (*box)(2)) : model; }

  friend bool operator==(const RobotSpec& a, const RobotSpec& b) {
    if (a.box.has_value() != b.box.has_value()) return false;
    if (a.box) return *a.box == *b.box;
    if (a.model.vertices != b.model.vertices || a.model.edges != b.model.edges) return false;
    if (a.model.anchors.size() != b.model.anchors.size()) return false;
    for (std::size_t k = 0; k < a.model.anchors.size(); ++k) {
      if (a.model.anchors[k].world_point != b.model.anchors[k].world_point ||
          a.model.anchors[k].vertex != b.model.anchors[k].vertex) {
        return false;
      }
    }
    return true;
  }
};

inline bool same_obstacle(const Obstacle& a, const Obstacle& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return x.center() == y.center() && x.matrix() == y.matrix();
        } else if constexpr (std::is_same_v<T, Sphere>) {
          return x.center == y.center && x.radius == y.radius;
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return x.axis_start == y.axis_start && x.axis_end == y.axis_end && x.radius == y.radius;
        } else {
          return x.vertices == y.vertices && x.triangles == y.triangles;
        }
      },
      a);
}

/// Everything a `check` run needs, in the form it was written.
struct SceneFile {
  RobotSpec robot;
  TrajectorySpec trajectory;
  std::vector<Obstacle> obstacles;
  std::vector<std::string> names;
  double margin = 0.0;
  CcdOptions solver;

  TrajectoryBundle build_trajectory() const {
    const auto& t = trajectory;
    switch (t.orientation.mode) {
      case OrientationMode::Constant:
        return TrajectoryBundle::constant_orientation(t.position, t.window, t.orientation.angles(0),
                                                      t.orientation.angles(1), t.orientation.angles(2));
      case OrientationMode::ExplicitEuler:
        return TrajectoryBundle::explicit_euler(t.position, t.window, t.orientation.euler, t.fit);
      case OrientationMode::QuadrotorFlat:
        return TrajectoryBundle::quadrotor_flat(t.position, t.window, t.orientation.yaw, t.orientation.gravity, t.fit);
      case OrientationMode::AgvHeading: return TrajectoryBundle::agv_heading(t.position, t.window, t.fit);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown orientation mode");
  }

  Scenario build() const { return Scenario{robot.build(), build_trajectory(), obstacles, margin}; }

  std::string name(std::size_t k) const {
    return k < names.size() && !names[k].empty() ? names[k] : "obstacle " + std::to_string(k + 1);
  }

  friend bool operator==(const SceneFile& a, const SceneFile& b) {
    if (!(a.robot == b.robot && a.trajectory == b.trajectory && a.names == b.names && a.margin == b.margin)) {
      return false;
    }
    if (a.solver.threads != b.solver.threads || a.solver.degree_multiplier != b.solver.degree_multiplier ||
        a.solver.bounding_reject != b.solver.bounding_reject || a.solver.fuse_interior != b.solver.fuse_interior) {
      return false;
    }
    if (a.obstacles.size() != b.obstacles.size()) return false;
    for (std::size_t k = 0; k < a.obstacles.size(); ++k) {
      if (!same_obstacle(a.obstacles[k], b.obstacles[k])) return false;
    }
    return true;
  }
};

// ---------------------------------------------------------------------------
// Reading. Every schema error names the JSON path of the offending field.

namespace detail {

class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::Schema, (path_.empty() ? std::string("$") : path_) + ": " + what);
  }

  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }

  Reader at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    auto it = j_.find(key);
    if (it == j_.end()) throw Error(ErrorCode::Schema, child_path(key) + ": missing required field");
    return Reader(*it, child_path(key));
  }
  Reader at(std::size_t i) const { return Reader(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }
  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  std::size_t size() const { return j_.size(); }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  double number(const std::string& key, double fallback) const { return has(key) ? at(key).number() : fallback; }
  std::size_t index() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<long long>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return j_.get<std::size_t>();
  }
  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const Reader r = at(key);
    if (!r.j_.is_number_integer()) r.fail("expected an integer");
    return r.j_.get<int>();
  }
  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Reader r = at(key);
    if (!r.j_.is_boolean()) r.fail("expected true or false");
    return r.j_.get<bool>();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  Reader array() const {
    if (!j_.is_array()) fail("expected an array");
    return *this;
  }
  Vec3 vec3() const {
    if (!j_.is_array() || j_.size() != 3) fail("expected an array of 3 numbers");
    return Vec3(at(0).number(), at(1).number(), at(2).number());
  }
  Mat3 mat3() const {
    if (!j_.is_array() || j_.size() != 3) fail("expected a 3x3 array");
    Mat3 m;
    for (int r = 0; r < 3; ++r) m.row(r) = at(static_cast<std::size_t>(r)).vec3().transpose();
    return m;
  }
  Polynomial polynomial(CoefficientOrder order) const {
    if (!j_.is_array() || j_.empty()) fail("expected a nonempty array of coefficients");
    std::vector<double> c(j_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = at(i).number();
    if (order == CoefficientOrder::HighestFirst) std::reverse(c.begin(), c.end());
    return Polynomial(std::move(c));
  }

 private:
  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json& j_;
  std::string path_;
};

template <typename T>
T rethrow_as_schema(const std::string& path, auto&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw;
    throw Error(ErrorCode::Schema, path + ": " + e.what());
  }
}

inline CoefficientOrder read_order(const Reader& root) {
  if (!root.has("coefficient_order")) return CoefficientOrder::ConstantFirst;
  const Reader r = root.at("coefficient_order");
  const std::string s = r.string();
  if (s == "constant_first") return CoefficientOrder::ConstantFirst;
  if (s == "highest_first") return CoefficientOrder::HighestFirst;
  r.fail("expected \"constant_first\" or \"highest_first\"");
}

inline PolyVec3 read_polyvec(const Reader& r, CoefficientOrder order) {
  return {r.at("x").polynomial(order), r.at("y").polynomial(order), r.at("z").polynomial(order)};
}

inline RobotSpec read_robot(const Reader& r) {
  RobotSpec spec;
  if (r.has("box")) {
    spec.box = r.at("box").vec3();
    if (!((*spec.box).minCoeff() > 0.0)) r.at("box").fail("box sizes must be positive");
    return spec;
  }
  const Reader verts = r.at("vertices").array();
  for (std::size_t i = 0; i < verts.size(); ++i) spec.model.vertices.push_back(verts.at(i).vec3());
  const Reader edges = r.at("edges").array();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Reader e = edges.at(i);
    if (!e.json().is_array() || e.size() != 2) e.fail("expected a vertex index pair");
    spec.model.edges.emplace_back(e.at(0).index(), e.at(1).index());
  }
  if (r.has("anchors")) {
    const Reader anchors = r.at("anchors").array();
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      const Reader a = anchors.at(i);
      spec.model.anchors.push_back({a.at("world").vec3(), a.at("vertex").index()});
    }
  }
  rethrow_as_schema<int>(r.path(), [&] {
    spec.model.validate();
    return 0;
  });
  return spec;
}

inline FitOptions read_fit(const Reader& r) {
  FitOptions f;
  if (!r.has("fit")) return f;
  const Reader o = r.at("fit");
  f.max_error = o.number("max_error_deg", f.max_error / kDegree) * kDegree;
  f.norm_slack = o.number("norm_slack", f.norm_slack);
  f.min_degree = o.integer("min_degree", f.min_degree);
  f.max_degree = o.integer("max_degree", f.max_degree);
  f.fit_samples = o.integer("fit_samples", f.fit_samples);
  f.validation_samples = o.integer("validation_samples", f.validation_samples);
  return f;
}

inline TrajectorySpec read_trajectory(const Reader& r, CoefficientOrder order) {
  TrajectorySpec t;
  const Reader w = r.at("window");
  if (!w.json().is_array() || w.size() != 2) w.fail("expected [t_s, t_e]");
  const double ts = w.at(0).number(), te = w.at(1).number();
  if (!(ts < te)) w.fail("window must satisfy t_s < t_e");
  t.window = TimeWindow(ts, te);
  t.position = read_polyvec(r.at("position"), order);
  t.fit = read_fit(r);
  const Reader o = r.at("orientation");
  const std::string mode = o.at("mode").string();
  if (mode == "constant") {
    t.orientation.mode = OrientationMode::Constant;
    t.orientation.angles = Vec3(o.number("phi", 0.0), o.number("theta", 0.0), o.number("psi", 0.0));
  } else if (mode == "explicit_euler") {
    t.orientation.mode = OrientationMode::ExplicitEuler;
    t.orientation.euler = {o.at("phi").polynomial(order), o.at("theta").polynomial(order),
                           o.at("psi").polynomial(order)};
  } else if (mode == "quadrotor_flat") {
    t.orientation.mode = OrientationMode::QuadrotorFlat;
    t.orientation.yaw = o.has("psi") ? o.at("psi").polynomial(order) : Polynomial{0.0};
    t.orientation.gravity = o.number("gravity", kDefaultGravity);
  } else if (mode == "agv_heading") {
    t.orientation.mode = OrientationMode::AgvHeading;
  } else {
    o.at("mode").fail("unknown orientation mode \"" + mode + "\"");
  }
  return t;
}

inline Obstacle read_obstacle(const Reader& r) {
  const std::string type = r.at("type").string();
  return rethrow_as_schema<Obstacle>(r.path(), [&]() -> Obstacle {
    if (type == "ellipsoid") {
      if (r.has("matrix")) return Ellipsoid(r.at("center").vec3(), r.at("matrix").mat3());
      return Ellipsoid::from_axes(r.at("center").vec3(), r.at("axes").mat3().transpose(),
                                  r.at("semi_axes").vec3());
    }
    if (type == "sphere") {
      Sphere s{r.at("center").vec3(), r.at("radius").number()};
      s.validate();
      return s;
    }
    if (type == "cylinder") {
      Cylinder c{r.at("start").vec3(), r.at("end").vec3(), r.at("radius").number()};
      c.validate();
      return c;
    }
    if (type == "box") return box_mesh(r.at("center").vec3(), r.at("size").vec3());
    if (type == "polyhedron") {
      Polyhedron p;
      const Reader v = r.at("vertices").array();
      for (std::size_t i = 0; i < v.size(); ++i) p.vertices.push_back(v.at(i).vec3());
      const Reader tris = r.at("triangles").array();
      for (std::size_t i = 0; i < tris.size(); ++i) {
        const Reader t = tris.at(i);
        if (!t.json().is_array() || t.size() != 3) t.fail("expected three vertex indices");
        p.triangles.push_back({t.at(0).index(), t.at(1).index(), t.at(2).index()});
      }
      p.validate();
      return p;
    }
    r.at("type").fail("unknown obstacle type \"" + type + "\"");
  });
}

}  // namespace detail

inline SceneFile scene_from_json(const Json& j) {
  const detail::Reader root(j, "");
  if (!j.is_object()) root.fail("scene must be a JSON object");
  if (root.has("format") && root.at("format").string() != kSceneFormat) {
    root.at("format").fail(std::string("expected \"") + kSceneFormat + "\"");
  }
  const CoefficientOrder order = detail::read_order(root);
  SceneFile s;
  s.robot = detail::read_robot(root.at("robot"));
  s.trajectory = detail::read_trajectory(root.at("trajectory"), order);
  if (root.has("obstacles")) {
    const detail::Reader obs = root.at("obstacles").array();
    for (std::size_t i = 0; i < obs.size(); ++i) {
      s.obstacles.push_back(detail::read_obstacle(obs.at(i)));
      s.names.push_back(obs.at(i).has("name") ? obs.at(i).at("name").string() : std::string());
    }
  }
  s.margin = root.number("margin", 0.0);
  if (!(s.margin >= 0.0)) root.at("margin").fail("margin must be non-negative");
  if (root.has("solver")) {
    const detail::Reader o = root.at("solver");
    s.solver.threads = o.integer("threads", s.solver.threads);
    s.solver.degree_multiplier = o.integer("degree_multiplier", s.solver.degree_multiplier);
    s.solver.bounding_reject = o.boolean("bounding_reject", s.solver.bounding_reject);
    s.solver.fuse_interior = o.boolean("fuse_interior", s.solver.fuse_interior);
    if (s.solver.threads < 0) o.at("threads").fail("must be >= 0");
    if (s.solver.degree_multiplier < 1) o.at("degree_multiplier").fail("must be >= 1");
  }
  return s;
}

inline SceneFile parse_scene(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Schema, std::string("$: not valid JSON: ") + e.what());
  }
  return scene_from_json(j);
}

// ---------------------------------------------------------------------------
// Writing.

namespace detail {

inline Json vec_json(const Vec3& v) { return Json::array({v(0), v(1), v(2)}); }

inline Json poly_json(const Polynomial& p, CoefficientOrder order) {
  std::vector<double> c = p.coeff_vector();
  if (order == CoefficientOrder::HighestFirst) std::reverse(c.begin(), c.end());
  return Json(c);
}

inline Json polyvec_json(const PolyVec3& p, CoefficientOrder order) {
  Json j;
  j["x"] = poly_json(p.x, order);
  j["y"] = poly_json(p.y, order);
  j["z"] = poly_json(p.z, order);
  return j;
}

inline Json obstacle_json(const Obstacle& o) {
  return std::visit(
      [](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        Json j;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          j["type"] = "ellipsoid";
          j["center"] = vec_json(x.center());
          j["matrix"] = Json::array();
          for (int r = 0; r < 3; ++r) j["matrix"].push_back(vec_json(x.matrix().row(r).transpose()));
        } else if constexpr (std::is_same_v<T, Sphere>) {
          j["type"] = "sphere";
          j["center"] = vec_json(x.center);
          j["radius"] = x.radius;
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          j["type"] = "cylinder";
          j["start"] = vec_json(x.axis_start);
          j["end"] = vec_json(x.axis_end);
          j["radius"] = x.radius;
        } else {
          j["type"] = "polyhedron";
          j["vertices"] = Json::array();
          for (const auto& v : x.vertices) j["vertices"].push_back(vec_json(v));
          j["triangles"] = Json::array();
          for (const auto& t : x.triangles) j["triangles"].push_back(Json::array({t[0], t[1], t[2]}));
        }
        return j;
      },
      o);
}

}  // namespace detail

inline Json scene_to_json(const SceneFile& s, CoefficientOrder order = CoefficientOrder::ConstantFirst) {
  using namespace detail;
  Json j;
  j["format"] = kSceneFormat;
  j["coefficient_order"] = to_string(order);
  Json robot;
  if (s.robot.box) {
    robot["box"] = vec_json(*s.robot.box);
  } else {
    robot["vertices"] = Json::array();
    for (const auto& v : s.robot.model.vertices) robot["vertices"].push_back(vec_json(v));
    robot["edges"] = Json::array();
    for (const auto& [a, b] : s.robot.model.edges) robot["edges"].push_back(Json::array({a, b}));
    if (!s.robot.model.anchors.empty()) {
      robot["anchors"] = Json::array();
      for (const auto& an : s.robot.model.anchors) {
        robot["anchors"].push_back({{"world", vec_json(an.world_point)}, {"vertex", an.vertex}});
      }
    }
  }
  j["robot"] = robot;

  const auto& t = s.trajectory;
  Json traj;
  traj["window"] = Json::array({t.window.start(), t.window.end()});
  traj["position"] = polyvec_json(t.position, order);
  Json o;
  o["mode"] = to_string(t.orientation.mode);
  switch (t.orientation.mode) {
    case OrientationMode::Constant:
      o["phi"] = t.orientation.angles(0);
      o["theta"] = t.orientation.angles(1);
      o["psi"] = t.orientation.angles(2);
      break;
    case OrientationMode::ExplicitEuler:
      o["phi"] = poly_json(t.orientation.euler.x, order);
      o["theta"] = poly_json(t.orientation.euler.y, order);
      o["psi"] = poly_json(t.orientation.euler.z, order);
      break;
    case OrientationMode::QuadrotorFlat:
      o["psi"] = poly_json(t.orientation.yaw, order);
      o["gravity"] = t.orientation.gravity;
      break;
    case OrientationMode::AgvHeading: break;
  }
  traj["orientation"] = o;
  traj["fit"] = {{"max_error_deg", t.fit.max_error / kDegree}, {"norm_slack", t.fit.norm_slack},
                 {"min_degree", t.fit.min_degree},           {"max_degree", t.fit.max_degree},
                 {"fit_samples", t.fit.fit_samples},         {"validation_samples", t.fit.validation_samples}};
  j["trajectory"] = traj;

  j["obstacles"] = Json::array();
  for (std::size_t k = 0; k < s.obstacles.size(); ++k) {
    Json ob = obstacle_json(s.obstacles[k]);
    if (k < s.names.size() && !s.names[k].empty()) ob["name"] = s.names[k];
    j["obstacles"].push_back(ob);
  }
  j["margin"] = s.margin;
  j["solver"] = {{"threads", s.solver.threads},
                 {"degree_multiplier", s.solver.degree_multiplier},
                 {"bounding_reject", s.solver.bounding_reject},
                 {"fuse_interior", s.solver.fuse_interior}};
  return j;
}

// ---------------------------------------------------------------------------
// Interval rendering in the collision-table style.

/// "[a, b] ∪ [c, d]" with fixed decimals, or "∅".
inline std::string format_interval_set(const IntervalSet& s, int decimals = 4) {
  if (s.empty()) return "∅";
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals);
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) os << " ∪ ";
    os << '[' << s[k].lo << ", " << s[k].hi << ']';
  }
  return os.str();
}

struct CheckReport {
  CcdReport ccd;
  std::vector<std::string> names;
  double wall_time_s = 0.0;

  bool collision() const { return !ccd.overall.empty(); }
};

/// Process exit status of a check: 0 no collision, 1 collision. 2 is reserved
/// for input errors and is produced by the caller.
inline int exit_status(const CheckReport& r) { return r.collision() ? 1 : 0; }

/// One row per obstacle plus an overall row, pipe separated.
inline std::string render_table(const CheckReport& r, int decimals = 4) {
  std::ostringstream os;
  os << "| Obstacle | Collision interval (s) |\n|---|---|\n";
  for (std::size_t k = 0; k < r.ccd.per_obstacle.size(); ++k) {
    os << "| " << r.names[k] << " | " << format_interval_set(r.ccd.per_obstacle[k], decimals) << " |\n";
  }
  os << "| overall | " << format_interval_set(r.ccd.overall, decimals) << " |\n";
  return os.str();
}

namespace detail {

inline Json intervals_json(const IntervalSet& s) {
  Json a = Json::array();
  for (const auto& iv : s) a.push_back(Json::array({iv.lo, iv.hi}));
  return a;
}

}  // namespace detail

/// JSON numbers are written with round-trip precision (17 significant digits).
inline Json report_to_json(const CheckReport& r) {
  Json j;
  j["format"] = kReportFormat;
  j["collision"] = r.collision();
  j["toi"] = r.ccd.toi ? Json(*r.ccd.toi) : Json(nullptr);
  j["overall"] = detail::intervals_json(r.ccd.overall);
  j["obstacles"] = Json::array();
  for (std::size_t k = 0; k < r.ccd.per_obstacle.size(); ++k) {
    j["obstacles"].push_back({{"name", r.names[k]}, {"intervals", detail::intervals_json(r.ccd.per_obstacle[k])}});
  }
  j["stats"] = {{"polynomials", r.ccd.stats.polynomials},
                {"clauses_solved", r.ccd.stats.clauses_solved},
                {"sturm_early_exits", r.ccd.stats.sturm_early_exits},
                {"roots_refined", r.ccd.stats.roots_refined}};
  j["wall_time_s"] = r.wall_time_s;
  return j;
}

/// The report minus wall time, for determinism comparisons.
inline Json report_payload(const CheckReport& r) {
  Json j = report_to_json(r);
  j.erase("wall_time_s");
  return j;
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline CheckReport run_check(const SceneFile& scene, std::optional<int> threads = std::nullopt) {
  const Scenario sc = scene.build();
  CcdOptions opts = scene.solver;
  if (threads) opts.threads = *threads;
  CheckReport r;
  const auto t0 = std::chrono::steady_clock::now();
  r.ccd = check_scene(sc.robot, sc.trajectory, sc.obstacles, sc.margin, opts);
  r.wall_time_s = detail::seconds_since(t0);
  for (std::size_t k = 0; k < scene.obstacles.size(); ++k) r.names.push_back(scene.name(k));
  return r;
}

// ---------------------------------------------------------------------------
// Baseline comparison.

struct CompareRow {
  std::string method;  // "sampled" or "ccd"
  double dt = 0.0;     // zero on the ccd row
  double wall_time_s = 0.0;
  IntervalSet intervals;
  double gap = 0.0;    // Hausdorff distance to the ccd intervals
  std::string status;  // "collision", "no collision" or "missed"
};

inline const std::vector<double>& default_dt_ladder() {
  static const std::vector<double> ladder{0.1, 0.01, 0.001};
  return ladder;
}

/// Sampled rows in ladder order, then the CCD row. A sampled row is "missed"
/// when CCD finds a collision the grid never sees.
inline std::vector<CompareRow> run_compare(const SceneFile& scene, std::span<const double> ladder,
                                           SampleMode mode = SampleMode::ExactEdges,
                                           std::optional<int> threads = std::nullopt) {
  const Scenario sc = scene.build();
  CcdOptions opts = scene.solver;
  if (threads) opts.threads = *threads;
  auto t0 = std::chrono::steady_clock::now();
  const CcdReport ccd = check_scene(sc.robot, sc.trajectory, sc.obstacles, sc.margin, opts);
  CompareRow ccd_row{"ccd", 0.0, detail::seconds_since(t0), ccd.overall, 0.0,
                     ccd.overall.empty() ? "no collision" : "collision"};

  std::vector<CompareRow> rows;
  for (double dt : ladder) {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
    t0 = std::chrono::steady_clock::now();
    const SampledVerdict v = sampled_check(sc.robot, sc.trajectory, sc.obstacles, dt, mode, sc.margin);
    CompareRow row{"sampled", dt, detail::seconds_since(t0), v.intervals,
                   hausdorff_distance(v.intervals, ccd.overall), ""};
    if (v.intervals.empty()) {
      row.status = ccd.overall.empty() ? "no collision" : "missed";
    } else {
      row.status = "collision";
    }
    rows.push_back(std::move(row));
  }
  rows.push_back(std::move(ccd_row));
  return rows;
}

inline std::string compare_csv(std::span<const CompareRow> rows) {
  std::ostringstream os;
  os << "method,dt,wall_time_s,hausdorff_gap_s,status,intervals\n";
  os << std::setprecision(9);
  for (const auto& r : rows) {
    os << r.method << ',';
    if (r.method == "ccd") {
      os << "";
    } else {
      os << r.dt;
    }
    os << ',' << r.wall_time_s << ',';
    if (std::isinf(r.gap)) {
      os << "inf";
    } else {
      os << r.gap;
    }
    os << ',' << r.status << ",\"" << format_interval_set(r.intervals, 6) << "\"\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Minimum-snap generation front end.

/// Per-axis degree-7 coefficients for the boundary states over `window`.
inline Json run_gen(const FlatState& start, const FlatState& goal, const TimeWindow& window,
                    CoefficientOrder order = CoefficientOrder::ConstantFirst) {
  const PolyVec3 p = min_snap_segment(start, goal, window);
  Json j;
  j["format"] = kTrajectoryFormat;
  j["coefficient_order"] = to_string(order);
  j["window"] = Json::array({window.start(), window.end()});
  j["position"] = detail::polyvec_json(p, order);
  return j;
}

inline FlatState read_flat_state(const Json& j, const std::string& path) {
  const detail::Reader r(j, path);
  if (!j.is_array() || j.size() != 9) r.fail("expected 9 numbers [x, y, z, vx, vy, vz, ax, ay, az]");
  std::array<double, 9> s{};
  for (std::size_t i = 0; i < 9; ++i) s[i] = r.at(i).number();
  return FlatState::from_array(s);
}

}  // namespace polyccd
