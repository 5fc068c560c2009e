#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "polyccd/error.hpp"
#include "polyccd/geometry.hpp"
#include "polyccd/interpolation.hpp"
#include "polyccd/polynomial.hpp"

namespace polyccd {

inline constexpr double kDefaultGravity = 9.81;
inline constexpr double kDegree = std::numbers::pi / 180.0;

/// Sines and cosines of the ZYX Euler angles at one instant.
struct EulerTrig {
  double sphi = 0.0, cphi = 1.0;
  double stheta = 0.0, ctheta = 1.0;
  double spsi = 0.0, cpsi = 1.0;

  static EulerTrig from_angles(double phi, double theta, double psi) {
    return {std::sin(phi), std::cos(phi), std::sin(theta), std::cos(theta), std::sin(psi), std::cos(psi)};
  }
};

/// Body-to-world rotation for ZYX Euler angles, R = Rz(psi) Ry(theta) Rx(phi).
/// Orthonormal only when each (sin, cos) pair is exact.
inline Mat3 rotation_matrix(const EulerTrig& a) {
  Mat3 r;
  r << a.ctheta * a.cpsi, a.sphi * a.stheta * a.cpsi - a.cphi * a.spsi, a.cphi * a.stheta * a.cpsi + a.sphi * a.spsi,
      a.ctheta * a.spsi, a.sphi * a.stheta * a.spsi + a.cphi * a.cpsi, a.cphi * a.stheta * a.spsi - a.sphi * a.cpsi,
      -a.stheta, a.sphi * a.ctheta, a.cphi * a.ctheta;
  return r;
}

inline Mat3 rotation_matrix(double phi, double theta, double psi) {
  return rotation_matrix(EulerTrig::from_angles(phi, theta, psi));
}

/// Position, velocity and acceleration: the 9-entry boundary state.
struct FlatState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();

  /// From [x, y, z, vx, vy, vz, ax, ay, az].
  static FlatState from_array(const std::array<double, 9>& s) {
    return {Vec3(s[0], s[1], s[2]), Vec3(s[3], s[4], s[5]), Vec3(s[6], s[7], s[8])};
  }
};

struct PolyVec3 {
  Polynomial x, y, z;

  const Polynomial& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  Polynomial& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  Vec3 operator()(double t) const { return Vec3(x(t), y(t), z(t)); }
};

/// Degree-7 minimum-snap segment per axis. Position, velocity and acceleration
/// are pinned at both ends; the remaining two freedoms take the natural
/// conditions of the variational problem, fourth derivative zero at both ends.
inline PolyVec3 min_snap_segment(const FlatState& start, const FlatState& goal, const TimeWindow& window) {
  const double T = window.length();
  // Rows: value, d1, d2, d4 at tau = 0, then at tau = T; columns: tau^0..tau^7.
  Eigen::Matrix<double, 8, 8> m = Eigen::Matrix<double, 8, 8>::Zero();
  auto row = [](double tau, int order) {
    Eigen::Matrix<double, 1, 8> r = Eigen::Matrix<double, 1, 8>::Zero();
    for (int k = order; k < 8; ++k) {
      double f = 1.0;
      for (int j = 0; j < order; ++j) f *= static_cast<double>(k - j);
      r(k) = f * std::pow(tau, k - order);
    }
    return r;
  };
  const int orders[4] = {0, 1, 2, 4};
  for (int i = 0; i < 4; ++i) {
    m.row(i) = row(0.0, orders[i]);
    m.row(4 + i) = row(T, orders[i]);
  }
  const Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(m);
  if (!lu.isInvertible()) throw Error(ErrorCode::NearSingular, "min_snap_segment: degenerate window");
  PolyVec3 out;
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::Matrix<double, 8, 1> b;
    b << start.position(axis), start.velocity(axis), start.acceleration(axis), 0.0, goal.position(axis),
        goal.velocity(axis), goal.acceleration(axis), 0.0;
    const Eigen::Matrix<double, 8, 1> c = lu.solve(b);
    const Polynomial in_tau(std::vector<double>(c.data(), c.data() + 8));
    out[axis] = window.start() == 0.0 ? in_tau : compose_affine(in_tau, -window.start(), 1.0);
  }
  return out;
}

/// Roll and pitch of a quadrotor from flat outputs.
struct RollPitch {
  double phi = 0.0;
  double theta = 0.0;
};

/// Pointwise flatness map; throws when |z'' + g| < 0.1.
inline RollPitch quadrotor_roll_pitch(const Vec3& acc, double psi, double g = kDefaultGravity, double t = NAN) {
  const double zg = acc.z() + g;
  if (!(std::abs(zg) >= 0.1)) {
    throw Error(ErrorCode::FreeFallSingularity,
                "free-fall singularity: |z'' + g| = " + std::to_string(std::abs(zg)) + " at t = " + std::to_string(t));
  }
  const double sp = std::sin(psi), cp = std::cos(psi);
  const double norm = std::sqrt(acc.x() * acc.x() + acc.y() * acc.y() + zg * zg);
  return {std::asin(std::clamp((sp * acc.x() - cp * acc.y()) / norm, -1.0, 1.0)),
          std::atan((cp * acc.x() + sp * acc.y()) / zg)};
}

struct RollPitchSample {
  double t = 0.0;
  double phi = 0.0;
  double theta = 0.0;
};

/// Roll/pitch samples along a polynomial trajectory with yaw polynomial psi.
inline std::vector<RollPitchSample> quadrotor_flat_orientation(const PolyVec3& traj, const Polynomial& psi,
                                                               std::span<const double> times,
                                                               double g = kDefaultGravity) {
  const PolyVec3 acc{traj.x.derivative(2), traj.y.derivative(2), traj.z.derivative(2)};
  std::vector<RollPitchSample> out;
  out.reserve(times.size());
  for (double t : times) {
    const auto rp = quadrotor_roll_pitch(acc(t), psi(t), g, t);
    out.push_back({t, rp.phi, rp.theta});
  }
  return out;
}

/// Continuous-branch heading atan2(y', x') at the given times.
inline std::vector<Sample> agv_heading(const Polynomial& x, const Polynomial& y, std::span<const double> times) {
  const Polynomial dx = x.derivative(), dy = y.derivative();
  std::vector<Sample> out;
  out.reserve(times.size());
  for (double t : times) {
    const double vx = dx(t), vy = dy(t);
    if (!(std::hypot(vx, vy) > 1e-6)) {
      throw Error(ErrorCode::ZeroSpeed, "heading undefined: speed below 1e-6 at t = " + std::to_string(t));
    }
    double a = std::atan2(vy, vx);
    if (!out.empty()) {
      const double prev = out.back().value;
      a += 2.0 * std::numbers::pi * std::round((prev - a) / (2.0 * std::numbers::pi));
    }
    out.push_back({t, a});
  }
  return out;
}

struct FitOptions {
  int fit_samples = 200;
  int validation_samples = 1000;
  double max_error = 1.0 * kDegree;
  /// Bound on |sin^2 + cos^2 - 1|. Three angles each off by delta stretch a
  /// rotated vector by up to about 1.5 delta; 0.003 keeps rigid lengths within 0.5%.
  double norm_slack = 0.05;
  int min_degree = 2;
  int max_degree = 12;
};

/// Independent polynomial fits of sin and cos of one angle.
/// Polynomials are in the unit variable of the owning window.
struct AngleFit {
  Polynomial sin{0.0};
  Polynomial cos{1.0};
  int degree = 0;
  double max_error = 0.0;

  double sin_at_unit(double s) const { return sin(s); }
  double cos_at_unit(double s) const { return cos(s); }

  static AngleFit constant(double angle) { return {Polynomial{std::sin(angle)}, Polynomial{std::cos(angle)}, 0, 0.0}; }
};

inline double wrap_to_pi(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

namespace detail {

struct FitCheck {
  double max_error = 0.0;
  double worst_norm_deviation = 0.0;
};

inline FitCheck check_fit(const Polynomial& fs, const Polynomial& fc, std::span<const double> s,
                          std::span<const double> angles) {
  FitCheck c;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double a = fs(s[i]), b = fc(s[i]);
    c.max_error = std::max(c.max_error, std::abs(wrap_to_pi(std::atan2(a, b) - angles[i])));
    c.worst_norm_deviation = std::max(c.worst_norm_deviation, std::abs(a * a + b * b - 1.0));
  }
  return c;
}

inline bool nearly_constant(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo <= 1e-12 * std::max(1.0, std::abs(*lo));
}

}  // namespace detail

/// Fits sin/cos of the angle samples, escalating the degree from
/// opts.min_degree until the reconstructed atan2 error is below opts.max_error
/// on the samples and sin^2 + cos^2 stays within opts.norm_slack of 1.
inline AngleFit fit_orientation(std::span<const Sample> samples, const TimeWindow& window, const FitOptions& opts = {}) {
  if (samples.size() < 2) throw Error(ErrorCode::InvalidArgument, "fit_orientation needs at least 2 samples");
  std::vector<double> s, a, sv, cv;
  for (const auto& smp : samples) {
    s.push_back(window.to_unit(smp.t));
    a.push_back(smp.value);
    sv.push_back(std::sin(smp.value));
    cv.push_back(std::cos(smp.value));
  }
  if (detail::nearly_constant(sv) && detail::nearly_constant(cv)) return AngleFit::constant(a.front());
  for (int deg = opts.min_degree; deg <= opts.max_degree; ++deg) {
    if (samples.size() < static_cast<std::size_t>(deg) + 1) break;
    AngleFit fit;
    fit.sin = detail::least_squares_unit(s, sv, deg);
    fit.cos = detail::least_squares_unit(s, cv, deg);
    const auto chk = detail::check_fit(fit.sin, fit.cos, s, a);
    if (chk.max_error < opts.max_error && chk.worst_norm_deviation <= opts.norm_slack) {
      fit.degree = deg;
      fit.max_error = chk.max_error;
      return fit;
    }
  }
  throw Error(ErrorCode::NotApproximable,
              "orientation not polynomial-approximable at degree <= " + std::to_string(opts.max_degree));
}

/// Fits an angle function: least squares on opts.fit_samples Chebyshev-placed
/// times, acceptance judged on opts.validation_samples uniform times.
inline AngleFit fit_angle_function(const std::function<double(double)>& angle, const TimeWindow& window,
                                   const FitOptions& opts = {}) {
  const auto fit_t = chebyshev_nodes(window, opts.fit_samples);
  std::vector<double> fs, fsv, fcv, fa;
  for (double t : fit_t) {
    const double v = angle(t);
    fs.push_back(window.to_unit(t));
    fa.push_back(v);
    fsv.push_back(std::sin(v));
    fcv.push_back(std::cos(v));
  }
  std::vector<double> vs, va;
  const int nv = std::max(2, opts.validation_samples);
  for (int k = 0; k < nv; ++k) {
    const double t = window.from_unit(-1.0 + 2.0 * k / (nv - 1));
    vs.push_back(window.to_unit(t));
    va.push_back(angle(t));
  }
  std::vector<double> vsin, vcos;
  for (double v : va) {
    vsin.push_back(std::sin(v));
    vcos.push_back(std::cos(v));
  }
  if (detail::nearly_constant(vsin) && detail::nearly_constant(vcos) && detail::nearly_constant(fsv) &&
      detail::nearly_constant(fcv)) {
    return AngleFit::constant(va.front());
  }
  for (int deg = opts.min_degree; deg <= opts.max_degree; ++deg) {
    AngleFit fit;
    fit.sin = detail::least_squares_unit(fs, fsv, deg);
    fit.cos = detail::least_squares_unit(fs, fcv, deg);
    const auto chk = detail::check_fit(fit.sin, fit.cos, vs, va);
    if (chk.max_error < opts.max_error && chk.worst_norm_deviation <= opts.norm_slack) {
      fit.degree = deg;
      fit.max_error = chk.max_error;
      return fit;
    }
  }
  throw Error(ErrorCode::NotApproximable,
              "orientation not polynomial-approximable at degree <= " + std::to_string(opts.max_degree));
}

/// Exact Euler angles (phi, theta, psi) as a function of time.
using EulerFunction = std::function<Vec3(double)>;

/// Translation polynomials plus fitted sin/cos polynomials of the Euler angles.
class TrajectoryBundle {
 public:
  /// Fits each angle of `angles` independently. Throws NotApproximable if any
  /// angle misses the error budget at degree <= opts.max_degree.
  TrajectoryBundle(PolyVec3 position, const TimeWindow& window, EulerFunction angles, const FitOptions& opts = {})
      : position_(std::move(position)), window_(window), angles_(std::move(angles)) {
    validate_position();
    for (int i = 0; i < 3; ++i) {
      fits_[static_cast<std::size_t>(i)] =
          fit_angle_function([this, i](double t) { return angles_(t)(i); }, window_, opts);
    }
  }

  static TrajectoryBundle constant_orientation(PolyVec3 position, const TimeWindow& window, double phi = 0.0,
                                               double theta = 0.0, double psi = 0.0) {
    return TrajectoryBundle(std::move(position), window, [phi, theta, psi](double) { return Vec3(phi, theta, psi); });
  }

  static TrajectoryBundle explicit_euler(PolyVec3 position, const TimeWindow& window, PolyVec3 euler,
                                         const FitOptions& opts = {}) {
    return TrajectoryBundle(std::move(position), window, [e = std::move(euler)](double t) { return e(t); }, opts);
  }

  /// Roll and pitch from differential flatness with yaw polynomial psi.
  static TrajectoryBundle quadrotor_flat(PolyVec3 position, const TimeWindow& window, Polynomial psi,
                                         double g = kDefaultGravity, const FitOptions& opts = {}) {
    const PolyVec3 acc{position.x.derivative(2), position.y.derivative(2), position.z.derivative(2)};
    auto angles = [acc, psi = std::move(psi), g](double t) {
      const double yaw = psi(t);
      const auto rp = quadrotor_roll_pitch(acc(t), yaw, g, t);
      return Vec3(rp.phi, rp.theta, yaw);
    };
    return TrajectoryBundle(std::move(position), window, std::move(angles), opts);
  }

  /// Planar heading atan2(y', x') as yaw; roll and pitch zero.
  static TrajectoryBundle agv_heading(PolyVec3 position, const TimeWindow& window, const FitOptions& opts = {}) {
    const Polynomial dx = position.x.derivative(), dy = position.y.derivative();
    // Unwrap against a running reference so the yaw function is continuous.
    auto ref = std::make_shared<std::vector<Sample>>();
    {
      std::vector<double> grid;
      for (int k = 0; k <= 4000; ++k) grid.push_back(window.from_unit(-1.0 + k / 2000.0));
      *ref = polyccd::agv_heading(position.x, position.y, grid);
    }
    auto angles = [dx, dy, ref, window](double t) {
      const double vx = dx(t), vy = dy(t);
      if (!(std::hypot(vx, vy) > 1e-6)) {
        throw Error(ErrorCode::ZeroSpeed, "heading undefined: speed below 1e-6 at t = " + std::to_string(t));
      }
      const double s = window.to_unit(t);
      const auto k = static_cast<std::size_t>(std::clamp(std::lround((s + 1.0) * 2000.0), 0L, 4000L));
      double a = std::atan2(vy, vx);
      a += 2.0 * std::numbers::pi * std::round(((*ref)[k].value - a) / (2.0 * std::numbers::pi));
      return Vec3(0.0, 0.0, a);
    };
    return TrajectoryBundle(std::move(position), window, std::move(angles), opts);
  }

  const TimeWindow& window() const { return window_; }
  const PolyVec3& position() const { return position_; }
  const AngleFit& phi() const { return fits_[0]; }
  const AngleFit& theta() const { return fits_[1]; }
  const AngleFit& psi() const { return fits_[2]; }
  const AngleFit& angle_fit(int i) const { return fits_[static_cast<std::size_t>(i)]; }

  /// Translation degree n (largest nonzero coefficient index over x, y, z).
  int n() const {
    return std::max({position_.x.effective_degree(), position_.y.effective_degree(), position_.z.effective_degree()});
  }
  /// Reported fit degree p: the maximum over the three angles.
  int p() const { return std::max({fits_[0].degree, fits_[1].degree, fits_[2].degree}); }
  double fit_error() const { return std::max({fits_[0].max_error, fits_[1].max_error, fits_[2].max_error}); }

  Vec3 exact_angles(double t) const { return angles_(t); }
  Mat3 exact_rotation(double t) const {
    const Vec3 a = angles_(t);
    return rotation_matrix(a(0), a(1), a(2));
  }

  EulerTrig fitted_trig_unit(double s) const {
    return {fits_[0].sin(s), fits_[0].cos(s), fits_[1].sin(s), fits_[1].cos(s), fits_[2].sin(s), fits_[2].cos(s)};
  }
  Mat3 fitted_rotation_unit(double s) const { return rotation_matrix(fitted_trig_unit(s)); }
  Mat3 fitted_rotation(double t) const { return fitted_rotation_unit(window_.to_unit(t)); }

 private:
  void validate_position() const {
    for (int i = 0; i < 3; ++i) {
      if (!position_[i].is_finite()) throw Error(ErrorCode::InvalidArgument, "trajectory has non-finite coefficients");
    }
  }

  PolyVec3 position_;
  TimeWindow window_;
  EulerFunction angles_;
  std::array<AngleFit, 3> fits_{};
};

/// Truncated Taylor polynomials of a constant-twist planar arc.
struct ArcPolynomial {
  Polynomial x;
  Polynomial y;
  Polynomial heading;  // exact: alpha0 + omega (t - t_s)
  double truncation_bound = 0.0;
};

/// Taylor expansion about t_s of x(t) = x0 + (v/omega)(sin(alpha0 + omega tau) - sin(alpha0)),
/// y analogous, tau = t - t_s, truncated at `degree`. The bound is the next-term
/// Lagrange remainder |v| |omega|^degree T^(degree+1) / (degree+1)! per coordinate.
inline ArcPolynomial arc_to_polynomial(double v, double omega, const Vec3& pose, const TimeWindow& window,
                                       int degree) {
  if (degree < 3) throw Error(ErrorCode::InvalidArgument, "arc_to_polynomial needs degree >= 3");
  const double x0 = pose.x(), y0 = pose.y(), a0 = pose.z();
  std::vector<double> cx(static_cast<std::size_t>(degree) + 1, 0.0), cy(cx.size(), 0.0);
  cx[0] = x0;
  cy[0] = y0;
  double w_pow = 1.0;  // omega^(k-1)
  double fact = 1.0;   // k!
  for (int k = 1; k <= degree; ++k) {
    fact *= k;
    const double phase = a0 + (k - 1) * std::numbers::pi / 2.0;
    cx[static_cast<std::size_t>(k)] = v * w_pow * std::cos(phase) / fact;
    cy[static_cast<std::size_t>(k)] = v * w_pow * std::sin(phase) / fact;
    w_pow *= omega;
  }
  ArcPolynomial out;
  const Polynomial px(std::move(cx)), py(std::move(cy));
  out.x = compose_affine(px, -window.start(), 1.0);
  out.y = compose_affine(py, -window.start(), 1.0);
  out.heading = Polynomial{a0 - omega * window.start(), omega};
  const double T = window.length();
  out.truncation_bound = std::abs(v) * std::pow(std::abs(omega), degree) * std::pow(T, degree + 1) / (fact * (degree + 1));
  return out;
}

}  // namespace polyccd
