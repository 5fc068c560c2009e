#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "polyccd/error.hpp"
#include "polyccd/polynomial.hpp"

namespace polyccd {

struct Sample {
  double t = 0.0;
  double value = 0.0;
};

/// Reciprocal condition estimate below which a Vandermonde solve is refused.
inline constexpr double kInterpolationMinRcond = 1e-15;

inline std::vector<double> chebyshev_nodes_unit(int n) {
  std::vector<double> s(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    s[static_cast<std::size_t>(k)] = -std::cos(std::numbers::pi * (k + 0.5) / n);
  }
  return s;
}

inline std::vector<double> chebyshev_nodes(const TimeWindow& w, int n) {
  auto s = chebyshev_nodes_unit(n);
  for (double& v : s) v = w.from_unit(v);
  return s;
}

namespace detail {

inline Eigen::MatrixXd vandermonde(std::span<const double> x, int cols) {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(x.size()), cols);
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    double p = 1.0;
    for (int j = 0; j < cols; ++j) {
      v(i, j) = p;
      p *= x[static_cast<std::size_t>(i)];
    }
  }
  return v;
}

/// Monomial coefficients of sum_j c_j T_j(s), via T_{j+1} = 2 s T_j - T_{j-1}.
inline std::vector<double> chebyshev_to_monomial(std::span<const double> c) {
  const std::size_t n = c.size();
  std::vector<double> out(n, 0.0), prev(n, 0.0), cur(n, 0.0), next(n, 0.0);
  prev[0] = 1.0;
  if (n > 1) cur[1] = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::vector<double>& tj = j == 0 ? prev : cur;
    for (std::size_t i = 0; i <= j; ++i) out[i] += c[j] * tj[i];
    if (j == 0) continue;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) next[i + 1] = 2.0 * cur[i];
    for (std::size_t i = 0; i < n; ++i) next[i] -= prev[i];
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return out;
}

}  // namespace detail

/// Polynomial in the unit variable through `values` taken at the
/// degree_bound + 1 Chebyshev-Gauss nodes of chebyshev_nodes_unit().
/// Trailing Chebyshev coefficients at or below noise_floor (and never less
/// than 64 eps max|value|) are dropped: each moves the result by at most its
/// own size on [-1, 1], but the monomial form of T_j amplifies noise by 2^j.
inline Polynomial interpolate_unit(std::span<const double> values, double noise_floor = 0.0) {
  const std::size_t n = values.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "interpolation needs at least one sample");
  if (n == 1) return Polynomial{values[0]};
  // Discrete orthogonality of T_j on the Gauss nodes gives the Chebyshev
  // coefficients directly; node k sits at angle pi - pi (k + 1/2) / n.
  std::vector<double> cheb(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = std::numbers::pi * (static_cast<double>(n - k) - 0.5) / static_cast<double>(n);
      acc += values[k] * std::cos(static_cast<double>(j) * theta);
    }
    cheb[j] = acc * (j == 0 ? 1.0 : 2.0) / static_cast<double>(n);
  }
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  const double chop = std::max(noise_floor, 64.0 * std::numeric_limits<double>::epsilon() * vmax);
  while (cheb.size() > 1 && std::abs(cheb.back()) <= chop) cheb.pop_back();
  return Polynomial(detail::chebyshev_to_monomial(cheb));
}

/// Samples f at the Chebyshev nodes of the unit window and interpolates.
template <typename F>
Polynomial interpolate_unit_function(F&& f, int degree_bound) {
  const auto nodes = chebyshev_nodes_unit(degree_bound + 1);
  std::vector<double> values(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) values[k] = f(nodes[k]);
  return interpolate_unit(values);
}

/// The unique polynomial of degree <= degree_bound through the samples,
/// expressed in t. Requires exactly degree_bound + 1 samples at distinct times.
inline Polynomial interpolate(std::span<const Sample> samples, int degree_bound) {
  if (degree_bound < 0 || samples.size() != static_cast<std::size_t>(degree_bound) + 1) {
    throw Error(ErrorCode::InvalidArgument, "interpolate needs exactly degree_bound + 1 samples");
  }
  std::vector<double> ts;
  ts.reserve(samples.size());
  double vmax = 0.0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.t) || !std::isfinite(s.value)) throw Error(ErrorCode::InvalidArgument, "non-finite sample");
    ts.push_back(s.t);
    vmax = std::max(vmax, std::abs(s.value));
  }
  std::vector<double> sorted = ts;
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front(), hi = sorted.back();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] <= 1e-14 * std::max(1.0, hi - lo)) {
      throw Error(ErrorCode::DuplicateSamples, "sample time " + std::to_string(sorted[i]) + " repeats");
    }
  }
  if (degree_bound == 0) return Polynomial{samples[0].value};

  const TimeWindow span_window(lo, hi);
  std::vector<double> s(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) s[i] = span_window.to_unit(ts[i]);
  const Eigen::MatrixXd v = detail::vandermonde(s, degree_bound + 1);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) rhs(static_cast<Eigen::Index>(i)) = samples[i].value;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(v);
  if (!(lu.rcond() >= kInterpolationMinRcond)) {
    throw Error(ErrorCode::NearSingular,
                "Vandermonde condition estimate " + std::to_string(1.0 / lu.rcond()) + " is too large; re-sample");
  }
  const Eigen::VectorXd c = lu.solve(rhs);
  const Polynomial in_unit(std::vector<double>(c.data(), c.data() + c.size()));
  const Polynomial in_t = from_unit_variable(in_unit, span_window);
  for (const auto& smp : samples) {
    // Horner in the t basis carries roundoff ~eps * sum|c_i t^i|, which on
    // off-origin windows can exceed 1e-8 * max|value| for any coefficient set.
    const double allowed = 1e-8 * vmax + 1e-14 * in_t.abs_sum_at(smp.t);
    if (!(std::abs(in_t(smp.t) - smp.value) <= allowed)) {
      throw Error(ErrorCode::NearSingular, "interpolant residual exceeds 1e-8 relative; re-sample");
    }
  }
  return in_t;
}

struct LeastSquaresFit {
  Polynomial poly;
  double max_abs_error = 0.0;
};

namespace detail {

inline Polynomial least_squares_unit(std::span<const double> s, std::span<const double> values, int degree) {
  const Eigen::MatrixXd v = vandermonde(s, degree + 1);
  Eigen::Map<const Eigen::VectorXd> rhs(values.data(), static_cast<Eigen::Index>(values.size()));
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
  qr.setThreshold(1e-13);
  if (qr.rank() < degree + 1) {
    throw Error(ErrorCode::RankDeficient, "least-squares design matrix has rank " + std::to_string(qr.rank()) +
                                              " < " + std::to_string(degree + 1));
  }
  const Eigen::VectorXd c = qr.solve(rhs);
  return Polynomial(std::vector<double>(c.data(), c.data() + c.size()));
}

}  // namespace detail

/// Least-squares fit in the unit variable of `window`; samples are given in t.
inline LeastSquaresFit fit_least_squares_unit(std::span<const Sample> samples, int degree, const TimeWindow& window) {
  if (degree < 0 || samples.size() < static_cast<std::size_t>(degree) + 1) {
    throw Error(ErrorCode::InvalidArgument, "least squares needs at least degree + 1 samples");
  }
  std::vector<double> s, v;
  s.reserve(samples.size());
  v.reserve(samples.size());
  for (const auto& smp : samples) {
    s.push_back(window.to_unit(smp.t));
    v.push_back(smp.value);
  }
  LeastSquaresFit fit{detail::least_squares_unit(s, v, degree), 0.0};
  for (std::size_t i = 0; i < s.size(); ++i) fit.max_abs_error = std::max(fit.max_abs_error, std::abs(fit.poly(s[i]) - v[i]));
  return fit;
}

/// Least-squares polynomial of the given degree in t, plus the max residual.
inline LeastSquaresFit fit_least_squares(std::span<const Sample> samples, int degree) {
  if (degree < 0 || samples.size() < static_cast<std::size_t>(degree) + 1) {
    throw Error(ErrorCode::InvalidArgument, "least squares needs at least degree + 1 samples");
  }
  auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                      [](const Sample& a, const Sample& b) { return a.t < b.t; });
  if (degree == 0 || lo->t == hi->t) {
    if (degree > 0) throw Error(ErrorCode::RankDeficient, "all samples share one time");
    double mean = 0.0;
    for (const auto& s : samples) mean += s.value;
    mean /= static_cast<double>(samples.size());
    LeastSquaresFit fit{Polynomial{mean}, 0.0};
    for (const auto& s : samples) fit.max_abs_error = std::max(fit.max_abs_error, std::abs(s.value - mean));
    return fit;
  }
  const TimeWindow span_window(lo->t, hi->t);
  LeastSquaresFit unit = fit_least_squares_unit(samples, degree, span_window);
  LeastSquaresFit fit{from_unit_variable(unit.poly, span_window), 0.0};
  for (const auto& s : samples) fit.max_abs_error = std::max(fit.max_abs_error, std::abs(fit.poly(s.t) - s.value));
  return fit;
}

}  // namespace polyccd
