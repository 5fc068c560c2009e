#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "polyccd/error.hpp"

namespace polyccd {

/// Closed time window [t_s, t_e] with t_s < t_e.
///
/// Also carries the affine map to the unit window [-1, 1] on which every
/// polynomial the engine builds internally lives: s = (2t - t_s - t_e) / (t_e - t_s).
class TimeWindow {
 public:
  TimeWindow(double t_s, double t_e) : t_s_(t_s), t_e_(t_e) {
    if (!std::isfinite(t_s) || !std::isfinite(t_e) || !(t_s < t_e)) {
      throw Error(ErrorCode::InvalidArgument,
                  "time window requires finite t_s < t_e, got [" + std::to_string(t_s) + ", " +
                      std::to_string(t_e) + "]");
    }
  }

  static TimeWindow unit() { return {-1.0, 1.0}; }

  double start() const { return t_s_; }
  double end() const { return t_e_; }
  double length() const { return t_e_ - t_s_; }
  double mid() const { return 0.5 * (t_s_ + t_e_); }
  double half_length() const { return 0.5 * (t_e_ - t_s_); }

  // Both maps pin the endpoints so t_s, t_e and -1, 1 round-trip exactly.
  double to_unit(double t) const {
    if (t == t_s_) return -1.0;
    if (t == t_e_) return 1.0;
    return (t - mid()) / half_length();
  }
  double from_unit(double s) const {
    if (s == -1.0) return t_s_;
    if (s == 1.0) return t_e_;
    return mid() + half_length() * s;
  }

  bool contains(double t) const { return t >= t_s_ && t <= t_e_; }
  bool is_unit() const { return t_s_ == -1.0 && t_e_ == 1.0; }

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;

 private:
  double t_s_;
  double t_e_;
};

/// Dense univariate real polynomial, constant term first.
///
/// coeffs()[i] multiplies t^i. The stored length is degree_bound() + 1; the
/// trailing coefficients may be (numerically) zero since degree bounds are
/// upper bounds.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
  }
  explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
  }

  static Polynomial constant(double c) { return Polynomial{c}; }
  static Polynomial zero(int degree_bound) {
    return Polynomial(std::vector<double>(static_cast<std::size_t>(degree_bound) + 1, 0.0));
  }
  /// The identity polynomial t.
  static Polynomial identity() { return Polynomial{0.0, 1.0}; }

  int degree_bound() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const { return coeffs_; }
  const std::vector<double>& coeff_vector() const { return coeffs_; }

  /// Coefficient of t^i; zero past the stored degree bound.
  double operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0.0; }
  double& coeff(std::size_t i) { return coeffs_.at(i); }

  /// Horner evaluation.
  double operator()(double t) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Sum_i |c_i| |t|^i, the magnitude scale of the terms summed at t.
  double abs_sum_at(double t) const {
    double acc = 0.0;
    const double at = std::abs(t);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * at + std::abs(*it);
    return acc;
  }

  bool is_zero(double abs_tol = 0.0) const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [abs_tol](double c) { return std::abs(c) <= abs_tol; });
  }

  bool is_finite() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return std::isfinite(c); });
  }

  /// Largest index whose coefficient exceeds rel_tol * max|c|; 0 for zero polynomials.
  int effective_degree(double rel_tol = 0.0) const {
    const double cut = rel_tol * max_abs_coeff();
    for (int i = degree_bound(); i > 0; --i) {
      if (std::abs(coeffs_[static_cast<std::size_t>(i)]) > cut) return i;
    }
    return 0;
  }

  /// Copy with the leading coefficients at or below rel_tol * max|c| dropped.
  Polynomial trimmed(double rel_tol = 0.0) const {
    const int d = effective_degree(rel_tol);
    return Polynomial(std::vector<double>(coeffs_.begin(), coeffs_.begin() + d + 1));
  }

  Polynomial derivative() const {
    if (coeffs_.size() == 1) return Polynomial{0.0};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
    return Polynomial(std::move(d));
  }

  Polynomial derivative(int order) const {
    Polynomial p = *this;
    for (int k = 0; k < order; ++k) p = p.derivative();
    return p;
  }

  /// Zero-padded to a larger degree bound (no-op if already at least that large).
  Polynomial padded(int degree_bound) const {
    Polynomial p = *this;
    if (degree_bound > p.degree_bound()) p.coeffs_.resize(static_cast<std::size_t>(degree_bound) + 1, 0.0);
    return p;
  }

  Polynomial operator-() const {
    Polynomial p = *this;
    for (double& c : p.coeffs_) c = -c;
    return p;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Polynomial& operator*=(double k) {
    for (double& c : coeffs_) c *= k;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double k) { return a *= k; }
  friend Polynomial operator*(double k, Polynomial a) { return a *= k; }

  /// Product; the degree bound is the sum of the operands' bounds.
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<double> r(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(r));
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

inline double evaluate(const Polynomial& p, double t) { return p(t); }

enum class PolyOp { Add, Sub, Mul };

inline Polynomial arithmetic(const Polynomial& p, const Polynomial& q, PolyOp op) {
  switch (op) {
    case PolyOp::Add: return p + q;
    case PolyOp::Sub: return p - q;
    case PolyOp::Mul: return p * q;
  }
  return p;
}

/// q(t) = p(a + b t), expanded by Horner's scheme over polynomials.
inline Polynomial compose_affine(const Polynomial& p, double a, double b) {
  const auto& c = p.coeff_vector();
  std::vector<double> acc(c.size(), 0.0);
  // acc holds the running Horner value; its live degree grows by one per step.
  std::size_t live = 0;
  acc[0] = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    // acc <- acc * (a + b t) + c[k]
    for (std::size_t i = live + 1; i > 0; --i) acc[i] = acc[i] * a + acc[i - 1] * b;
    acc[0] = acc[0] * a + c[k];
    ++live;
  }
  return Polynomial(std::move(acc));
}

/// Re-expresses a polynomial in t as a polynomial in the window's unit variable s.
inline Polynomial to_unit_variable(const Polynomial& p_of_t, const TimeWindow& w) {
  if (w.is_unit()) return p_of_t;
  return compose_affine(p_of_t, w.mid(), w.half_length());
}

/// Inverse of to_unit_variable.
inline Polynomial from_unit_variable(const Polynomial& p_of_s, const TimeWindow& w) {
  if (w.is_unit()) return p_of_s;
  return compose_affine(p_of_s, -w.mid() / w.half_length(), 1.0 / w.half_length());
}

struct Division {
  Polynomial quotient;
  Polynomial remainder;
};

/// Euclidean division. The divisor's leading coefficient must be nonzero after
/// trimming exact zeros.
inline Division divide(const Polynomial& num, const Polynomial& den) {
  const Polynomial d = den.trimmed(0.0);
  const int dd = d.degree_bound();
  const double lead = d[static_cast<std::size_t>(dd)];
  if (lead == 0.0) throw Error(ErrorCode::IdenticallyZero, "division by the zero polynomial");
  std::vector<double> r(num.coeffs().begin(), num.coeffs().end());
  const int nd = num.degree_bound();
  if (nd < dd) return {Polynomial{0.0}, num};
  std::vector<double> q(static_cast<std::size_t>(nd - dd) + 1, 0.0);
  for (int k = nd - dd; k >= 0; --k) {
    const double f = r[static_cast<std::size_t>(k + dd)] / lead;
    q[static_cast<std::size_t>(k)] = f;
    for (int j = 0; j <= dd; ++j) r[static_cast<std::size_t>(k + j)] -= f * d[static_cast<std::size_t>(j)];
    r[static_cast<std::size_t>(k + dd)] = 0.0;
  }
  r.resize(static_cast<std::size_t>(std::max(dd, 1)));
  return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

}  // namespace polyccd
