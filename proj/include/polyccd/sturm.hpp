#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "polyccd/error.hpp"
#include "polyccd/polynomial.hpp"

namespace polyccd {

/// Trailing coefficients at or below kTrimTolerance * max|c| are dropped
/// before a Sturm chain is built. Each moves values on [-1, 1] by at most its
/// own size, so this stays at roundoff level whatever the dynamic range.
inline constexpr double kTrimTolerance = 64.0 * std::numeric_limits<double>::epsilon();

/// Relative bracket width (of the unit window) at which bisection stops.
inline constexpr double kRootTolerance = 1e-11;

namespace detail {

inline Polynomial normalized(const Polynomial& p) {
  const double m = p.max_abs_coeff();
  return m > 0.0 ? p * (1.0 / m) : p;
}

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// Remainder of a / b together with a running bound on the magnitudes summed
/// into each remainder coefficient.
inline std::pair<Polynomial, std::vector<double>> remainder_with_bound(const Polynomial& a, const Polynomial& b) {
  const int db = b.degree_bound();
  const double lead = b[static_cast<std::size_t>(db)];
  std::vector<double> r(a.coeffs().begin(), a.coeffs().end());
  std::vector<double> m(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) m[i] = std::abs(r[i]);
  for (int k = a.degree_bound() - db; k >= 0; --k) {
    const double f = r[static_cast<std::size_t>(k + db)] / lead;
    for (int j = 0; j < db; ++j) {
      const auto i = static_cast<std::size_t>(k + j);
      const double step = f * b[static_cast<std::size_t>(j)];
      r[i] -= step;
      m[i] += std::abs(step);
    }
    r[static_cast<std::size_t>(k + db)] = 0.0;
  }
  const auto n = static_cast<std::size_t>(std::max(db, 1));
  r.resize(n);
  m.resize(n);
  return {Polynomial(std::move(r)), std::move(m)};
}

}  // namespace detail

/// Canonical Sturm sequence of the square-free part of a polynomial.
///
/// Each element is rescaled to unit max coefficient; positive scaling leaves
/// the sign-variation counts unchanged and keeps the remainders well scaled.
/// Remainders are cut by a per-coefficient roundoff bound, so roots 1e-7
/// apart are still told apart.
class SturmChain {
 public:
  explicit SturmChain(const Polynomial& p, double trim_tol = kTrimTolerance) {
    if (!p.is_finite()) throw Error(ErrorCode::InvalidArgument, "polynomial has non-finite coefficients");
    if (p.is_zero()) throw Error(ErrorCode::IdenticallyZero, "Sturm chain of the zero polynomial");
    Polynomial q = detail::normalized(p.trimmed(trim_tol));
    build(q);
    // A non-constant tail is gcd(q, q'): divide it out so the roots are simple.
    if (chain_.back().degree_bound() > 0) {
      const Polynomial sq = detail::normalized(divide(q, chain_.back()).quotient.trimmed(trim_tol));
      chain_.clear();
      build(sq);
    }
  }

  const std::vector<Polynomial>& sequence() const { return chain_; }
  const Polynomial& square_free() const { return chain_.front(); }

  int sign_variations(double x) const {
    int changes = 0;
    int last = 0;
    for (const auto& q : chain_) {
      const int s = detail::sign_of(q(x));
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  /// Distinct real roots in the half-open interval (a, b].
  int count_roots(double a, double b) const { return std::max(0, sign_variations(a) - sign_variations(b)); }

 private:
  void build(const Polynomial& q) {
    chain_.push_back(q);
    if (q.degree_bound() == 0) return;
    chain_.push_back(detail::normalized(q.derivative()));
    while (chain_.back().degree_bound() > 0) {
      const Polynomial& a = chain_[chain_.size() - 2];
      const Polynomial& b = chain_.back();
      auto [r, bound] = detail::remainder_with_bound(a, b);
      // A coefficient within a few ulps of the magnitudes that cancelled into it
      // is roundoff; a remainder made only of roundoff ends the chain.
      const double ulps = 4.0 * (a.degree_bound() + 1) * std::numeric_limits<double>::epsilon();
      int d = r.degree_bound();
      while (d >= 0 && std::abs(r[static_cast<std::size_t>(d)]) <= ulps * bound[static_cast<std::size_t>(d)]) --d;
      if (d < 0) break;
      r = Polynomial(std::vector<double>(r.coeffs().begin(), r.coeffs().begin() + d + 1));
      chain_.push_back(detail::normalized(-r));
    }
  }

  std::vector<Polynomial> chain_;
};

namespace detail {

/// Refines a sign-change bracket of q by bisection.
inline double bisect_root(const Polynomial& q, double a, double b, int sa, double tol) {
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const int sm = sign_of(q(m));
    if (sm == 0) return m;
    if (sm == sa) a = m; else b = m;
  }
  return 0.5 * (a + b);
}

inline void isolate_in(const SturmChain& chain, double a, double b, int va, int vb, double tol,
                       std::vector<double>& roots) {
  const int n = std::max(0, va - vb);
  if (n == 0) return;
  const Polynomial& q = chain.square_free();
  if (n == 1) {
    const int sa = sign_of(q(a));
    const int sb = sign_of(q(b));
    if (sb == 0) {
      roots.push_back(b);
      return;
    }
    if (sa != 0 && sa != sb) {
      roots.push_back(bisect_root(q, a, b, sa, tol));
      return;
    }
    // No sign change despite a counted root; fall through and keep splitting.
  }
  if (b - a <= tol) {
    roots.push_back(0.5 * (a + b));
    return;
  }
  const double m = 0.5 * (a + b);
  const int vm = chain.sign_variations(m);
  isolate_in(chain, a, m, va, vm, tol, roots);
  isolate_in(chain, m, b, vm, vb, tol, roots);
}

}  // namespace detail

/// Distinct real roots in [lo, hi] (closed), ascending, refined to `tol`.
inline std::vector<double> isolate_roots_with(const SturmChain& chain, double lo, double hi, double tol) {
  std::vector<double> roots;
  const Polynomial& q = chain.square_free();
  if (q.degree_bound() == 0) return roots;
  if (std::abs(q(lo)) <= 1e-15 * q.abs_sum_at(lo)) roots.push_back(lo);
  detail::isolate_in(chain, lo, hi, chain.sign_variations(lo), chain.sign_variations(hi), tol, roots);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(), [tol](double x, double y) { return y - x <= tol; }), roots.end());
  return roots;
}

/// Number of distinct real roots of p in (t_s, t_e], via Sturm's theorem on
/// the unit-window image of p.
inline int sturm_count(const Polynomial& p, const TimeWindow& w) {
  const SturmChain chain(to_unit_variable(p, w));
  return chain.count_roots(-1.0, 1.0);
}

/// All distinct real roots of p in [t_s, t_e], ascending, each within
/// 1e-10 * window length.
inline std::vector<double> isolate_roots(const Polynomial& p, const TimeWindow& w) {
  const SturmChain chain(to_unit_variable(p, w));
  auto roots = isolate_roots_with(chain, -1.0, 1.0, 2.0 * kRootTolerance);
  for (double& r : roots) r = w.from_unit(r);
  return roots;
}

}  // namespace polyccd
