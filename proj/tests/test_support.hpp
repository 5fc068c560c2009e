#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "polyccd/interval_set.hpp"
#include "polyccd/polynomial.hpp"

namespace polyccd::oracle {

inline Polynomial random_polynomial(std::mt19937_64& rng, int degree, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  for (double& v : c) v = u(rng);
  return Polynomial(std::move(c));
}

inline Polynomial from_roots(const std::vector<double>& roots, double lead = 1.0) {
  Polynomial p{lead};
  for (double r : roots) p = p * Polynomial{-r, 1.0};
  return p;
}

/// Term-by-term power sum in extended precision, independent of Horner.
inline double power_sum(const Polynomial& p, double t) {
  long double acc = 0.0L;
  long double tk = 1.0L;
  for (int i = 0; i <= p.degree_bound(); ++i) {
    acc += static_cast<long double>(p[static_cast<std::size_t>(i)]) * tk;
    tk *= t;
  }
  return static_cast<double>(acc);
}

/// Sign changes of p on an n-point uniform grid of (lo, hi], each refined by
/// plain bisection. Grid points where p is exactly zero count as roots.
inline std::vector<double> grid_roots(const Polynomial& p, double lo, double hi, int n) {
  std::vector<double> roots;
  auto f = [&](double t) { return power_sum(p, t); };
  double a = lo;
  double fa = f(a);
  for (int k = 1; k <= n; ++k) {
    const double b = lo + (hi - lo) * k / n;
    const double fb = f(b);
    if (fb == 0.0) {
      roots.push_back(b);
    } else if (fa * fb < 0.0) {
      double x0 = a, x1 = b, f0 = fa;
      for (int it = 0; it < 200 && x1 - x0 > 1e-15 * std::max(1.0, std::abs(x0)); ++it) {
        const double m = 0.5 * (x0 + x1);
        const double fm = f(m);
        if ((fm < 0.0) == (f0 < 0.0)) {
          x0 = m;
          f0 = fm;
        } else {
          x1 = m;
        }
      }
      roots.push_back(0.5 * (x0 + x1));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

/// Boolean mask of grid points covered by a set.
inline std::vector<bool> mask_of(const IntervalSet& s, const std::vector<double>& grid) {
  std::vector<bool> m(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) m[i] = s.contains(grid[i]);
  return m;
}

inline double distance_to_boundary(const IntervalSet& s, double t) {
  double best = INFINITY;
  for (const auto& iv : s) best = std::min({best, std::abs(t - iv.lo), std::abs(t - iv.hi)});
  return best;
}

}  // namespace polyccd::oracle
