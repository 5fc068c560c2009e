#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "polyccd/interval_set.hpp"
#include "polyccd/polynomial.hpp"
#include "polyccd/sturm.hpp"

namespace polyccd {

struct SolveStats {
  std::size_t polynomials = 0;
  std::size_t clauses_solved = 0;
  std::size_t sturm_early_exits = 0;
  std::size_t roots_refined = 0;

  SolveStats& operator+=(const SolveStats& o) {
    polynomials += o.polynomials;
    clauses_solved += o.clauses_solved;
    sturm_early_exits += o.sturm_early_exits;
    roots_refined += o.roots_refined;
    return *this;
  }
};

/// One polynomial of a condition system, expressed in the unit variable,
/// with its Sturm data and roots computed on first use.
class UnitConstraint {
 public:
  /// noise_floor is an absolute bound on how far p may sit from the exact
  /// function it stands for (zero for exactly known coefficients).
  explicit UnitConstraint(Polynomial p, double noise_floor = 0.0)
      : p_(std::move(p)), scale_(p_.max_abs_coeff()), noise_(noise_floor) {
    if (!p_.is_finite()) throw Error(ErrorCode::InvalidArgument, "constraint has non-finite coefficients");
  }

  const Polynomial& poly() const { return p_; }
  bool identically_zero() const { return scale_ == 0.0; }

  /// Sign at s; a value inside the Horner roundoff bound or the noise floor
  /// reads as zero.
  int sign_at(double s) const {
    const double v = p_(s);
    const double roundoff = 4.0 * (p_.degree_bound() + 2) * std::numeric_limits<double>::epsilon() * p_.abs_sum_at(s);
    if (std::abs(v) <= std::max(noise_, roundoff)) return 0;
    return v > 0.0 ? 1 : -1;
  }

  /// Distinct roots in (-1, 1].
  int root_count(SolveStats& stats) const {
    if (!count_) {
      ++stats.polynomials;
      chain_.emplace(p_);
      count_ = chain_->count_roots(-1.0, 1.0);
    }
    return *count_;
  }

  const std::vector<double>& roots(SolveStats& stats) const {
    if (!roots_) {
      root_count(stats);
      roots_ = isolate_roots_with(*chain_, -1.0, 1.0, 2.0 * kRootTolerance);
      stats.roots_refined += roots_->size();
    }
    return *roots_;
  }

 private:
  Polynomial p_;
  double scale_;
  double noise_;
  mutable std::optional<SturmChain> chain_;
  mutable std::optional<int> count_;
  mutable std::optional<std::vector<double>> roots_;
};

/// Constraint `sign * polys[index] >= 0`; sign is +1 or -1.
struct Literal {
  std::size_t index = 0;
  int sign = 1;
};

/// Solves one conjunction of literals over the unit window following the
/// Sturm-gated early-exit ladder, then a pooled-root sign table.
/// Returns intervals in the unit variable.
inline std::vector<Interval> solve_clause_unit(std::span<const Literal> clause, std::span<const UnitConstraint> polys,
                                               SolveStats& stats) {
  ++stats.clauses_solved;
  std::vector<Literal> active;
  for (const Literal& lit : clause) {
    const UnitConstraint& g = polys[lit.index];
    if (g.identically_zero()) continue;  // 0 >= 0 holds everywhere
    const int n = g.root_count(stats);
    const int s0 = lit.sign * g.sign_at(-1.0);
    if (n == 0) {
      const int s1 = lit.sign * g.sign_at(1.0);
      // A sign change without a counted root means the chain lost a root; keep it.
      if (s0 * s1 >= 0) {
        if (s0 > 0) continue;
        if (s0 < 0 || s1 <= 0) {
          ++stats.sturm_early_exits;
          return {};
        }
        continue;
      }
    }
    active.push_back(lit);
  }
  if (active.empty()) return {Interval{-1.0, 1.0}};

  std::vector<double> cuts{-1.0, 1.0};
  for (const Literal& lit : active) {
    const auto& r = polys[lit.index].roots(stats);
    cuts.insert(cuts.end(), r.begin(), r.end());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Interval> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double m = 0.5 * (cuts[k] + cuts[k + 1]);
    const bool ok = std::all_of(active.begin(), active.end(), [&](const Literal& lit) {
      return lit.sign * polys[lit.index].sign_at(m) >= 0;
    });
    if (!ok) continue;
    if (!out.empty() && out.back().hi == cuts[k]) {
      out.back().hi = cuts[k + 1];
    } else {
      out.push_back({cuts[k], cuts[k + 1]});
    }
  }
  return out;
}

inline IntervalSet map_from_unit(std::span<const Interval> unit, const TimeWindow& w) {
  std::vector<Interval> out;
  out.reserve(unit.size());
  for (const auto& iv : unit) out.push_back({w.from_unit(iv.lo), w.from_unit(iv.hi)});
  return IntervalSet(std::move(out));
}

/// {t in window : g(t) >= 0 for every g in gs}, as closed intervals.
inline IntervalSet solve_conjunction(std::span<const Polynomial> gs, const TimeWindow& window,
                                     SolveStats* stats = nullptr) {
  if (gs.empty()) throw Error(ErrorCode::InvalidArgument, "solve_conjunction needs at least one polynomial");
  std::vector<UnitConstraint> polys;
  std::vector<Literal> clause;
  polys.reserve(gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    polys.emplace_back(to_unit_variable(gs[i], window));
    clause.push_back({i, 1});
  }
  SolveStats local;
  const auto unit = solve_clause_unit(clause, polys, stats ? *stats : local);
  return map_from_unit(unit, window);
}

inline IntervalSet solve_conjunction(std::initializer_list<Polynomial> gs, const TimeWindow& window,
                                     SolveStats* stats = nullptr) {
  return solve_conjunction(std::span<const Polynomial>(gs.begin(), gs.size()), window, stats);
}

}  // namespace polyccd
