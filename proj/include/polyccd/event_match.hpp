#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "polyccd/interval_set.hpp"

namespace polyccd {

/// Outcome of pairing exact collision intervals with a sampled mask.
struct EventMatch {
  std::size_t matched = 0;
  std::size_t missed = 0;
  std::size_t spurious = 0;
  /// Exact intervals shorter than two steps that fall between samples.
  std::size_t below_resolution = 0;
  /// Largest endpoint gap over matched pairs.
  double worst_boundary_error = 0.0;

  bool clean() const { return missed == 0 && spurious == 0; }
};

/// Pairs the components of `exact` with those of `sampled` (a mask on a grid
/// of step dt). Gaps of at most 2 dt are closed on both sides since the grid
/// cannot resolve them. An exact component shorter than 2 dt that no sampled
/// component comes within dt of is below resolution rather than spurious.
/// Components overlapping (within dt) exactly one partner are matched; every
/// other sampled component is missed and every other exact one is spurious.
inline EventMatch match_events(const IntervalSet& exact, const IntervalSet& sampled, double dt) {
  const IntervalSet c = exact.closed_gaps(2.0 * dt);
  const IntervalSet s = sampled.closed_gaps(2.0 * dt);
  auto near = [dt](const Interval& a, const Interval& b) { return a.lo <= b.hi + dt && b.lo <= a.hi + dt; };
  EventMatch m;
  std::vector<int> partners_of_s(s.size(), 0);
  std::vector<int> partners_of_c(c.size(), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (near(c[i], s[j])) {
        ++partners_of_c[i];
        ++partners_of_s[j];
      }
    }
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (partners_of_c[i] == 0) {
      if (c[i].length() < 2.0 * dt) {
        ++m.below_resolution;
      } else {
        ++m.spurious;
      }
      continue;
    }
    if (partners_of_c[i] > 1) {
      ++m.spurious;
      continue;
    }
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!near(c[i], s[j])) continue;
      if (partners_of_s[j] != 1) {
        ++m.spurious;
        break;
      }
      ++m.matched;
      m.worst_boundary_error =
          std::max({m.worst_boundary_error, std::abs(c[i].lo - s[j].lo), std::abs(c[i].hi - s[j].hi)});
    }
  }
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (partners_of_s[j] != 1) ++m.missed;
  }
  return m;
}

}  // namespace polyccd
