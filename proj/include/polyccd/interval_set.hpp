#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <ostream>
#include <vector>

#include "polyccd/polynomial.hpp"

namespace polyccd {

/// Gaps narrower than this (seconds) are treated as root-refinement noise.
inline constexpr double kIntervalMergeTolerance = 1e-9;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted, pairwise-disjoint union of closed intervals.
///
/// Every mutating operation re-normalizes: pairs are sorted and any two whose
/// gap is at most the merge tolerance are fused.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> intervals, double merge_tol = kIntervalMergeTolerance)
      : intervals_(std::move(intervals)) {
    normalize(merge_tol);
  }
  IntervalSet(std::initializer_list<Interval> intervals) : IntervalSet(std::vector<Interval>(intervals)) {}

  static IntervalSet whole(const TimeWindow& w) { return IntervalSet({Interval{w.start(), w.end()}}); }

  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }
  const std::vector<Interval>& intervals() const { return intervals_; }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }
  auto begin() const { return intervals_.begin(); }
  auto end() const { return intervals_.end(); }

  double measure() const {
    double m = 0.0;
    for (const auto& iv : intervals_) m += iv.length();
    return m;
  }

  /// Lowest covered instant, or NaN when empty.
  double first() const { return empty() ? std::numeric_limits<double>::quiet_NaN() : intervals_.front().lo; }

  bool contains(double t) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                               [](double v, const Interval& iv) { return v < iv.lo; });
    if (it == intervals_.begin()) return false;
    return std::prev(it)->contains(t);
  }

  /// True when every point of this set lies in `other` (up to `slack` seconds).
  bool subset_of(const IntervalSet& other, double slack = 0.0) const {
    for (const auto& iv : intervals_) {
      bool covered = false;
      for (const auto& o : other.intervals_) {
        if (o.lo - slack <= iv.lo && iv.hi <= o.hi + slack) {
          covered = true;
          break;
        }
      }
      if (!covered) return false;
    }
    return true;
  }

  IntervalSet unite(const IntervalSet& other, double merge_tol = kIntervalMergeTolerance) const {
    std::vector<Interval> all = intervals_;
    all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
    return IntervalSet(std::move(all), merge_tol);
  }

  IntervalSet intersect(const IntervalSet& other) const {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < intervals_.size() && j < other.intervals_.size()) {
      const Interval& a = intervals_[i];
      const Interval& b = other.intervals_[j];
      const double lo = std::max(a.lo, b.lo);
      const double hi = std::min(a.hi, b.hi);
      if (lo <= hi) out.push_back({lo, hi});
      if (a.hi < b.hi) ++i; else ++j;
    }
    return IntervalSet(std::move(out), 0.0);
  }

  /// Clips to the window and drops anything that falls outside it.
  IntervalSet clipped(const TimeWindow& w) const {
    std::vector<Interval> out;
    for (const auto& iv : intervals_) {
      const double lo = std::max(iv.lo, w.start());
      const double hi = std::min(iv.hi, w.end());
      if (lo <= hi) out.push_back({lo, hi});
    }
    return IntervalSet(std::move(out), 0.0);
  }

  /// Fills gaps narrower than `gap` seconds.
  IntervalSet closed_gaps(double gap) const { return IntervalSet(intervals_, gap); }

  /// Drops components shorter than `min_length`.
  IntervalSet without_shorter_than(double min_length) const {
    std::vector<Interval> out;
    for (const auto& iv : intervals_) {
      if (iv.length() >= min_length) out.push_back(iv);
    }
    return IntervalSet(std::move(out), 0.0);
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  void normalize(double merge_tol) {
    for (auto& iv : intervals_) {
      if (iv.lo > iv.hi) std::swap(iv.lo, iv.hi);
    }
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
    std::vector<Interval> merged;
    merged.reserve(intervals_.size());
    for (const auto& iv : intervals_) {
      if (!merged.empty() && iv.lo <= merged.back().hi + merge_tol) {
        merged.back().hi = std::max(merged.back().hi, iv.hi);
      } else {
        merged.push_back(iv);
      }
    }
    intervals_ = std::move(merged);
  }

  std::vector<Interval> intervals_;
};

enum class IntervalOp { Union, Intersect };

inline IntervalSet interval_ops(const IntervalSet& a, const IntervalSet& b, IntervalOp op) {
  return op == IntervalOp::Union ? a.unite(b) : a.intersect(b);
}

/// Hausdorff distance between two closed subsets of the real line.
/// Infinite when exactly one of them is empty, zero when both are.
inline double hausdorff_distance(const IntervalSet& a, const IntervalSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto dist_to = [](const IntervalSet& set, double t) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& iv : set) {
      if (iv.contains(t)) return 0.0;
      best = std::min(best, std::min(std::abs(t - iv.lo), std::abs(t - iv.hi)));
    }
    return best;
  };
  // sup over x in `from` of d(x, to) is attained at an endpoint of `from` or at
  // a midpoint of a gap of `to` that falls inside `from`.
  auto directed = [&](const IntervalSet& from, const IntervalSet& to) {
    double worst = 0.0;
    for (const auto& iv : from) {
      worst = std::max(worst, dist_to(to, iv.lo));
      worst = std::max(worst, dist_to(to, iv.hi));
    }
    for (std::size_t k = 0; k + 1 < to.size(); ++k) {
      const double m = 0.5 * (to[k].hi + to[k + 1].lo);
      if (from.contains(m)) worst = std::max(worst, dist_to(to, m));
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

inline std::ostream& operator<<(std::ostream& os, const IntervalSet& s) {
  if (s.empty()) return os << "{}";
  os << "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ", ";
    os << "[" << s[i].lo << ", " << s[i].hi << "]";
  }
  return os << "}";
}

}  // namespace polyccd
