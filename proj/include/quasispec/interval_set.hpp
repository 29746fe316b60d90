#pragma once

// Finite unions of closed real intervals, kept sorted, disjoint and
// normalized (intervals that touch are merged).

#include <cstddef>
#include <optional>
#include <vector>

#include "quasispec/realnum.hpp"

namespace quasispec {

template <typename R>
struct Interval {
  R lo;
  R hi;

  R width() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

template <typename R>
class IntervalSet {
 public:
  IntervalSet() = default;

  /// Any collection of intervals (lo <= hi, finite) in any order.
  static IntervalSet from_intervals(std::vector<Interval<R>> parts);

  const std::vector<Interval<R>>& intervals() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }
  auto begin() const { return parts_.begin(); }
  auto end() const { return parts_.end(); }
  const Interval<R>& operator[](std::size_t i) const { return parts_[i]; }

  /// Throws InputError when the set is empty.
  Interval<R> hull() const;
  R measure() const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval<R>> parts_;
};

template <typename R>
IntervalSet<R> set_union(const IntervalSet<R>& a, const IntervalSet<R>& b);

/// True iff every point of b lies within distance tol of a.
template <typename R>
bool contains(const IntervalSet<R>& a, const IntervalSet<R>& b, const R& tol);

/// Bounded complementary intervals of a inside hull (default: the convex hull
/// of a), as closed intervals [hi_i, lo_{i+1}]. Being closed, two gaps that
/// meet at an isolated point of a come back merged.
template <typename R>
IntervalSet<R> gaps(const IntervalSet<R>& a, std::optional<Interval<R>> hull = std::nullopt);

inline constexpr std::size_t kMinkowskiCap = 10'000'000;

/// Normalized union of all pairwise sums. Throws InputError if the result
/// would hold more than cap intervals.
template <typename R>
IntervalSet<R> minkowski_sum(const IntervalSet<R>& a, const IntervalSet<R>& b, std::size_t cap = kMinkowskiCap);

}  // namespace quasispec
