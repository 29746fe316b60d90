#include "quasispec/interval_set.hpp"

#include <algorithm>
#include <queue>
#include <string>

namespace quasispec {

template <typename R>
IntervalSet<R> IntervalSet<R>::from_intervals(std::vector<Interval<R>> parts) {
  for (const auto& iv : parts) {
    require_finite(iv.lo, "interval endpoint");
    require_finite(iv.hi, "interval endpoint");
    if (iv.hi < iv.lo) throw InputError("interval with hi < lo");
  }
  std::sort(parts.begin(), parts.end(), [](const Interval<R>& x, const Interval<R>& y) { return x.lo < y.lo; });
  IntervalSet out;
  for (const auto& iv : parts) {
    if (!out.parts_.empty() && !(out.parts_.back().hi < iv.lo))
      out.parts_.back().hi = max_of(out.parts_.back().hi, iv.hi);
    else
      out.parts_.push_back(iv);
  }
  return out;
}

template <typename R>
Interval<R> IntervalSet<R>::hull() const {
  if (parts_.empty()) throw InputError("hull of an empty interval set");
  return {parts_.front().lo, parts_.back().hi};
}

template <typename R>
R IntervalSet<R>::measure() const {
  R total(0);
  for (const auto& iv : parts_) total += iv.width();
  return total;
}

template <typename R>
IntervalSet<R> set_union(const IntervalSet<R>& a, const IntervalSet<R>& b) {
  std::vector<Interval<R>> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  return IntervalSet<R>::from_intervals(std::move(all));
}

template <typename R>
bool contains(const IntervalSet<R>& a, const IntervalSet<R>& b, const R& tol) {
  if (tol < R(0)) throw InputError("containment tolerance must be nonnegative");
  // Fattening a by tol and normalizing turns the test into "each interval of
  // b sits inside a single interval of the fattened set".
  std::vector<Interval<R>> fat;
  fat.reserve(a.size());
  for (const auto& iv : a) fat.push_back({iv.lo - tol, iv.hi + tol});
  const IntervalSet<R> f = IntervalSet<R>::from_intervals(std::move(fat));
  std::size_t i = 0;
  for (const auto& iv : b) {
    while (i < f.size() && f[i].hi < iv.lo) ++i;
    if (i == f.size()) return false;
    if (iv.lo < f[i].lo || f[i].hi < iv.hi) return false;
  }
  return true;
}

template <typename R>
IntervalSet<R> gaps(const IntervalSet<R>& a, std::optional<Interval<R>> hull) {
  if (a.empty()) throw InputError("gaps of an empty interval set");
  const Interval<R> h = hull ? *hull : a.hull();
  std::vector<Interval<R>> out;
  R cursor = h.lo;
  bool bounded_left = hull.has_value();
  for (const auto& iv : a) {
    if (bounded_left && cursor < iv.lo) {
      const R hi = min_of(iv.lo, h.hi);
      if (cursor < hi) out.push_back({cursor, hi});
    }
    bounded_left = true;
    cursor = max_of(cursor, iv.hi);
    if (!(cursor < h.hi)) break;
  }
  if (hull && cursor < h.hi) out.push_back({cursor, h.hi});
  return IntervalSet<R>::from_intervals(std::move(out));
}

template <typename R>
IntervalSet<R> minkowski_sum(const IntervalSet<R>& a, const IntervalSet<R>& b, std::size_t cap) {
  if (a.empty() || b.empty()) return {};
  // Row i (a_i + every b_j) is already sorted by lower end; merge the rows
  // lazily so the working set stays O(|a| + output).
  struct Head {
    R lo;
    std::size_t i;
    std::size_t j;
  };
  auto later = [](const Head& x, const Head& y) { return y.lo < x.lo; };
  std::priority_queue<Head, std::vector<Head>, decltype(later)> heap(later);
  for (std::size_t i = 0; i < a.size(); ++i) heap.push({a[i].lo + b[0].lo, i, 0});

  std::vector<Interval<R>> out;
  while (!heap.empty()) {
    const Head h = heap.top();
    heap.pop();
    const R hi = a[h.i].hi + b[h.j].hi;
    if (!out.empty() && !(out.back().hi < h.lo)) {
      out.back().hi = max_of(out.back().hi, hi);
    } else {
      if (out.size() == cap) throw InputError("Minkowski sum exceeds " + std::to_string(cap) + " intervals");
      out.push_back({h.lo, hi});
    }
    if (h.j + 1 < b.size()) heap.push({a[h.i].lo + b[h.j + 1].lo, h.i, h.j + 1});
  }
  return IntervalSet<R>::from_intervals(std::move(out));
}

#define QUASISPEC_INSTANTIATE(R)                                                                   \
  template class IntervalSet<R>;                                                                  \
  template IntervalSet<R> set_union<R>(const IntervalSet<R>&, const IntervalSet<R>&);             \
  template bool contains<R>(const IntervalSet<R>&, const IntervalSet<R>&, const R&);              \
  template IntervalSet<R> gaps<R>(const IntervalSet<R>&, std::optional<Interval<R>>);             \
  template IntervalSet<R> minkowski_sum<R>(const IntervalSet<R>&, const IntervalSet<R>&, std::size_t);

QUASISPEC_INSTANTIATE(double)
QUASISPEC_INSTANTIATE(DoubleDouble)

}  // namespace quasispec
