#include "quasispec/jacobi.hpp"

#include <algorithm>
#include <cmath>

namespace quasispec {

template <typename R>
void PeriodicJacobi<R>::validate() const {
  if (b.empty()) throw InputError("period K must be at least 1");
  if (a.size() != b.size()) throw InputError("coefficient sequences a and b must both have length K");
  for (const R& v : a) {
    if (!is_finite(v)) throw InputError("non-finite off-diagonal coefficient");
    if (v == R(0)) throw InputError("off-diagonal coefficients must be nonzero");
  }
  for (const R& v : b)
    if (!is_finite(v)) throw InputError("non-finite diagonal coefficient");
}

template <typename R>
R PeriodicJacobi<R>::norm_bound() const {
  using std::abs;
  R ma(0), mb(0);
  for (const R& v : a) ma = max_of(ma, abs(v));
  for (const R& v : b) mb = max_of(mb, abs(v));
  return R(2) * ma + mb;
}

template <typename R>
DenseSym<R> assemble_jpm(const PeriodicJacobi<R>& j, int sign) {
  j.validate();
  if (sign != 1 && sign != -1) throw InputError("boundary sign must be +1 or -1");
  const std::size_t k = j.period();
  const R s(static_cast<double>(sign));
  DenseSym<R> m(k);
  if (k == 1) {
    m.set(0, 0, j.b[0] + s * R(2) * j.a[0]);
    return m;
  }
  for (std::size_t i = 0; i < k; ++i) m.set(i, i, j.b[i]);
  for (std::size_t i = 0; i + 1 < k; ++i) m.set(i + 1, i, j.a[i]);
  m.add(k - 1, 0, s * j.a[k - 1]);
  return m;
}

std::vector<std::size_t> cycle_reorder(std::size_t k) {
  if (k < 3) throw InputError("cycle reordering needs K >= 3");
  const std::size_t half = (k + 1) / 2;
  std::vector<std::size_t> label(k);
  for (std::size_t j = 1; j <= k; ++j) label[j - 1] = j <= half ? 2 * j - 1 : 2 * (k - j + 1);
  return label;
}

template <typename R>
SymPentadiag<R> assemble_reordered(const PeriodicJacobi<R>& j, int sign) {
  j.validate();
  if (sign != 1 && sign != -1) throw InputError("boundary sign must be +1 or -1");
  const std::size_t k = j.period();
  const std::vector<std::size_t> label = cycle_reorder(k);
  SymPentadiag<R> p(k);
  for (std::size_t i = 0; i < k; ++i) p.diag[label[i] - 1] = j.b[i];
  // Cycle edge i -- i+1 (mod K) carries a_{i+1}; the wrap edge carries the sign.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t u = label[i] - 1;
    const std::size_t v = label[(i + 1) % k] - 1;
    const R w = i + 1 == k ? R(static_cast<double>(sign)) * j.a[i] : j.a[i];
    const std::size_t lo = std::min(u, v);
    const std::size_t d = std::max(u, v) - lo;
    if (d == 1)
      p.off1[lo] = w;
    else if (d == 2)
      p.off2[lo] = w;
    else
      throw NumericalError("cycle reordering produced bandwidth > 2");
  }
  return p;
}

template <typename R>
std::vector<R> boundary_eigenvalues(const PeriodicJacobi<R>& j, int sign, Execution exec, ReductionStats* stats) {
  if (j.period() < 3) return dense_eig(assemble_jpm(j, sign));
  const SymTridiag<R> t = penta_to_tridiag(assemble_reordered(j, sign), stats);
  return tridiag_eigenvalues<R>(t, std::nullopt, exec);
}

template <typename R>
Source lowest_source(const PeriodicJacobi<R>& j) {
  // tr M_K(E) ~ E^K / prod(a) as E -> -inf; the bottom band edge is where the
  // discriminant first reaches +2 (J+) or -2 (J-).
  bool positive = j.period() % 2 == 0;
  for (const R& v : j.a)
    if (v < R(0)) positive = !positive;
  return positive ? Source::Plus : Source::Minus;
}

template <typename R>
SpectrumResult<R> spectrum(const PeriodicJacobi<R>& j, Execution exec) {
  j.validate();
  const std::size_t k = j.period();
  SpectrumResult<R> res;
  ReductionStats stats;
  res.eigs_plus = boundary_eigenvalues(j, +1, exec, &stats);
  res.eigs_minus = boundary_eigenvalues(j, -1, exec, &stats);
  res.rotations = stats.rotations;

  const R width = repair_width<R>();
  const R half_width = ldexp(width, -1);
  Source lower = lowest_source(j);
  res.bands.reserve(k);
  res.lower_source.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const R& p = res.eigs_plus[i];
    const R& m = res.eigs_minus[i];
    R lo = lower == Source::Plus ? p : m;
    R hi = lower == Source::Plus ? m : p;
    if (p == m) ++res.ties;
    // Inside a band the ends are strictly ordered. A band narrower than the
    // repair width is below what the precision resolves and is treated the
    // same way as an inverted one.
    const bool violated = !(lo < hi) || hi - lo < width;
    if (violated) {
      using std::abs;
      const R mid = ldexp(lo + hi, -1);
      // Round outward: far from the origin a 10u offset is below one ulp of
      // mid, so widen in steps of at least an ulp until the width is 20u.
      const R step = max_of(half_width, abs(mid) * R(4 * unit_roundoff_of<R>()));
      lo = mid - half_width;
      hi = mid + half_width;
      for (int guard = 0; hi - lo < width && guard < 8; ++guard) {
        lo = lo - step;
        hi = hi + step;
      }
      ++res.repaired;
    }
    if (i > 0 && res.bands.back().hi == lo) ++res.ties;
    res.bands.push_back({lo, hi});
    res.lower_source.push_back(lower);
    res.band_repaired.push_back(violated);
    lower = lower == Source::Plus ? Source::Minus : Source::Plus;
  }
  res.merged = IntervalSet<R>::from_intervals(res.bands);
  return res;
}

#define QUASISPEC_INSTANTIATE(R)                                                                        \
  template struct PeriodicJacobi<R>;                                                                   \
  template DenseSym<R> assemble_jpm<R>(const PeriodicJacobi<R>&, int);                                 \
  template SymPentadiag<R> assemble_reordered<R>(const PeriodicJacobi<R>&, int);                       \
  template std::vector<R> boundary_eigenvalues<R>(const PeriodicJacobi<R>&, int, Execution, ReductionStats*); \
  template Source lowest_source<R>(const PeriodicJacobi<R>&);                                          \
  template SpectrumResult<R> spectrum<R>(const PeriodicJacobi<R>&, Execution);

QUASISPEC_INSTANTIATE(double)
QUASISPEC_INSTANTIATE(DoubleDouble)

}  // namespace quasispec
