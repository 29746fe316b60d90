#pragma once

// Period-K Jacobi operators and their spectra. The spectrum is the union of K
// bands whose endpoints are the eigenvalues of the periodic (J+) and
// antiperiodic (J-) K x K boundary matrices.

#include <cstddef>
#include <vector>

#include "quasispec/bandeig.hpp"
#include "quasispec/interval_set.hpp"

namespace quasispec {

template <typename R>
struct PeriodicJacobi {
  std::vector<R> a;  // a_1..a_K, off-diagonal; all nonzero
  std::vector<R> b;  // b_1..b_K, diagonal

  PeriodicJacobi() = default;
  PeriodicJacobi(std::vector<R> a_, std::vector<R> b_) : a(std::move(a_)), b(std::move(b_)) { validate(); }

  std::size_t period() const { return b.size(); }
  void validate() const;
  /// 2 max|a| + max|b|, an upper bound for the operator norm.
  R norm_bound() const;
};

enum class Source { Plus, Minus };

template <typename R>
struct SpectrumResult {
  std::vector<R> eigs_plus;   // sorted, K values
  std::vector<R> eigs_minus;  // sorted, K values
  std::vector<Interval<R>> bands;  // exactly K, ascending, unmerged
  std::vector<Source> lower_source;  // which matrix supplied each band's lower end
  std::vector<bool> band_repaired;
  IntervalSet<R> merged;
  std::size_t repaired = 0;
  // Exactly coincident band endpoints (zero-width bands or closed gaps);
  // pairing there is by index, J+ taken first.
  std::size_t ties = 0;
  std::uint64_t rotations = 0;
};

/// Dense K x K J+ (sign = +1) or J- (sign = -1). For K = 2 the corner and the
/// off-diagonal coincide and add; for K = 1 both neighbours wrap to the site.
template <typename R>
DenseSym<R> assemble_jpm(const PeriodicJacobi<R>& j, int sign);

/// Breadth-first relabeling of the K-cycle: label of original vertex j
/// (1-based) is 2j-1 for j <= ceil(K/2), else 2(K-j+1). Requires K >= 3.
std::vector<std::size_t> cycle_reorder(std::size_t k);

/// J+ or J- with rows and columns permuted by cycle_reorder: bandwidth 2.
template <typename R>
SymPentadiag<R> assemble_reordered(const PeriodicJacobi<R>& j, int sign);

/// Sorted eigenvalues of J+ or J- through reorder -> bulge chase -> bisection
/// (dense Jacobi for K < 3).
template <typename R>
std::vector<R> boundary_eigenvalues(const PeriodicJacobi<R>& j, int sign, Execution exec = Execution::Parallel,
                                    ReductionStats* stats = nullptr);

/// Band j pairs the j-th eigenvalues of J+ and J-. Which of the two is the
/// lower end alternates from band to band; a band whose computed ends are not
/// in that order, or are closer than 20u, is replaced by width 20u about its
/// midpoint (rounded outward).
template <typename R>
SpectrumResult<R> spectrum(const PeriodicJacobi<R>& j, Execution exec = Execution::Parallel);

/// Source of E_1, the bottom of the spectrum.
template <typename R>
Source lowest_source(const PeriodicJacobi<R>& j);

template <typename R>
R repair_width() {
  return R(20.0 * unit_roundoff_of<R>());
}

}  // namespace quasispec
