#pragma once

// Sturm-count kernels: for a batch of shifts x_j, count the negative pivots of
// T - x_j I. The batch kernel runs the recurrence for many shifts at once
// (threads over shift blocks, SIMD lanes within a block); the serial kernel is
// the one-shift-at-a-time reference. Both evaluate the identical sequence of
// IEEE operations, so their counts agree bit for bit.

#include <cstdint>
#include <span>
#include <vector>

#include "quasispec/bandeig.hpp"

namespace quasispec {

template <typename R>
struct SturmMatrix {
  std::vector<R> diag;
  std::vector<R> off_sq;  // max(e_i^2, pivmin); off_sq[0] is unused
  double pivmin = 0.0;

  explicit SturmMatrix(const SymTridiag<R>& t);
  std::size_t dim() const { return diag.size(); }
};

template <typename R>
void sturm_counts_serial(const SturmMatrix<R>& m, std::span<const R> shifts, std::span<std::int32_t> counts);

template <typename R>
void sturm_counts_parallel(const SturmMatrix<R>& m, std::span<const R> shifts, std::span<std::int32_t> counts);

template <typename R>
inline void sturm_counts(const SturmMatrix<R>& m, std::span<const R> shifts, std::span<std::int32_t> counts,
                         Execution exec) {
  if (exec == Execution::Serial)
    sturm_counts_serial(m, shifts, counts);
  else
    sturm_counts_parallel(m, shifts, counts);
}

}  // namespace quasispec
