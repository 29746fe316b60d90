#include "quasispec/sturm.hpp"

#include <algorithm>
#include <cmath>

namespace quasispec {

namespace {

constexpr std::size_t kBlock = 256;

// ---- one step of the pivot recurrence, shared by both kernels -------------

inline double guard(double q, double pivmin) { return std::abs(q) <= pivmin ? -pivmin : q; }

inline double first_pivot(double d, double x, double pivmin) { return guard(d - x, pivmin); }

inline double next_pivot(double d, double e2, double x, double q, double pivmin) {
  return guard((d - x) - e2 / q, pivmin);
}

inline void guard_dd(double th, double tl, double pivmin, double& qh, double& ql) {
  const bool tiny = std::abs(th) <= pivmin;
  qh = tiny ? -pivmin : th;
  ql = tiny ? 0.0 : tl;
}

inline void first_pivot_dd(double dh, double dl, double xh, double xl, double pivmin, double& qh, double& ql) {
  double th, tl;
  eft::dd_add(dh, dl, -xh, -xl, th, tl);
  guard_dd(th, tl, pivmin, qh, ql);
}

// q <- (d - x) - e2 / q
inline void next_pivot_dd(double dh, double dl, double eh, double el, double xh, double xl, double pivmin,
                          double& qh, double& ql) {
  double sh, sl, rh, rl, th, tl;
  eft::dd_add(dh, dl, -xh, -xl, sh, sl);
  eft::dd_div(eh, el, qh, ql, rh, rl);
  eft::dd_add(sh, sl, -rh, -rl, th, tl);
  guard_dd(th, tl, pivmin, qh, ql);
}

}  // namespace

template <typename R>
SturmMatrix<R>::SturmMatrix(const SymTridiag<R>& t) : diag(t.diag), off_sq(t.dim(), R(0)) {
  double max_e2 = 1.0;
  for (std::size_t i = 0; i + 1 < t.dim(); ++i) {
    const double e = to_double(t.off[i]);
    max_e2 = std::max(max_e2, e * e);
  }
  // Far below any meaningful pivot, far above the underflow threshold of the
  // low-order word.
  pivmin = 0x1p-900 * max_e2;
  for (std::size_t i = 1; i < t.dim(); ++i) {
    const R e2 = t.off[i - 1] * t.off[i - 1];
    off_sq[i] = e2 < R(pivmin) ? R(pivmin) : e2;
  }
}

// ---- double -----------------------------------------------------------------

template <>
void sturm_counts_serial<double>(const SturmMatrix<double>& m, std::span<const double> shifts,
                                 std::span<std::int32_t> counts) {
  const std::size_t n = m.dim();
  const double* d = m.diag.data();
  const double* e2 = m.off_sq.data();
  for (std::size_t j = 0; j < shifts.size(); ++j) {
    const double x = shifts[j];
    double q = first_pivot(d[0], x, m.pivmin);
    std::int32_t c = q < 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      q = next_pivot(d[i], e2[i], x, q, m.pivmin);
      c += q < 0.0;
    }
    counts[j] = c;
  }
}

template <>
void sturm_counts_parallel<double>(const SturmMatrix<double>& m, std::span<const double> shifts,
                                   std::span<std::int32_t> counts) {
  const std::size_t n = m.dim();
  const double* d = m.diag.data();
  const double* e2 = m.off_sq.data();
  const double pivmin = m.pivmin;
  const std::size_t total = shifts.size();
  const std::ptrdiff_t blocks = static_cast<std::ptrdiff_t>((total + kBlock - 1) / kBlock);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
    const std::size_t len = std::min(kBlock, total - begin);
    alignas(64) double x[kBlock];
    alignas(64) double q[kBlock];
    alignas(64) std::int32_t c[kBlock];
    for (std::size_t j = 0; j < len; ++j) x[j] = shifts[begin + j];
#pragma omp simd
    for (std::size_t j = 0; j < len; ++j) {
      q[j] = first_pivot(d[0], x[j], pivmin);
      c[j] = q[j] < 0.0;
    }
    for (std::size_t i = 1; i < n; ++i) {
      const double di = d[i];
      const double ei = e2[i];
#pragma omp simd
      for (std::size_t j = 0; j < len; ++j) {
        q[j] = next_pivot(di, ei, x[j], q[j], pivmin);
        c[j] += q[j] < 0.0;
      }
    }
    for (std::size_t j = 0; j < len; ++j) counts[begin + j] = c[j];
  }
}

// ---- double-double ------------------------------------------------------------

template <>
void sturm_counts_serial<DoubleDouble>(const SturmMatrix<DoubleDouble>& m, std::span<const DoubleDouble> shifts,
                                       std::span<std::int32_t> counts) {
  const std::size_t n = m.dim();
  for (std::size_t j = 0; j < shifts.size(); ++j) {
    const double xh = shifts[j].hi, xl = shifts[j].lo;
    double qh, ql;
    first_pivot_dd(m.diag[0].hi, m.diag[0].lo, xh, xl, m.pivmin, qh, ql);
    std::int32_t c = qh < 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      next_pivot_dd(m.diag[i].hi, m.diag[i].lo, m.off_sq[i].hi, m.off_sq[i].lo, xh, xl, m.pivmin, qh, ql);
      c += qh < 0.0;
    }
    counts[j] = c;
  }
}

template <>
void sturm_counts_parallel<DoubleDouble>(const SturmMatrix<DoubleDouble>& m, std::span<const DoubleDouble> shifts,
                                         std::span<std::int32_t> counts) {
  const std::size_t n = m.dim();
  const double pivmin = m.pivmin;
  const std::size_t total = shifts.size();
  const std::ptrdiff_t blocks = static_cast<std::ptrdiff_t>((total + kBlock - 1) / kBlock);

  // Structure-of-arrays copy so the lane loop streams plain doubles.
  std::vector<double> dh(n), dl(n), eh(n), el(n);
  for (std::size_t i = 0; i < n; ++i) {
    dh[i] = m.diag[i].hi;
    dl[i] = m.diag[i].lo;
    eh[i] = m.off_sq[i].hi;
    el[i] = m.off_sq[i].lo;
  }

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
    const std::size_t len = std::min(kBlock, total - begin);
    alignas(64) double xh[kBlock], xl[kBlock];
    alignas(64) double qh[kBlock], ql[kBlock];
    alignas(64) std::int32_t c[kBlock];
    for (std::size_t j = 0; j < len; ++j) {
      xh[j] = shifts[begin + j].hi;
      xl[j] = shifts[begin + j].lo;
    }
#pragma omp simd
    for (std::size_t j = 0; j < len; ++j) {
      first_pivot_dd(dh[0], dl[0], xh[j], xl[j], pivmin, qh[j], ql[j]);
      c[j] = qh[j] < 0.0;
    }
    for (std::size_t i = 1; i < n; ++i) {
      const double dhi = dh[i], dli = dl[i], ehi = eh[i], eli = el[i];
#pragma omp simd
      for (std::size_t j = 0; j < len; ++j) {
        next_pivot_dd(dhi, dli, ehi, eli, xh[j], xl[j], pivmin, qh[j], ql[j]);
        c[j] += qh[j] < 0.0;
      }
    }
    for (std::size_t j = 0; j < len; ++j) counts[begin + j] = c[j];
  }
}

template struct SturmMatrix<double>;
template struct SturmMatrix<DoubleDouble>;

}  // namespace quasispec
