#pragma once

// Fractal statistics of covers: the two-level Hausdorff-dimension heuristic,
// exact box counts, gap and band-width diagnostics, and log-log slope fits.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "quasispec/cover.hpp"

namespace quasispec {

enum class DimStatus {
  Converged,       // |f(alpha)| <= root tolerance
  NoSignChange,    // f(0) f(1) > 0; alpha minimizes |f| on a 1024-point grid
  DegenerateCover, // f vanishes to within tolerance across [0, 1] for different covers
  MaxIterations,   // bracket exhausted before |f| reached the tolerance
};

std::string_view to_string(DimStatus s);

template <typename R>
struct DimensionEstimate {
  R alpha{0};
  unsigned k = 0;
  unsigned k1 = 0;
  R residual{0};
  int iterations = 0;
  DimStatus status = DimStatus::Converged;
  bool identical_covers = false;  // f == 0; alpha = 1 by convention
  bool monotone = true;           // f monotone on a 64-point grid
};

template <typename R>
R default_root_tol() {
  return R(unit_roundoff_of<R>() < 1e-30 ? 1e-24 : 1e-12);
}

/// Root of f(a) = sum w_i^a - sum w'_j^a on [0, 1] by bisection (200 steps
/// at most). Widths below floor count as floor.
template <typename R>
DimensionEstimate<R> hausdorff_estimate(std::span<const R> widths_k, std::span<const R> widths_k1,
                                        std::optional<R> root_tol = std::nullopt,
                                        R floor = repair_width<R>());

/// Same, over the unmerged bands of two covers.
template <typename R>
DimensionEstimate<R> hausdorff_estimate(const CoverFamily<R>& ck, const CoverFamily<R>& ck1,
                                        std::optional<R> root_tol = std::nullopt);

template <typename R>
struct BoxCount {
  R eps;
  std::uint64_t count;
};

/// Number of cells [j eps, (j+1) eps) meeting the set in positive length. An
/// isolated point counts the cell that contains it. Cell edges j * eps are
/// compared with the endpoints exactly, not after rounding.
template <typename R>
BoxCount<R> box_count(const IntervalSet<R>& a, const R& eps);

/// (eps, log N(eps) / log(1/eps)) for each eps.
template <typename R>
std::vector<std::pair<R, R>> box_dim_curve(const IntervalSet<R>& a, std::span<const R> eps_list);

/// Widest bounded gap of the merged cover; 0 if it is one interval.
template <typename R>
R largest_gap(const IntervalSet<R>& cover);

template <typename R>
R largest_gap(const CoverFamily<R>& c) {
  return largest_gap(c.cover);
}

template <typename R>
struct MinBandWidth {
  R width;
  bool repaired;
};

template <typename R>
MinBandWidth<R> min_band_width(const CoverFamily<R>& c);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Least squares of log y on log x over the points with x in [xmin, xmax]
/// and x, y > 0. Throws InputError with fewer than two usable points.
SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y, double xmin = 0.0,
                    double xmax = std::numeric_limits<double>::infinity());

}  // namespace quasispec
