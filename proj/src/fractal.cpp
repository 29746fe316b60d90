#include "quasispec/fractal.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>
#include <cmath>
#include <limits>

namespace quasispec {

std::string_view to_string(DimStatus s) {
  switch (s) {
    case DimStatus::Converged: return "converged";
    case DimStatus::NoSignChange: return "no-sign-change";
    case DimStatus::DegenerateCover: return "degenerate-cover";
    default: return "max-iterations";
  }
}

namespace {

template <typename R>
class CoverDifference {
 public:
  CoverDifference(std::span<const R> wk, std::span<const R> wk1, const R& floor) {
    using std::log;
    for (const R& w : wk) pos_.push_back(log(max_of(w, floor)));
    for (const R& w : wk1) neg_.push_back(log(max_of(w, floor)));
  }

  R operator()(const R& alpha) const {
    using std::exp;
    R s(0);
    for (const R& l : pos_) s += exp(alpha * l);
    for (const R& l : neg_) s -= exp(alpha * l);
    return s;
  }

 private:
  std::vector<R> pos_;
  std::vector<R> neg_;
};

template <typename R>
int sign_of(const R& x) {
  return x < R(0) ? -1 : (R(0) < x ? 1 : 0);
}

}  // namespace

template <typename R>
DimensionEstimate<R> hausdorff_estimate(std::span<const R> widths_k, std::span<const R> widths_k1,
                                        std::optional<R> root_tol, R floor) {
  using std::abs;
  if (widths_k.empty() || widths_k1.empty()) throw InputError("dimension estimate needs two nonempty covers");
  for (const R& w : widths_k) require_finite(w, "cover width");
  for (const R& w : widths_k1) require_finite(w, "cover width");
  const R tol = root_tol ? *root_tol : default_root_tol<R>();
  if (!(R(0) < tol)) throw InputError("root tolerance must be positive");

  DimensionEstimate<R> est;
  {
    auto clamp_sorted = [&](std::span<const R> ws) {
      std::vector<R> v;
      for (const R& w : ws) v.push_back(max_of(w, floor));
      std::sort(v.begin(), v.end());
      return v;
    };
    if (clamp_sorted(widths_k) == clamp_sorted(widths_k1)) {
      est.alpha = R(1);
      est.identical_covers = true;
      return est;
    }
  }

  const CoverDifference<R> f(widths_k, widths_k1, floor);

  constexpr int kCheck = 64;
  bool up = true, down = true, flat = true;
  R prev = f(R(0));
  for (int i = 1; i <= kCheck; ++i) {
    const R cur = f(R(static_cast<double>(i) / kCheck));
    up = up && !(cur < prev);
    down = down && !(prev < cur);
    flat = flat && !(tol < abs(cur));
    prev = cur;
  }
  est.monotone = up || down;

  const R f0 = f(R(0));
  const R f1 = f(R(1));
  if (!(tol < abs(f0))) {
    est.alpha = R(0);
    est.residual = abs(f0);
    return est;
  }
  if (!(tol < abs(f1))) {
    est.alpha = R(1);
    est.residual = abs(f1);
    return est;
  }
  if (sign_of(f0) == sign_of(f1)) {
    if (flat) {
      est.status = DimStatus::DegenerateCover;
      est.alpha = R(1);
      est.residual = abs(f1);
      return est;
    }
    constexpr int kGrid = 1024;
    est.status = DimStatus::NoSignChange;
    est.residual = abs(f0);
    for (int i = 0; i < kGrid; ++i) {
      const R a = R(static_cast<double>(i) / (kGrid - 1));
      const R r = abs(f(a));
      if (r < est.residual) {
        est.residual = r;
        est.alpha = a;
      }
    }
    return est;
  }

  R lo(0), hi(1), flo = f0;
  R best_alpha(0), best = abs(f0);
  for (int it = 1; it <= 200; ++it) {
    const R mid = ldexp(lo + hi, -1);
    if (!(lo < mid && mid < hi)) break;
    const R fm = f(mid);
    est.iterations = it;
    if (abs(fm) < best) {
      best = abs(fm);
      best_alpha = mid;
    }
    if (!(tol < abs(fm))) {
      est.alpha = mid;
      est.residual = abs(fm);
      return est;
    }
    if (sign_of(fm) == sign_of(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  est.status = DimStatus::MaxIterations;
  est.alpha = best_alpha;
  est.residual = best;
  return est;
}

template <typename R>
DimensionEstimate<R> hausdorff_estimate(const CoverFamily<R>& ck, const CoverFamily<R>& ck1, std::optional<R> root_tol) {
  const std::vector<R> a = ck.raw_widths();
  const std::vector<R> b = ck1.raw_widths();
  DimensionEstimate<R> est = hausdorff_estimate<R>(a, b, root_tol);
  est.k = ck.k;
  est.k1 = ck1.k;
  return est;
}

namespace {

template <typename R>
std::int64_t cell_index(const R& q) {
  using std::floor;
  const double f = to_double(floor(q));
  if (!(std::abs(f) < 0x1p52)) throw InputError("box size too small relative to the set's coordinates");
  return static_cast<std::int64_t>(f);
}

// Exact sign of a sum of doubles: grow a nonoverlapping expansion with
// two-sums; its largest component carries the sign.
int exact_sign(std::initializer_list<double> terms) {
  std::array<double, 8> e{};
  std::size_t n = 0;
  for (double b : terms) {
    double q = b;
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s, err;
      eft::two_sum(q, e[i], s, err);
      if (err != 0.0) e[m++] = err;
      q = s;
    }
    if (q != 0.0) e[m++] = q;
    n = m;
  }
  return n == 0 ? 0 : (e[n - 1] > 0.0 ? 1 : -1);
}

double hi_part(double x) { return x; }
double lo_part(double) { return 0.0; }
double hi_part(const DoubleDouble& x) { return x.hi; }
double lo_part(const DoubleDouble& x) { return x.lo; }

// sign(x - j eps), exactly.
template <typename R>
int compare_cell_edge(const R& x, std::int64_t j, const R& eps) {
  const double jd = static_cast<double>(j);
  double p1, e1, p2, e2;
  eft::two_prod(jd, hi_part(eps), p1, e1);
  eft::two_prod(jd, lo_part(eps), p2, e2);
  return exact_sign({hi_part(x), lo_part(x), -p1, -e1, -p2, -e2});
}

// Smallest j with x < (j+1) eps, i.e. the cell holding x.
template <typename R>
std::int64_t cell_of(const R& x, const R& eps) {
  std::int64_t j = cell_index(x / eps);
  while (compare_cell_edge(x, j, eps) < 0) --j;
  while (compare_cell_edge(x, j + 1, eps) >= 0) ++j;
  return j;
}

// Largest j with j eps < x.
template <typename R>
std::int64_t last_cell_before(const R& x, const R& eps) {
  std::int64_t j = cell_index(x / eps);
  while (compare_cell_edge(x, j, eps) <= 0) --j;
  while (compare_cell_edge(x, j + 1, eps) > 0) ++j;
  return j;
}

}  // namespace

// Cell j meets [lo, hi] (lo < hi) in positive length iff lo < (j+1) eps and
// j eps < hi; both tests are exact.
template <typename R>
BoxCount<R> box_count(const IntervalSet<R>& a, const R& eps) {
  if (!(R(0) < eps) || !is_finite(eps)) throw InputError("box size must be positive");
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
  for (const auto& iv : a) {
    const std::int64_t j0 = cell_of(iv.lo, eps);
    if (iv.hi == iv.lo) {
      ranges.emplace_back(j0, j0);
      continue;
    }
    const std::int64_t j1 = last_cell_before(iv.hi, eps);
    if (j0 <= j1) ranges.emplace_back(j0, j1);
  }
  std::sort(ranges.begin(), ranges.end());
  std::uint64_t count = 0;
  bool any = false;
  std::int64_t end = 0;
  for (const auto& [s, e] : ranges) {
    const std::int64_t start = any ? std::max(s, end + 1) : s;
    if (e >= start) {
      count += static_cast<std::uint64_t>(e - start + 1);
      end = e;
      any = true;
    }
  }
  return {eps, count};
}

template <typename R>
std::vector<std::pair<R, R>> box_dim_curve(const IntervalSet<R>& a, std::span<const R> eps_list) {
  using std::log;
  std::vector<std::pair<R, R>> out;
  for (const R& eps : eps_list) {
    if (eps == R(1)) throw InputError("box size 1 gives log(1/eps) = 0");
    const BoxCount<R> b = box_count(a, eps);
    out.emplace_back(eps, log(R(static_cast<double>(b.count))) / log(R(1) / eps));
  }
  return out;
}

template <typename R>
R largest_gap(const IntervalSet<R>& cover) {
  if (cover.empty()) throw InputError("largest gap of an empty cover");
  R g(0);
  for (std::size_t i = 0; i + 1 < cover.size(); ++i) g = max_of(g, cover[i + 1].lo - cover[i].hi);
  return g;
}

template <typename R>
MinBandWidth<R> min_band_width(const CoverFamily<R>& c) {
  const auto bands = c.raw_bands();
  if (bands.empty()) throw InputError("cover has no bands");
  MinBandWidth<R> out{bands.front().band.width(), false};
  for (const auto& b : bands) {
    out.width = min_of(out.width, b.band.width());
    out.repaired = out.repaired || b.repaired;
  }
  return out;
}

SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y, double xmin, double xmax) {
  if (x.size() != y.size()) throw InputError("slope fit needs equally many x and y values");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0 && x[i] >= xmin && x[i] <= xmax)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw InputError("slope fit needs at least two positive points in the window");
  const double dn = static_cast<double>(n);
  const double den = dn * sxx - sx * sx;
  if (!(std::abs(den) > 0)) throw InputError("slope fit needs at least two distinct x values");
  SlopeFit fit;
  fit.slope = (dn * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / dn;
  fit.points = n;
  return fit;
}

#define QUASISPEC_INSTANTIATE(R)                                                                                 \
  template DimensionEstimate<R> hausdorff_estimate<R>(std::span<const R>, std::span<const R>, std::optional<R>, R); \
  template DimensionEstimate<R> hausdorff_estimate<R>(const CoverFamily<R>&, const CoverFamily<R>&,             \
                                                      std::optional<R>);                                         \
  template BoxCount<R> box_count<R>(const IntervalSet<R>&, const R&);                                           \
  template std::vector<std::pair<R, R>> box_dim_curve<R>(const IntervalSet<R>&, std::span<const R>);            \
  template R largest_gap<R>(const IntervalSet<R>&);                                                             \
  template MinBandWidth<R> min_band_width<R>(const CoverFamily<R>&);

QUASISPEC_INSTANTIATE(double)
QUASISPEC_INSTANTIATE(DoubleDouble)

}  // namespace quasispec
