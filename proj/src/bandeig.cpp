#include "quasispec/bandeig.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <type_traits>

#include <omp.h>

#include "quasispec/sturm.hpp"

namespace quasispec {

template <typename R>
void SymTridiag<R>::validate() const {
  if (diag.empty()) throw InputError("tridiagonal matrix has dimension 0");
  if (off.size() + 1 != diag.size()) throw InputError("tridiagonal off-diagonal length must be dim-1");
  for (const R& v : diag) require_finite(v, "tridiagonal matrix");
  for (const R& v : off) require_finite(v, "tridiagonal matrix");
}

template <typename R>
void SymPentadiag<R>::validate() const {
  const std::size_t n = diag.size();
  if (n == 0) throw InputError("pentadiagonal matrix has dimension 0");
  if (off1.size() != n - 1 || off2.size() != (n >= 2 ? n - 2 : 0))
    throw InputError("pentadiagonal band lengths inconsistent with dimension");
  for (const R& v : diag) require_finite(v, "pentadiagonal matrix");
  for (const R& v : off1) require_finite(v, "pentadiagonal matrix");
  for (const R& v : off2) require_finite(v, "pentadiagonal matrix");
}

// ---- bulge chasing ------------------------------------------------------------

namespace {

// Lower band of a symmetric matrix of bandwidth <= 3: band[k][i] = A(i+k, i).
template <typename R>
class Band3 {
 public:
  explicit Band3(const SymPentadiag<R>& p) : n_(p.dim()) {
    band_[0] = p.diag;
    band_[1] = p.off1;
    band_[2] = p.off2;
    band_[3].assign(n_ >= 3 ? n_ - 3 : 0, R(0));
  }

  std::size_t dim() const { return n_; }

  R get(std::size_t r, std::size_t c) const {
    const std::size_t i = std::min(r, c);
    const std::size_t k = std::max(r, c) - i;
    return k <= 3 ? band_[k][i] : R(0);
  }

  void put(std::size_t r, std::size_t c, const R& v) {
    const std::size_t i = std::min(r, c);
    const std::size_t k = std::max(r, c) - i;
    if (k <= 3) band_[k][i] = v;
  }

  // A <- G A G^T for the rotation G acting on rows/columns (p, p+1) that
  // annihilates A(p+1, col) against A(p, col).
  void rotate_out(std::size_t p, std::size_t col) {
    const std::size_t q = p + 1;
    const Rotation<R> g = givens(get(p, col), get(q, col));
    const R& c = g.c;
    const R& s = g.s;
    // Off-block entries; the chase guarantees that everything farther than
    // the window below is, and stays, zero.
    const std::size_t t_begin = p >= 2 ? p - 2 : 0;
    const std::size_t t_end = std::min(n_, p + 4);
    for (std::size_t t = t_begin; t < t_end; ++t) {
      if (t == p || t == q) continue;
      const R x = get(p, t);
      const R y = get(q, t);
      put(p, t, c * x + s * y);
      put(q, t, c * y - s * x);
    }
    const R a = get(p, p), b = get(q, p), d = get(q, q);
    const R cc = c * c, ss = s * s, cs = c * s;
    const R two_csb = R(2) * cs * b;
    put(p, p, cc * a + two_csb + ss * d);
    put(q, q, ss * a - two_csb + cc * d);
    put(q, p, cs * (d - a) + (cc - ss) * b);
    put(p, col, g.r);
    put(q, col, R(0));
  }

  SymTridiag<R> tridiagonal() && {
    SymTridiag<R> t;
    t.diag = std::move(band_[0]);
    t.off = std::move(band_[1]);
    return t;
  }

 private:
  std::size_t n_;
  std::array<std::vector<R>, 4> band_;
};

}  // namespace

template <typename R>
SymTridiag<R> penta_to_tridiag(const SymPentadiag<R>& p, ReductionStats* stats) {
  p.validate();
  const std::size_t n = p.dim();
  Band3<R> a(p);
  std::uint64_t rotations = 0;
  for (std::size_t j = 0; j + 2 < n; ++j) {
    if (a.get(j + 2, j) == R(0)) continue;
    a.rotate_out(j + 1, j);
    ++rotations;
    // Bulge at (r, c) = (c + 3, c): rotate rows (r-1, r), which moves it to
    // (r + 2, r - 1).
    for (std::size_t c = j + 1, r = j + 4; r < n; c += 2, r += 2) {
      if (a.get(r, c) == R(0)) break;
      a.rotate_out(r - 1, c);
      ++rotations;
    }
  }
  if (stats) stats->rotations += rotations;
  SymTridiag<R> t = std::move(a).tridiagonal();
  for (const R& v : t.diag) require_finite(v, "tridiagonal reduction");
  for (const R& v : t.off) require_finite(v, "tridiagonal reduction");
  return t;
}

// ---- Householder ----------------------------------------------------------------

namespace {

// Householder vector for column c (rows c+1..n-1) into u; returns beta, with
// 0 meaning no reflection. alpha is the resulting subdiagonal entry.
template <typename R>
R householder_column(const DenseSym<R>& a, std::size_t c, std::vector<R>& u, R& alpha) {
  using std::sqrt;
  const std::size_t n = a.dim();
  R norm2(0);
  for (std::size_t i = c + 1; i < n; ++i) {
    u[i] = a(i, c);
    norm2 += u[i] * u[i];
  }
  if (norm2 == R(0)) {
    alpha = R(0);
    return R(0);
  }
  const R norm = sqrt(norm2);
  alpha = u[c + 1] < R(0) ? norm : -norm;
  u[c + 1] -= alpha;
  R unorm2(0);
  for (std::size_t i = c + 1; i < n; ++i) unorm2 += u[i] * u[i];
  return R(2) / unorm2;
}

// Row i of the trailing block, columns lo..i: apply the rank-2 update (if v)
// and accumulate the symmetric product with u (if u) into acc, with the
// row's own dot product returned.
template <typename R>
R fused_row(R* row, std::size_t lo, std::size_t i, const R* v, const R* w, const R* u, R* acc) {
  R s(0);
  if (v && u) {
    const R vi = v[i], wi = w[i], ui = u[i];
    if constexpr (std::is_same_v<R, double>) {
#pragma omp simd reduction(+ : s)
      for (std::size_t j = lo; j < i; ++j) {
        const double x = row[j] - (vi * w[j] + wi * v[j]);
        row[j] = x;
        s += x * u[j];
        acc[j] += x * ui;
      }
    } else {
      for (std::size_t j = lo; j < i; ++j) {
        const R x = row[j] - (vi * w[j] + wi * v[j]);
        row[j] = x;
        s += x * u[j];
        acc[j] += x * ui;
      }
    }
    row[i] -= vi * w[i] + wi * v[i];
    return s + row[i] * ui;
  }
  if (v) {
    const R vi = v[i], wi = w[i];
    for (std::size_t j = lo; j <= i; ++j) row[j] -= vi * w[j] + wi * v[j];
    return s;
  }
  const R ui = u[i];
  for (std::size_t j = lo; j < i; ++j) {
    s += row[j] * u[j];
    acc[j] += row[j] * ui;
  }
  return s + row[i] * ui;
}

}  // namespace

// Only the lower triangle is referenced. Each step makes one pass over the
// trailing block, applying the previous reflector and forming the product the
// next one needs.
template <typename R>
SymTridiag<R> dense_to_tridiag(const DenseSym<R>& input, Execution exec) {
  const std::size_t n = input.dim();
  if (n == 0) throw InputError("dense matrix has dimension 0");
  DenseSym<R> a = input;
  SymTridiag<R> t;
  t.diag.resize(n);
  t.off.resize(n - 1);
  const bool parallel = exec == Execution::Parallel;
  const int nthreads = parallel ? std::max(1, omp_get_max_threads()) : 1;
  std::vector<std::vector<R>> partial(static_cast<std::size_t>(nthreads), std::vector<R>(n));
  std::vector<R> v(n), w(n), u(n), p(n);

  // One pass over rows lo..n-1: update with (v, w) when update is set, and
  // p = beta_u * (trailing block) u when beta_u != 0.
  auto pass = [&](std::size_t lo, bool update, const R& beta_u) {
    const bool product = beta_u != R(0);
    const R* vp = update ? v.data() : nullptr;
    const R* up = product ? u.data() : nullptr;
    const std::ptrdiff_t first = static_cast<std::ptrdiff_t>(lo), last = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel num_threads(nthreads) if (parallel)
    {
      R* acc = partial[static_cast<std::size_t>(omp_get_thread_num())].data();
      std::fill(acc + lo, acc + n, R(0));
#pragma omp for schedule(static, 16)
      for (std::ptrdiff_t ii = first; ii < last; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const R s = fused_row(a.row(i), lo, i, vp, w.data(), up, acc);
        if (product) acc[i] += s;
      }
    }
    if (!product) return;
    for (std::size_t j = lo; j < n; ++j) {
      R sum(0);
      for (const auto& part : partial) sum += part[j];
      p[j] = beta_u * sum;
    }
  };

  R alpha(0);
  R beta(0);
  if (n > 2) {
    beta = householder_column(a, 0, v, alpha);
    if (beta != R(0)) {
      std::swap(u, v);
      pass(1, false, beta);
      std::swap(u, v);
    }
  }
  for (std::size_t k = 0; k + 2 < n; ++k) {
    t.diag[k] = a(k, k);
    t.off[k] = beta != R(0) ? alpha : a(k + 1, k);
    const bool update = beta != R(0);
    if (update) {
      R pv(0);
      for (std::size_t i = k + 1; i < n; ++i) pv += p[i] * v[i];
      const R kappa = ldexp(beta * pv, -1);
      for (std::size_t i = k + 1; i < n; ++i) w[i] = p[i] - kappa * v[i];
      // Column k+1 first: the next reflector is built from it.
      for (std::size_t i = k + 1; i < n; ++i) a.row(i)[k + 1] -= v[i] * w[k + 1] + w[i] * v[k + 1];
    }
    R next_alpha(0);
    R next_beta(0);
    if (k + 3 < n) next_beta = householder_column(a, k + 1, u, next_alpha);
    if (update || next_beta != R(0)) pass(k + 2, update, next_beta);
    std::swap(u, v);
    alpha = next_alpha;
    beta = next_beta;
  }
  if (n >= 2) {
    t.diag[n - 2] = a(n - 2, n - 2);
    t.off[n - 2] = a(n - 1, n - 2);
  }
  t.diag[n - 1] = a(n - 1, n - 1);
  t.validate();
  return t;
}

// ---- bisection --------------------------------------------------------------------

template <typename R>
R gershgorin_norm(const SymTridiag<R>& t) {
  using std::abs;
  const std::size_t n = t.dim();
  R best(0);
  for (std::size_t i = 0; i < n; ++i) {
    R r(0);
    if (i > 0) r += abs(t.off[i - 1]);
    if (i + 1 < n) r += abs(t.off[i]);
    best = max_of(best, abs(t.diag[i]) + r);
  }
  return best;
}

template <typename R>
R default_bisection_tol(const SymTridiag<R>& t) {
  return R(8.0 * unit_roundoff_of<R>()) * gershgorin_norm(t);
}

template <typename R>
std::size_t sturm_count(const SymTridiag<R>& t, const R& x) {
  t.validate();
  const SturmMatrix<R> m(t);
  std::int32_t c = 0;
  sturm_counts_serial<R>(m, std::span<const R>(&x, 1), std::span<std::int32_t>(&c, 1));
  return static_cast<std::size_t>(c);
}

namespace {

template <typename R>
struct Bracket {
  R lo;
  R hi;
  std::int32_t nlo;
  std::int32_t nhi;
};

// Partition points -> brackets holding at least one eigenvalue.
template <typename R>
std::vector<Bracket<R>> brackets_from_points(const SturmMatrix<R>& m, std::vector<R> points, Execution exec) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<std::int32_t> counts(points.size());
  sturm_counts<R>(m, points, counts, exec);
  // A monotone envelope keeps every bracket's count difference nonnegative
  // even if rounding produces a locally non-monotone count.
  for (std::size_t i = 1; i < counts.size(); ++i) counts[i] = std::max(counts[i], counts[i - 1]);
  std::vector<Bracket<R>> out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (counts[i + 1] > counts[i]) out.push_back({points[i], points[i + 1], counts[i], counts[i + 1]});
  return out;
}

template <typename R>
std::vector<R> bisect_all(const SymTridiag<R>& t, const R& tol, Execution exec,
                          const std::vector<R>& seeds, const R& seed_margin) {
  const std::size_t n = t.dim();
  const SturmMatrix<R> m(t);
  const R gnorm = gershgorin_norm(t);
  const R pad = R(2.0 * static_cast<double>(n) * unit_roundoff_of<R>()) * gnorm + R(4.0 * m.pivmin);

  // Gershgorin interval, widened until the counts at its ends are 0 and n.
  R gl(0), gu(0);
  for (std::size_t i = 0; i < n; ++i) {
    using std::abs;
    R r(0);
    if (i > 0) r += abs(t.off[i - 1]);
    if (i + 1 < n) r += abs(t.off[i]);
    const R lo = t.diag[i] - r, hi = t.diag[i] + r;
    if (i == 0 || lo < gl) gl = lo;
    if (i == 0 || gu < hi) gu = hi;
  }
  gl -= pad;
  gu += pad;
  for (int attempt = 0;; ++attempt) {
    std::array<R, 2> ends{gl, gu};
    std::array<std::int32_t, 2> c{};
    sturm_counts<R>(m, ends, c, exec);
    if (c[0] == 0 && c[1] == static_cast<std::int32_t>(n)) break;
    if (attempt == 8) throw NumericalError("Sturm counts inconsistent at the Gershgorin bounds");
    const R widen = (gu - gl) + R(1);
    gl -= widen;
    gu += widen;
  }

  std::vector<R> points{gl, gu};
  for (const R& s : seeds) {
    const R a = s - seed_margin, b = s + seed_margin;
    if (gl < a && a < gu) points.push_back(a);
    if (gl < b && b < gu) points.push_back(b);
  }
  std::vector<Bracket<R>> active = brackets_from_points(m, std::move(points), exec);

  const R stop_width = max_of(tol, R(4.0 * unit_roundoff_of<R>()) * gnorm) + R(m.pivmin);
  std::vector<R> values(n, R(0));
  std::vector<Bracket<R>> next;
  std::vector<R> mids;
  std::vector<std::int32_t> counts;

  auto finish = [&](const Bracket<R>& b) {
    const R mid = ldexp(b.lo + b.hi, -1);
    for (std::int32_t i = b.nlo; i < b.nhi; ++i) values[static_cast<std::size_t>(i)] = mid;
  };

  while (!active.empty()) {
    next.clear();
    mids.clear();
    std::vector<Bracket<R>> open;
    open.reserve(active.size());
    for (const Bracket<R>& b : active) {
      const R mid = ldexp(b.lo + b.hi, -1);
      if (!(b.hi - b.lo > stop_width) || !(b.lo < mid && mid < b.hi)) {
        finish(b);
        continue;
      }
      open.push_back(b);
      mids.push_back(mid);
    }
    counts.assign(mids.size(), 0);
    sturm_counts<R>(m, mids, counts, exec);
    for (std::size_t k = 0; k < open.size(); ++k) {
      const Bracket<R>& b = open[k];
      const std::int32_t c = std::clamp(counts[k], b.nlo, b.nhi);
      if (c > b.nlo) next.push_back({b.lo, mids[k], b.nlo, c});
      if (b.nhi > c) next.push_back({mids[k], b.hi, c, b.nhi});
    }
    active.swap(next);
  }
  std::sort(values.begin(), values.end());
  return values;
}

}  // namespace

template <typename R>
std::vector<R> tridiag_eigenvalues(const SymTridiag<R>& t, std::optional<R> tol, Execution exec) {
  t.validate();
  const R tolerance = tol ? *tol : default_bisection_tol(t);
  if (!(tolerance >= R(0))) throw InputError("bisection tolerance must be positive");
  if (t.dim() == 1) return {t.diag[0]};

  if constexpr (std::is_same_v<R, DoubleDouble>) {
    // Seed brackets from the double-precision eigenvalues of the rounded
    // matrix; the exact Extended counts at the bracket ends decide.
    SymTridiag<double> td;
    td.diag.reserve(t.dim());
    td.off.reserve(t.off.size());
    for (const R& v : t.diag) td.diag.push_back(v.hi);
    for (const R& v : t.off) td.off.push_back(v.hi);
    const std::vector<double> approx = tridiag_eigenvalues<double>(td, std::nullopt, exec);
    std::vector<R> seeds(approx.begin(), approx.end());
    const R margin = R(64.0 * unit_roundoff_of<double>() * gershgorin_norm(td));
    return bisect_all<R>(t, tolerance, exec, seeds, margin);
  } else {
    return bisect_all<R>(t, tolerance, exec, {}, R(0));
  }
}

// ---- dense Jacobi reference ---------------------------------------------------

template <typename R>
std::vector<R> dense_eig(const DenseSym<R>& input) {
  using std::abs;
  using std::sqrt;
  const std::size_t n = input.dim();
  if (n == 0) throw InputError("dense matrix has dimension 0");
  std::vector<R> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] = input(i, j);
      require_finite(a[i * n + j], "dense matrix");
    }
  auto at = [&](std::size_t i, std::size_t j) -> R& { return a[i * n + j]; };

  R fro2(0);
  for (const R& v : a) fro2 += v * v;
  const R threshold = R(static_cast<double>(n) * unit_roundoff_of<R>()) * sqrt(fro2);

  auto off_norm = [&]() {
    R s(0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += at(i, j) * at(i, j);
    return sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > threshold) {
    if (++sweep > 50) throw NumericalError("Jacobi eigensolver did not converge in 50 sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const R apq = at(p, q);
        if (apq == R(0)) continue;
        const R theta = (at(q, q) - at(p, p)) / (R(2) * apq);
        R t;
        if (abs(theta) > R(1e150)) {
          t = R(1) / (R(2) * theta);
        } else {
          t = R(1) / (abs(theta) + sqrt(theta * theta + R(1)));
          if (theta < R(0)) t = -t;
        }
        const R c = R(1) / sqrt(t * t + R(1));
        const R s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const R akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const R apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<R> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

template <typename R>
DenseSym<R> embed(const SymPentadiag<R>& p) {
  const std::size_t n = p.dim();
  DenseSym<R> a(n);
  for (std::size_t i = 0; i < n; ++i) a.set(i, i, p.diag[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) a.set(i + 1, i, p.off1[i]);
  for (std::size_t i = 0; i + 2 < n; ++i) a.set(i + 2, i, p.off2[i]);
  return a;
}

template <typename R>
DenseSym<R> embed(const SymTridiag<R>& t) {
  const std::size_t n = t.dim();
  DenseSym<R> a(n);
  for (std::size_t i = 0; i < n; ++i) a.set(i, i, t.diag[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) a.set(i + 1, i, t.off[i]);
  return a;
}

#define QUASISPEC_INSTANTIATE(R)                                                                              \
  template struct SymTridiag<R>;                                                                             \
  template struct SymPentadiag<R>;                                                                           \
  template SymTridiag<R> penta_to_tridiag<R>(const SymPentadiag<R>&, ReductionStats*);                       \
  template SymTridiag<R> dense_to_tridiag<R>(const DenseSym<R>&, Execution);                                 \
  template R gershgorin_norm<R>(const SymTridiag<R>&);                                                       \
  template R default_bisection_tol<R>(const SymTridiag<R>&);                                                 \
  template std::vector<R> tridiag_eigenvalues<R>(const SymTridiag<R>&, std::optional<R>, Execution);         \
  template std::size_t sturm_count<R>(const SymTridiag<R>&, const R&);                                       \
  template std::vector<R> dense_eig<R>(const DenseSym<R>&);                                                  \
  template DenseSym<R> embed<R>(const SymPentadiag<R>&);                                                     \
  template DenseSym<R> embed<R>(const SymTridiag<R>&);

QUASISPEC_INSTANTIATE(double)
QUASISPEC_INSTANTIATE(DoubleDouble)

}  // namespace quasispec
