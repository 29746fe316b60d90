#include "quasispec/monodromy.hpp"

#include <cmath>

namespace quasispec {

namespace {

const char* kOverflow =
    "transfer-matrix product overflowed; the energy is too far outside the spectrum for this precision "
    "(try --precision extended or a smaller period)";

}  // namespace

template <typename R>
R Monodromy<R>::max_abs() const {
  using std::abs;
  return max_of(max_of(abs(m11), abs(m12)), max_of(abs(m21), abs(m22)));
}

template <typename R>
Monodromy<R> monodromy_at(const PeriodicJacobi<R>& j, const R& e) {
  j.validate();
  require_finite(e, "energy");
  const std::size_t k = j.period();
  // Rows (u_{n+1}, u_n) of the running product, updated as M <- T_n M.
  Monodromy<R> m;
  for (std::size_t n = 0; n < k; ++n) {
    const R& an = j.a[n];
    const R& aprev = j.a[(n + k - 1) % k];
    const R t11 = (e - j.b[n]) / an;
    const R t12 = -aprev / an;
    const Monodromy<R> next{t11 * m.m11 + t12 * m.m21, t11 * m.m12 + t12 * m.m22, m.m11, m.m12};
    m = next;
  }
  if (!m.finite()) throw NumericalError(kOverflow);
  return m;
}

template <typename R>
Monodromy<R> schrodinger_monodromy(std::span<const R> v, const R& e) {
  require_finite(e, "energy");
  Monodromy<R> m;
  for (const R& vn : v) {
    const R t = e - vn;
    const Monodromy<R> next{t * m.m11 - m.m21, t * m.m12 - m.m22, m.m11, m.m12};
    m = next;
  }
  if (!m.finite()) throw NumericalError(kOverflow);
  return m;
}

std::string_view to_string(TraceClass c) {
  switch (c) {
    case TraceClass::Inside: return "inside";
    case TraceClass::Outside: return "outside";
    default: return "boundary";
  }
}

template <typename R>
TraceClass classify_trace(const R& trace, const R& slack) {
  using std::abs;
  if (slack < R(0)) throw InputError("slack must be nonnegative");
  const R t = abs(trace);
  if (t < R(2) - slack) return TraceClass::Inside;
  if (R(2) + slack < t) return TraceClass::Outside;
  return TraceClass::Boundary;
}

// Same product as monodromy_at, rescaled by powers of two (exactly) whenever
// an entry passes 2^512, so energies deep in a gap of a long period do not
// overflow. A product that needed rescaling has norm above 2^512: its trace is
// either far outside [-2, 2] or lost to cancellation, never certifiably inside.
template <typename R>
TraceClass trace_test(const PeriodicJacobi<R>& j, const R& e, const R& slack) {
  using std::abs;
  using std::ldexp;
  j.validate();
  require_finite(e, "energy");
  if (slack < R(0)) throw InputError("slack must be nonnegative");
  const std::size_t k = j.period();
  Monodromy<R> m;
  long shift = 0;
  for (std::size_t n = 0; n < k; ++n) {
    const R& an = j.a[n];
    const R t11 = (e - j.b[n]) / an;
    const R t12 = -j.a[(n + k - 1) % k] / an;
    m = Monodromy<R>{t11 * m.m11 + t12 * m.m21, t11 * m.m12 + t12 * m.m22, m.m11, m.m12};
    const double big = to_double(m.max_abs());
    if (!std::isfinite(big)) throw NumericalError(kOverflow);
    if (big > 0x1p512) {
      const int s = std::ilogb(big);
      m = Monodromy<R>{ldexp(m.m11, -s), ldexp(m.m12, -s), ldexp(m.m21, -s), ldexp(m.m22, -s)};
      shift += s;
    }
  }
  if (shift == 0) return classify_trace(m.trace(), slack);
  const R noise = R(1e3 * static_cast<double>(k) * unit_roundoff_of<R>()) * m.max_abs();
  return abs(m.trace()) > noise ? TraceClass::Outside : TraceClass::Boundary;
}

template <typename R>
R default_slack(const PeriodicJacobi<R>& j) {
  using std::abs;
  R ma(0), mb(0);
  for (const R& v : j.a) ma = max_of(ma, abs(v));
  for (const R& v : j.b) mb = max_of(mb, abs(v));
  return R(1e3 * static_cast<double>(j.period()) * unit_roundoff_of<R>()) * (R(2) + mb + R(2) * ma);
}

#define QUASISPEC_INSTANTIATE(R)                                                         \
  template struct Monodromy<R>;                                                         \
  template Monodromy<R> monodromy_at<R>(const PeriodicJacobi<R>&, const R&);            \
  template Monodromy<R> schrodinger_monodromy<R>(std::span<const R>, const R&);         \
  template TraceClass classify_trace<R>(const R&, const R&);                            \
  template TraceClass trace_test<R>(const PeriodicJacobi<R>&, const R&, const R&);      \
  template R default_slack<R>(const PeriodicJacobi<R>&);

QUASISPEC_INSTANTIATE(double)
QUASISPEC_INSTANTIATE(DoubleDouble)

}  // namespace quasispec
