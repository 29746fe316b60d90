#pragma once

// Transfer matrices over one period and the discriminant test |tr M_K(E)| <= 2.

#include <span>

#include "quasispec/jacobi.hpp"

namespace quasispec {

template <typename R>
struct Monodromy {
  R m11{1}, m12{0}, m21{0}, m22{1};

  R trace() const { return m11 + m22; }
  R det() const { return m11 * m22 - m12 * m21; }
  /// Largest absolute entry.
  R max_abs() const;
  bool finite() const { return is_finite(m11) && is_finite(m12) && is_finite(m21) && is_finite(m22); }

  friend Monodromy operator*(const Monodromy& x, const Monodromy& y) {
    return {x.m11 * y.m11 + x.m12 * y.m21, x.m11 * y.m12 + x.m12 * y.m22,
            x.m21 * y.m11 + x.m22 * y.m21, x.m21 * y.m12 + x.m22 * y.m22};
  }
};

/// M_K(E) = T_K ... T_1 with T_n = [[(E - b_n)/a_n, -a_{n-1}/a_n], [1, 0]] and
/// a_0 = a_K; T_1 is applied first. Throws NumericalError on overflow.
template <typename R>
Monodromy<R> monodromy_at(const PeriodicJacobi<R>& j, const R& e);

/// Same product for a Schroedinger operator (a = 1) with potential values v.
template <typename R>
Monodromy<R> schrodinger_monodromy(std::span<const R> v, const R& e);

enum class TraceClass { Inside, Outside, Boundary };

std::string_view to_string(TraceClass c);

template <typename R>
TraceClass classify_trace(const R& trace, const R& slack);

/// Classifies tr M_K(e). Does not overflow: products that grow past 2^512
/// are rescaled and end up Outside (or Boundary under cancellation).
template <typename R>
TraceClass trace_test(const PeriodicJacobi<R>& j, const R& e, const R& slack);

/// 1e3 K u (2 + max|b| + 2 max|a|).
template <typename R>
R default_slack(const PeriodicJacobi<R>& j);

}  // namespace quasispec
