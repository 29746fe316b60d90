#pragma once

// Reference computations used only by the tests: a 50-digit binary float for
// double-double checks, Eigen's dense symmetric solver, closed-form free
// spectra, and brute-force cell enumeration for box counts.

#include <Eigen/Dense>
#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstdint>
#include <random>
#include <vector>

#include "quasispec/bandeig.hpp"
#include "quasispec/interval_set.hpp"
#include "quasispec/jacobi.hpp"

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;
using quasispec::DoubleDouble;

inline Big big(const DoubleDouble& x) { return Big(x.hi) + Big(x.lo); }
inline Big big(double x) { return Big(x); }

inline double rel_err(const DoubleDouble& got, const Big& want) {
  const Big d = abs(big(got) - want);
  if (want == 0) return static_cast<double>(d);
  return static_cast<double>(d / abs(want));
}

inline Big big_pi() { return boost::math::constants::pi<Big>(); }

/// Sorted eigenvalues by Eigen's self-adjoint solver.
inline std::vector<double> eigen_eigs(const quasispec::DenseSym<double>& a) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(out.begin(), out.end());
  return out;
}

/// J+ and J- written out directly from the operator definition (no library
/// assembly), for K >= 3.
template <typename R>
quasispec::DenseSym<R> periodic_matrix(const quasispec::PeriodicJacobi<R>& j, int sign) {
  const std::size_t k = j.period();
  quasispec::DenseSym<R> m(k);
  for (std::size_t i = 0; i < k; ++i) m.set(i, i, j.b[i]);
  for (std::size_t i = 0; i + 1 < k; ++i) m.set(i + 1, i, j.a[i]);
  m.set(0, k - 1, R(static_cast<double>(sign)) * j.a[k - 1]);
  return m;
}

inline quasispec::PeriodicJacobi<double> random_jacobi(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> ua(0.2, 2.0), ub(-3.0, 3.0);
  std::bernoulli_distribution neg(0.3);
  std::vector<double> a(k), b(k);
  for (std::size_t i = 0; i < k; ++i) {
    a[i] = neg(rng) ? -ua(rng) : ua(rng);
    b[i] = ub(rng);
  }
  return {a, b};
}

/// Free operator (a = 1, b = 0): J+ has 2cos(2 pi j / K), J- 2cos((2j+1) pi / K).
inline std::vector<Big> free_eigs(std::size_t k, int sign) {
  std::vector<Big> out;
  for (std::size_t j = 0; j < k; ++j) {
    const Big num = sign > 0 ? Big(2 * j) : Big(2 * j + 1);
    out.push_back(2 * cos(big_pi() * num / Big(k)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Number of cells [j eps, (j+1) eps) meeting the set in positive length (or
/// containing an isolated point), decided cell by cell in 50-digit arithmetic.
template <typename R>
std::uint64_t brute_box_count(const quasispec::IntervalSet<R>& s, const R& eps) {
  const Big e = big(eps);
  const auto hull = s.hull();
  const auto j0 = static_cast<std::int64_t>(floor(big(hull.lo) / e)) - 2;
  const auto j1 = static_cast<std::int64_t>(floor(big(hull.hi) / e)) + 2;
  std::uint64_t n = 0;
  for (std::int64_t j = j0; j <= j1; ++j) {
    const Big left = Big(j) * e, right = Big(j + 1) * e;
    bool hit = false;
    for (const auto& iv : s) {
      const Big lo = big(iv.lo), hi = big(iv.hi);
      if (lo == hi ? (left <= lo && lo < right) : (std::max(lo, left) < std::min(hi, right))) {
        hit = true;
        break;
      }
    }
    n += hit;
  }
  return n;
}

/// Middle-thirds construction at depth d: 2^d intervals of width 3^-d, each
/// pulled in from both ends by shrink * 3^-d so that rounding of the
/// endpoints never leaks into a neighbouring cell of size 3^-d.
template <typename R>
std::vector<quasispec::Interval<R>> cantor_intervals(int depth, double shrink = 1e-9) {
  std::vector<std::int64_t> nums{0};
  std::int64_t den = 1;
  for (int d = 0; d < depth; ++d) {
    std::vector<std::int64_t> next;
    for (std::int64_t num : nums) {
      next.push_back(3 * num);
      next.push_back(3 * num + 2);
    }
    nums = std::move(next);
    den *= 3;
  }
  const R w = R(1) / R(static_cast<double>(den));
  const R pad = R(shrink) * w;
  std::vector<quasispec::Interval<R>> out;
  for (std::int64_t num : nums)
    out.push_back({R(static_cast<double>(num)) * w + pad, R(static_cast<double>(num + 1)) * w - pad});
  return out;
}

}  // namespace oracle
