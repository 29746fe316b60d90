#pragma once

// Symmetric eigenvalue pipeline for the banded matrices produced by the
// cycle reordering: pentadiagonal -> tridiagonal by bulge chasing, then all
// eigenvalues of the tridiagonal matrix by Sturm-sequence bisection.
// A dense cyclic-Jacobi solver and a dense Householder reduction serve as the
// O(n^3) reference and baseline.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "quasispec/realnum.hpp"

namespace quasispec {

enum class Execution { Serial, Parallel };

template <typename R>
struct SymTridiag {
  std::vector<R> diag;  // n entries
  std::vector<R> off;   // n-1 entries: T(i+1, i)

  SymTridiag() = default;
  SymTridiag(std::vector<R> d, std::vector<R> e) : diag(std::move(d)), off(std::move(e)) { validate(); }

  std::size_t dim() const { return diag.size(); }
  /// Throws InputError on inconsistent lengths or dim 0, NumericalError on non-finite entries.
  void validate() const;
};

template <typename R>
struct SymPentadiag {
  std::vector<R> diag;  // n
  std::vector<R> off1;  // n-1: P(i+1, i)
  std::vector<R> off2;  // n-2: P(i+2, i)

  SymPentadiag() = default;
  explicit SymPentadiag(std::size_t n)
      : diag(n, R(0)), off1(n > 0 ? n - 1 : 0, R(0)), off2(n > 1 ? n - 2 : 0, R(0)) {}

  std::size_t dim() const { return diag.size(); }
  void validate() const;
};

template <typename R>
class DenseSym {
 public:
  DenseSym() = default;
  explicit DenseSym(std::size_t n) : n_(n), a_(n * n, R(0)) {}

  std::size_t dim() const { return n_; }
  const R& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, const R& v) {
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }
  void add(std::size_t i, std::size_t j, const R& v) {
    a_[i * n_ + j] += v;
    if (i != j) a_[j * n_ + i] += v;
  }
  R* row(std::size_t i) { return a_.data() + i * n_; }
  const R* row(std::size_t i) const { return a_.data() + i * n_; }

 private:
  std::size_t n_ = 0;
  std::vector<R> a_;
};

struct ReductionStats {
  std::uint64_t rotations = 0;
};

/// Orthogonal similarity reduction of a symmetric pentadiagonal matrix to
/// tridiagonal form. Column j's (j+2, j) entry is annihilated by a rotation in
/// rows (j+1, j+2); the resulting third-subdiagonal bulge is chased to the
/// bottom right two rows at a time. O(n^2) work, O(n) storage; rotations are
/// not accumulated.
template <typename R>
SymTridiag<R> penta_to_tridiag(const SymPentadiag<R>& p, ReductionStats* stats = nullptr);

/// Householder reduction of a dense symmetric matrix (O(n^3)): the
/// conventional path used as the benchmark baseline.
template <typename R>
SymTridiag<R> dense_to_tridiag(const DenseSym<R>& a, Execution exec = Execution::Parallel);

/// max |lambda| bound from Gershgorin discs.
template <typename R>
R gershgorin_norm(const SymTridiag<R>& t);

/// 8 * unit roundoff * Gershgorin bound.
template <typename R>
R default_bisection_tol(const SymTridiag<R>& t);

/// All eigenvalues in nondecreasing order, each within max(tol, 4u||T||) of
/// a true eigenvalue. Sturm counts partition the Gershgorin interval, so no
/// eigenvalue is missed or duplicated. The Extended instantiation seeds its
/// brackets from a double-precision pass and verifies them with exact counts.
template <typename R>
std::vector<R> tridiag_eigenvalues(const SymTridiag<R>& t, std::optional<R> tol = std::nullopt,
                                   Execution exec = Execution::Parallel);

/// Number of eigenvalues of T smaller than x (negative pivots of the LDL^T
/// factorization of T - xI).
template <typename R>
std::size_t sturm_count(const SymTridiag<R>& t, const R& x);

/// Cyclic Jacobi; converges when the off-diagonal Frobenius norm drops below
/// n * u * ||A||_F. Throws NumericalError after 50 sweeps.
template <typename R>
std::vector<R> dense_eig(const DenseSym<R>& a);

template <typename R>
DenseSym<R> embed(const SymPentadiag<R>& p);
template <typename R>
DenseSym<R> embed(const SymTridiag<R>& t);

}  // namespace quasispec
