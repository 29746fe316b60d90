#pragma once

// Double-double ("compensated") arithmetic: a value is the unevaluated sum
// hi + lo of two doubles with |lo| <= ulp(hi)/2. Every operation is built
// from error-free transformations, so results depend only on IEEE-754
// round-to-nearest and are bit-reproducible. Requires -ffp-contract=off.

#include <cmath>

namespace quasispec {

namespace eft {

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

// Requires |a| >= |b| (or a == 0).
inline void fast_two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  e = b - (s - a);
}

inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

// The algorithms on split (hi, lo) operands. Plain scalar in/out keeps them
// vectorizable inside lane loops; the DoubleDouble operators forward here.

// Accurate addition (two two-sums), relative error <= 3u^2 with u = 2^-53.
inline void dd_add(double ah, double al, double bh, double bl, double& zh, double& zl) {
  double s1, s2, t1, t2;
  two_sum(ah, bh, s1, s2);
  two_sum(al, bl, t1, t2);
  s2 += t1;
  fast_two_sum(s1, s2, s1, s2);
  s2 += t2;
  fast_two_sum(s1, s2, zh, zl);
}

// Product with fused multiply-add, relative error <= 4u^2.
inline void dd_mul(double ah, double al, double bh, double bl, double& zh, double& zl) {
  double ch, cl1;
  two_prod(ah, bh, ch, cl1);
  const double tl0 = al * bl;
  const double tl1 = std::fma(ah, bl, tl0);
  const double cl2 = std::fma(al, bh, tl1);
  const double cl3 = cl1 + cl2;
  fast_two_sum(ch, cl3, zh, zl);
}

// Quotient, relative error <= 15u^2 + 56u^3.
inline void dd_div(double ah, double al, double bh, double bl, double& zh, double& zl) {
  const double th = ah / bh;
  double ch, cl1;
  two_prod(bh, th, ch, cl1);
  const double cl2 = bl * th;
  double rh, tl1;
  fast_two_sum(ch, cl2, rh, tl1);
  const double tl2 = tl1 + cl1;
  double r_hi, r_lo;
  fast_two_sum(rh, tl2, r_hi, r_lo);
  const double pi_h = ah - r_hi;
  const double delta_l = al - r_lo;
  const double delta = pi_h + delta_l;
  const double tl = delta / bh;
  fast_two_sum(th, tl, zh, zl);
}

}  // namespace eft

struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double x) : hi(x), lo(0.0) {}  // NOLINT: implicit widening is intended
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  explicit operator double() const { return hi; }

  DoubleDouble& operator+=(const DoubleDouble& o);
  DoubleDouble& operator-=(const DoubleDouble& o);
  DoubleDouble& operator*=(const DoubleDouble& o);
  DoubleDouble& operator/=(const DoubleDouble& o);
};

inline DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }

inline DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
  DoubleDouble z;
  eft::dd_add(a.hi, a.lo, b.hi, b.lo, z.hi, z.lo);
  return z;
}

inline DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) {
  DoubleDouble z;
  eft::dd_add(a.hi, a.lo, -b.hi, -b.lo, z.hi, z.lo);
  return z;
}

inline DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
  DoubleDouble z;
  eft::dd_mul(a.hi, a.lo, b.hi, b.lo, z.hi, z.lo);
  return z;
}

inline DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
  DoubleDouble z;
  eft::dd_div(a.hi, a.lo, b.hi, b.lo, z.hi, z.lo);
  return z;
}

inline DoubleDouble& DoubleDouble::operator+=(const DoubleDouble& o) { return *this = *this + o; }
inline DoubleDouble& DoubleDouble::operator-=(const DoubleDouble& o) { return *this = *this - o; }
inline DoubleDouble& DoubleDouble::operator*=(const DoubleDouble& o) { return *this = *this * o; }
inline DoubleDouble& DoubleDouble::operator/=(const DoubleDouble& o) { return *this = *this / o; }

inline bool operator==(const DoubleDouble& a, const DoubleDouble& b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(const DoubleDouble& a, const DoubleDouble& b) { return !(a == b); }
inline bool operator<(const DoubleDouble& a, const DoubleDouble& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const DoubleDouble& a, const DoubleDouble& b) { return b < a; }
inline bool operator<=(const DoubleDouble& a, const DoubleDouble& b) { return !(b < a); }
inline bool operator>=(const DoubleDouble& a, const DoubleDouble& b) { return !(a < b); }

inline DoubleDouble abs(const DoubleDouble& a) { return a.hi < 0.0 ? -a : a; }

inline DoubleDouble sqrt(const DoubleDouble& a) {
  if (a.hi <= 0.0) return {std::sqrt(a.hi), 0.0};
  const double s = std::sqrt(a.hi);
  double p, e;
  eft::two_prod(s, s, p, e);
  const double r = ((a.hi - p) - e + a.lo) / (2.0 * s);
  double zh, zl;
  eft::fast_two_sum(s, r, zh, zl);
  return {zh, zl};
}

inline DoubleDouble floor(const DoubleDouble& a) {
  const double fh = std::floor(a.hi);
  if (fh != a.hi) return {fh, 0.0};
  double zh, zl;
  eft::fast_two_sum(fh, std::floor(a.lo), zh, zl);
  return {zh, zl};
}

inline DoubleDouble ldexp(const DoubleDouble& a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

inline bool isfinite(const DoubleDouble& a) { return std::isfinite(a.hi) && std::isfinite(a.lo); }

}  // namespace quasispec
