#pragma once

// Precision-parametric real arithmetic. Every numeric kernel in the library is
// a template over a real type R satisfying the contract below, instantiated at
// R = double and R = DoubleDouble.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>

#include "quasispec/double_double.hpp"
#include "quasispec/error.hpp"

namespace quasispec {

enum class Precision { Double, Extended };

std::string_view to_string(Precision p);
Precision parse_precision(std::string_view text);

template <typename R>
struct RealTraits;

template <>
struct RealTraits<double> {
  static constexpr Precision precision = Precision::Double;
  static constexpr double unit_roundoff = 0x1p-53;  // ~1.1e-16
  static constexpr int decimal_digits = 17;
  static constexpr const char* name = "double";
};

template <>
struct RealTraits<DoubleDouble> {
  static constexpr Precision precision = Precision::Extended;
  // Per-operation error bounds of the double-double kernels are at most
  // 15 * 2^-106 (division), so 2^-104 is the unit for which every basic
  // operation stays within 4 units.
  static constexpr double unit_roundoff = 0x1p-104;  // ~4.9e-32
  static constexpr int decimal_digits = 36;
  static constexpr const char* name = "extended";
};

template <typename R>
concept RealNumber = requires { RealTraits<R>::unit_roundoff; };

double unit_roundoff(Precision p);

template <typename R>
constexpr double unit_roundoff_of() {
  return RealTraits<R>::unit_roundoff;
}

// Runs fn(R{}) with R chosen by the runtime precision.
template <typename Fn>
decltype(auto) with_precision(Precision p, Fn&& fn) {
  if (p == Precision::Extended) return std::forward<Fn>(fn)(DoubleDouble{});
  return std::forward<Fn>(fn)(double{});
}

// ---- uniform elementary functions -----------------------------------------

// Double overloads alongside the DoubleDouble ones, so that unqualified calls
// inside templates resolve for both instantiations.
inline double ldexp(double x, int e) { return std::ldexp(x, e); }
inline double floor(double x) { return std::floor(x); }
inline double abs(double x) { return std::abs(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }

inline double to_double(double x) { return x; }
inline double to_double(const DoubleDouble& x) { return x.hi; }

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const DoubleDouble& x) { return isfinite(x); }

DoubleDouble exp(const DoubleDouble& x);
DoubleDouble log(const DoubleDouble& x);
DoubleDouble sin(const DoubleDouble& x);
DoubleDouble cos(const DoubleDouble& x);

inline DoubleDouble pow(const DoubleDouble& x, const DoubleDouble& y) { return exp(y * log(x)); }

template <typename R>
R pi_value();
template <>
inline double pi_value<double>() {
  return 3.141592653589793116;
}
template <>
inline DoubleDouble pi_value<DoubleDouble>() {
  return {3.141592653589793116e+00, 1.224646799147353207e-16};
}

template <typename R>
R ln2_value();
template <>
inline double ln2_value<double>() {
  return 6.931471805599452862e-01;
}
template <>
inline DoubleDouble ln2_value<DoubleDouble>() {
  return {6.931471805599452862e-01, 2.319046813846299558e-17};
}

template <typename R>
R max_of(const R& a, const R& b) {
  return a < b ? b : a;
}
template <typename R>
R min_of(const R& a, const R& b) {
  return b < a ? b : a;
}

// Throws NumericalError when x is NaN or infinite.
template <typename R>
void require_finite(const R& x, std::string_view what) {
  if (!is_finite(x)) throw NumericalError(std::string("non-finite value in ") + std::string(what));
}

// ---- Givens rotations -------------------------------------------------------

template <typename R>
struct Rotation {
  R c;
  R s;
  R r;
};

// Plane rotation with c*x + s*y = r and -s*x + c*y = 0. Scaled by max(|x|,|y|)
// so that neither the squares nor the norm can overflow or underflow.
// (0, 0) yields the identity rotation with r = 0.
template <typename R>
Rotation<R> givens(const R& x, const R& y) {
  using std::abs;
  using std::sqrt;
  if (y == R(0)) {
    if (x == R(0)) return {R(1), R(0), R(0)};
    if (x < R(0)) return {R(-1), R(0), -x};
    return {R(1), R(0), x};
  }
  if (x == R(0)) {
    if (y < R(0)) return {R(0), R(-1), -y};
    return {R(0), R(1), y};
  }
  const R ax = abs(x);
  const R ay = abs(y);
  const R scale = max_of(ax, ay);
  const R xs = x / scale;
  const R ys = y / scale;
  const R r = scale * sqrt(xs * xs + ys * ys);
  return {x / r, y / r, r};
}

// ---- decimal serialization --------------------------------------------------

/// Parses an optional sign, digits, optional fraction and optional exponent
/// (e.g. "-1.234e-05"), correctly rounded to R. Throws InputError.
template <typename R>
R parse_real(std::string_view text);

/// Shortest representation with at least RealTraits<R>::decimal_digits
/// significant digits that parses back to exactly the same value.
template <typename R>
std::string format_real(const R& x);

/// Runtime-precision parse: returns the Extended value; Double-precision
/// parsing rounds directly to double, then widens.
DoubleDouble parse_real_as(std::string_view text, Precision p);

/// Accepts the "2^x" power-of-two shorthand used on the command line as well
/// as plain decimal literals.
double parse_double_or_power(std::string_view text);

}  // namespace quasispec
