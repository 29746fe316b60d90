#include "quasispec/realnum.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <iomanip>
#include <sstream>

namespace quasispec {

namespace {

// Wide enough to hold hi + lo exactly for every double-double whose two parts
// are within 300 binades of each other.
using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<360, boost::multiprecision::digit_base_2>,
                                           boost::multiprecision::et_off>;

bool valid_decimal(std::string_view s) {
  std::size_t i = 0;
  const std::size_t n = s.size();
  if (i < n && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (i < n && s[i] == '.') {
    ++i;
    while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  }
  if (digits == 0) return false;
  if (i < n && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < n && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++exp_digits;
    if (exp_digits == 0) return false;
  }
  return i == n;
}

std::string trimmed(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_double_checked(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec == std::errc::result_out_of_range) throw InputError("decimal literal out of range: " + s);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw InputError("malformed decimal literal: " + s);
  if (!std::isfinite(v)) throw InputError("decimal literal out of range: " + s);
  return v;
}

DoubleDouble wide_to_dd(const Wide& w) {
  const double hi = static_cast<double>(w);
  if (!std::isfinite(hi)) return {hi, 0.0};
  const Wide rest = w - Wide(hi);
  const double lo = static_cast<double>(rest);
  double zh, zl;
  eft::fast_two_sum(hi, lo, zh, zl);
  return {zh, zl};
}

std::string wide_to_string(const Wide& w, int digits) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits - 1) << w;
  return os.str();
}

}  // namespace

std::string_view to_string(Precision p) { return p == Precision::Extended ? "extended" : "double"; }

Precision parse_precision(std::string_view text) {
  if (text == "double") return Precision::Double;
  if (text == "extended" || text == "quad") return Precision::Extended;
  throw InputError("unknown precision '" + std::string(text) + "' (expected double|extended)");
}

double unit_roundoff(Precision p) {
  return p == Precision::Extended ? RealTraits<DoubleDouble>::unit_roundoff : RealTraits<double>::unit_roundoff;
}

// ---- elementary functions ---------------------------------------------------

DoubleDouble exp(const DoubleDouble& x) {
  if (x.hi > 709.78) return {HUGE_VAL, 0.0};
  if (x.hi < -745.0) return {0.0, 0.0};
  if (x.hi == 0.0 && x.lo == 0.0) return {1.0, 0.0};

  // x = m ln2 + r, |r| <= ln2/2, then r is scaled by 2^-10 so that a short
  // Taylor series converges to full precision; the result is squared back.
  const DoubleDouble ln2 = ln2_value<DoubleDouble>();
  const double m = std::nearbyint(x.hi / ln2.hi);
  const DoubleDouble r = ldexp(x - ln2 * DoubleDouble(m), -10);

  DoubleDouble term = r;
  DoubleDouble sum = r;
  for (int k = 2; k <= 14; ++k) {
    term = term * r / DoubleDouble(static_cast<double>(k));
    sum += term;
    if (std::abs(term.hi) < 1e-36) break;
  }
  // (1 + s)^2 - 1 = s (2 + s), keeps the small quantity separate.
  for (int i = 0; i < 10; ++i) sum = sum * (DoubleDouble(2.0) + sum);
  return ldexp(sum + DoubleDouble(1.0), static_cast<int>(m));
}

DoubleDouble log(const DoubleDouble& x) {
  if (x.hi <= 0.0) return {x.hi == 0.0 ? -HUGE_VAL : std::nan(""), 0.0};
  if (!std::isfinite(x.hi)) return x;
  // Newton on exp(y) = x; one step doubles the ~53 correct bits of std::log.
  DoubleDouble y(std::log(x.hi));
  y = y + x * exp(-y) - DoubleDouble(1.0);
  return y;
}

namespace {

// sin and cos of |t| <= pi/4 by Taylor series.
void sincos_reduced(const DoubleDouble& t, DoubleDouble& s, DoubleDouble& c) {
  const DoubleDouble t2 = t * t;
  DoubleDouble term = t;
  s = t;
  for (int k = 3; k < 40; k += 2) {
    term = -term * t2 / DoubleDouble(static_cast<double>((k - 1) * k));
    s += term;
    if (std::abs(term.hi) < 1e-36) break;
  }
  term = DoubleDouble(1.0);
  c = DoubleDouble(1.0);
  for (int k = 2; k < 40; k += 2) {
    term = -term * t2 / DoubleDouble(static_cast<double>((k - 1) * k));
    c += term;
    if (std::abs(term.hi) < 1e-36) break;
  }
}

void sincos(const DoubleDouble& x, DoubleDouble& s, DoubleDouble& c) {
  const DoubleDouble two_pi = ldexp(pi_value<DoubleDouble>(), 1);
  const DoubleDouble half_pi = ldexp(pi_value<DoubleDouble>(), -1);
  const double turns = std::nearbyint(x.hi / two_pi.hi);
  DoubleDouble r = x - two_pi * DoubleDouble(turns);
  const double quadrant = std::nearbyint(r.hi / half_pi.hi);
  r = r - half_pi * DoubleDouble(quadrant);
  DoubleDouble sr, cr;
  sincos_reduced(r, sr, cr);
  switch (static_cast<int>(quadrant)) {
    case 0: s = sr; c = cr; break;
    case 1: s = cr; c = -sr; break;
    case -1: s = -cr; c = sr; break;
    default: s = -sr; c = -cr; break;  // +-2
  }
}

}  // namespace

DoubleDouble sin(const DoubleDouble& x) {
  DoubleDouble s, c;
  sincos(x, s, c);
  return s;
}

DoubleDouble cos(const DoubleDouble& x) {
  DoubleDouble s, c;
  sincos(x, s, c);
  return c;
}

// ---- serialization ----------------------------------------------------------

template <>
double parse_real<double>(std::string_view text) {
  const std::string s = trimmed(text);
  if (!valid_decimal(s)) throw InputError("malformed decimal literal: '" + s + "'");
  return parse_double_checked(s[0] == '+' ? s.substr(1) : s);
}

template <>
DoubleDouble parse_real<DoubleDouble>(std::string_view text) {
  const std::string s = trimmed(text);
  if (!valid_decimal(s)) throw InputError("malformed decimal literal: '" + s + "'");
  const Wide w(s[0] == '+' ? s.substr(1) : s);
  DoubleDouble v = wide_to_dd(w);
  if (!isfinite(v)) throw InputError("decimal literal out of range: " + s);
  return v;
}

template <>
std::string format_real<double>(const double& x) {
  if (!std::isfinite(x)) throw NumericalError("cannot serialize a non-finite value");
  // 17 significant digits always round-trip for binary64.
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific, 16);
  return std::string(buf.data(), res.ptr);
}

template <>
std::string format_real<DoubleDouble>(const DoubleDouble& x) {
  if (!isfinite(x)) throw NumericalError("cannot serialize a non-finite value");
  const Wide w = Wide(x.hi) + Wide(x.lo);
  for (int digits = RealTraits<DoubleDouble>::decimal_digits; digits <= 110; ++digits) {
    std::string out = wide_to_string(w, digits);
    if (parse_real<DoubleDouble>(out) == x) return out;
  }
  return wide_to_string(w, 110);
}

DoubleDouble parse_real_as(std::string_view text, Precision p) {
  if (p == Precision::Double) return DoubleDouble(parse_real<double>(text));
  return parse_real<DoubleDouble>(text);
}

double parse_double_or_power(std::string_view text) {
  const std::string s = trimmed(text);
  const auto caret = s.find('^');
  if (caret == std::string::npos) return parse_real<double>(s);
  const double base = parse_real<double>(s.substr(0, caret));
  const double expo = parse_real<double>(s.substr(caret + 1));
  const double v = std::pow(base, expo);
  if (!std::isfinite(v)) throw InputError("power literal out of range: " + s);
  return v;
}

}  // namespace quasispec
