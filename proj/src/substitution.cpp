#include "quasispec/substitution.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <type_traits>

namespace quasispec {

SubstitutionRule::SubstitutionRule(std::vector<Symbol> symbols, const std::vector<std::string>& images)
    : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw InputError("substitution alphabet is empty");
  if (symbols_.size() > 255) throw InputError("substitution alphabet has more than 255 symbols");
  if (images.size() != symbols_.size()) throw InputError("every symbol needs exactly one image");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!is_finite(symbols_[i].value)) throw InputError("non-finite symbol value");
    for (std::size_t j = 0; j < i; ++j)
      if (symbols_[i].name == symbols_[j].name)
        throw InputError(std::string("duplicate symbol '") + symbols_[i].name + "'");
  }
  images_.reserve(images.size());
  for (const std::string& img : images) {
    if (img.empty()) throw InputError("substitution images must be nonempty");
    Word w;
    for (char c : img) w.push_back(letter(c));
    images_.push_back(std::move(w));
  }
}

Letter SubstitutionRule::letter(char name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return static_cast<Letter>(i);
  throw InputError(std::string("symbol '") + name + "' is not in the alphabet");
}

std::string SubstitutionRule::spell(const Word& w) const {
  std::string s;
  s.reserve(w.size());
  for (Letter l : w) s.push_back(symbols_.at(l).name);
  return s;
}

std::vector<std::vector<std::uint64_t>> SubstitutionRule::incidence() const {
  const std::size_t m = symbols_.size();
  std::vector<std::vector<std::uint64_t>> inc(m, std::vector<std::uint64_t>(m, 0));
  for (std::size_t j = 0; j < m; ++j)
    for (Letter l : images_[j]) ++inc[l][j];
  return inc;
}

SubstitutionRule SubstitutionRule::fibonacci() { return {{{'a', 1.0}, {'b', 0.0}}, {"ab", "a"}}; }
SubstitutionRule SubstitutionRule::period_doubling() { return {{{'a', 1.0}, {'b', 0.0}}, {"ab", "aa"}}; }
SubstitutionRule SubstitutionRule::thue_morse() { return {{{'a', 1.0}, {'b', 0.0}}, {"ab", "ba"}}; }

SubstitutionRule SubstitutionRule::rudin_shapiro(const std::vector<DoubleDouble>& values) {
  if (values.size() != 4) throw InputError("Rudin-Shapiro needs four symbol values (a, b, c, d)");
  return {{{'a', values[0]}, {'b', values[1]}, {'c', values[2]}, {'d', values[3]}}, {"ab", "ac", "db", "dc"}};
}

Word iterate(const SubstitutionRule& s, Letter seed, unsigned k, std::size_t cap) {
  if (seed >= s.alphabet_size()) throw InputError("seed symbol is not in the alphabet");
  Word w{seed};
  for (unsigned step = 0; step < k; ++step) {
    std::size_t len = 0;
    for (Letter l : w) {
      len += s.image(l).size();
      if (len > cap)
        throw InputError("word length exceeds the cap of " + std::to_string(cap) + " symbols at level " +
                         std::to_string(step + 1));
    }
    Word next;
    next.reserve(len);
    for (Letter l : w) next.insert(next.end(), s.image(l).begin(), s.image(l).end());
    w = std::move(next);
  }
  return w;
}

Primitivity check_primitive(const SubstitutionRule& s) {
  const std::size_t m = s.alphabet_size();
  std::vector<std::vector<char>> base(m, std::vector<char>(m, 0));
  const auto inc = s.incidence();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) base[i][j] = inc[i][j] > 0;

  const unsigned bound = static_cast<unsigned>((m - 1) * (m - 1) + 1);
  std::vector<std::vector<char>> power = base;
  for (unsigned k = 1; k <= bound; ++k) {
    bool positive = true;
    for (const auto& row : power)
      for (char v : row) positive = positive && v;
    if (positive) return {true, k};
    std::vector<std::vector<char>> next(m, std::vector<char>(m, 0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t l = 0; l < m; ++l)
        if (power[i][l])
          for (std::size_t j = 0; j < m; ++j) next[i][j] = next[i][j] || base[l][j];
    power = std::move(next);
  }
  return {false, 0};
}

template <typename R>
PeriodicJacobi<R> word_to_operator(const SubstitutionRule& s, const Word& w, const R& lambda) {
  if (w.empty()) throw InputError("cannot build an operator from an empty word");
  std::vector<R> values;
  for (const auto& sym : s.symbols()) {
    if constexpr (std::is_same_v<R, double>)
      values.push_back(sym.value.hi);
    else
      values.push_back(sym.value);
  }
  std::vector<R> b;
  b.reserve(w.size());
  for (Letter l : w) b.push_back(lambda * values.at(l));
  return PeriodicJacobi<R>(std::vector<R>(w.size(), R(1)), std::move(b));
}

Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
      throw InputError("malformed rational '" + std::string(text) + "' (expected p/q)");
    return v;
  };
  const auto slash = text.find('/');
  Rational r;
  if (slash == std::string_view::npos) {
    r = {parse_int(text), 1};
  } else {
    r = {parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1))};
  }
  if (r.q < 1) throw InputError("rational denominator must be >= 1");
  if (std::gcd(r.p, r.q) != 1) throw InputError("rational p/q must be in lowest terms");
  return r;
}

std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Fibonacci: return "fibonacci";
    case ModelKind::PeriodDoubling: return "period-doubling";
    case ModelKind::ThueMorse: return "thue-morse";
    case ModelKind::RudinShapiro: return "rudin-shapiro";
    case ModelKind::AlmostMathieu: return "almost-mathieu";
    case ModelKind::Sturmian: return "sturmian";
    default: return "custom";
  }
}

ModelKind parse_model_kind(std::string_view text) {
  for (ModelKind m : {ModelKind::Fibonacci, ModelKind::PeriodDoubling, ModelKind::ThueMorse, ModelKind::RudinShapiro,
                      ModelKind::AlmostMathieu, ModelKind::Sturmian})
    if (text == to_string(m)) return m;
  throw InputError("unknown model '" + std::string(text) +
                   "' (expected fibonacci|period-doubling|thue-morse|rudin-shapiro|almost-mathieu|sturmian)");
}

Model Model::substitution(ModelKind kind, SubstitutionRule rule, Letter seed) {
  if (seed >= rule.alphabet_size()) throw InputError("seed symbol is not in the alphabet");
  Model m;
  m.kind = kind;
  m.rule = std::move(rule);
  m.seed = seed;
  return m;
}

Model Model::almost_mathieu(Rational alpha, DoubleDouble theta) {
  Model m;
  m.kind = ModelKind::AlmostMathieu;
  m.alpha = alpha;
  m.theta = theta;
  return m;
}

Model Model::sturmian(Rational alpha, DoubleDouble theta) {
  if (alpha.p < 0 || alpha.p > alpha.q) throw InputError("Sturmian alpha must lie in [0, 1]");
  Model m;
  m.kind = ModelKind::Sturmian;
  m.alpha = alpha;
  m.theta = theta;
  return m;
}

Model Model::builtin(ModelKind kind) {
  switch (kind) {
    case ModelKind::Fibonacci: return substitution(kind, SubstitutionRule::fibonacci());
    case ModelKind::PeriodDoubling: return substitution(kind, SubstitutionRule::period_doubling());
    case ModelKind::ThueMorse: return substitution(kind, SubstitutionRule::thue_morse());
    default: throw InputError("model '" + std::string(to_string(kind)) + "' needs explicit parameters");
  }
}

namespace {

template <typename R>
R from_dd(const DoubleDouble& v) {
  if constexpr (std::is_same_v<R, double>)
    return v.hi;
  else
    return v;
}

// (n p) mod q in [0, q), exactly.
std::int64_t rotation_residue(std::size_t n, const Rational& a) {
  const __int128 r = (static_cast<__int128>(n) * a.p) % a.q;
  return static_cast<std::int64_t>(r < 0 ? r + a.q : r);
}

}  // namespace

template <typename R>
PeriodicJacobi<R> sample_potential(const Model& m, const R& lambda, std::size_t k, std::size_t cap) {
  using std::cos;
  using std::floor;
  if (k == 0) throw InputError("period K must be at least 1");
  require_finite(lambda, "coupling lambda");

  if (m.is_substitution()) {
    Word w{m.seed};
    unsigned stalled = 0;
    for (unsigned level = 1; w.size() < k; ++level) {
      Word next = iterate(*m.rule, m.seed, level, std::max(cap, k));
      stalled = next.size() > w.size() ? 0 : stalled + 1;
      if (stalled > m.rule->alphabet_size()) throw InputError("substitution word stops growing before reaching K");
      w = std::move(next);
    }
    w.resize(k);
    return word_to_operator(*m.rule, w, lambda);
  }

  if (k % static_cast<std::size_t>(m.alpha.q) != 0)
    throw InputError("K must be a multiple of the denominator q of alpha");
  const R theta = from_dd<R>(m.theta);
  const R q(static_cast<double>(m.alpha.q));
  std::vector<R> b(k);
  for (std::size_t n = 1; n <= k; ++n) {
    const std::int64_t r = rotation_residue(n, m.alpha);
    if (m.kind == ModelKind::AlmostMathieu) {
      const R x = R(static_cast<double>(r)) / q + theta;
      b[n - 1] = R(2) * lambda * cos(ldexp(pi_value<R>(), 1) * x);
    } else if (theta == R(0)) {
      b[n - 1] = r >= m.alpha.q - m.alpha.p ? lambda : R(0);
    } else {
      R x = R(static_cast<double>(r)) / q + theta;
      x = x - floor(x);
      b[n - 1] = !(x < R(1) - R(static_cast<double>(m.alpha.p)) / q) ? lambda : R(0);
    }
  }
  return PeriodicJacobi<R>(std::vector<R>(k, R(1)), std::move(b));
}

template PeriodicJacobi<double> word_to_operator<double>(const SubstitutionRule&, const Word&, const double&);
template PeriodicJacobi<DoubleDouble> word_to_operator<DoubleDouble>(const SubstitutionRule&, const Word&,
                                                                     const DoubleDouble&);
template PeriodicJacobi<double> sample_potential<double>(const Model&, const double&, std::size_t, std::size_t);
template PeriodicJacobi<DoubleDouble> sample_potential<DoubleDouble>(const Model&, const DoubleDouble&, std::size_t,
                                                                     std::size_t);

}  // namespace quasispec
