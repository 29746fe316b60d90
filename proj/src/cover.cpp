#include "quasispec/cover.hpp"

#include <algorithm>
#include <cmath>

namespace quasispec {

CoverKind cover_kind_for(ModelKind m) {
  return m == ModelKind::PeriodDoubling ? CoverKind::TwoSeeds : CoverKind::NextLevel;
}

template <typename R>
std::vector<RawBand<R>> CoverFamily<R>::raw_bands() const {
  std::vector<RawBand<R>> out;
  for (const auto& c : parts) {
    const auto& s = *c.spectrum;
    for (std::size_t i = 0; i < s.bands.size(); ++i) out.push_back({s.bands[i], c.seed, c.level, s.band_repaired[i]});
  }
  return out;
}

template <typename R>
std::vector<R> CoverFamily<R>::raw_widths() const {
  std::vector<R> out;
  for (const auto& c : parts)
    for (const auto& b : c.spectrum->bands) out.push_back(b.width());
  return out;
}

template <typename R>
std::size_t CoverFamily<R>::repaired() const {
  std::size_t n = 0;
  for (const auto& c : parts) n += c.spectrum->repaired;
  return n;
}

template <typename R>
std::size_t CoverFamily<R>::max_period() const {
  std::size_t n = 0;
  for (const auto& c : parts) n = std::max(n, c.period);
  return n;
}

template <typename R>
R CoverFamily<R>::containment_tol() const {
  return R(1e3 * static_cast<double>(max_period()) * unit_roundoff_of<R>()) * norm;
}

template <typename R>
CoverBuilder<R>::CoverBuilder(Model model, R lambda, Execution exec, std::size_t cap)
    : model_(std::move(model)), lambda_(lambda), exec_(exec), cap_(cap) {
  if (!model_.is_substitution()) throw InputError("covers are defined for substitution models only");
  require_finite(lambda_, "coupling lambda");
}

template <typename R>
std::shared_ptr<const SpectrumResult<R>> CoverBuilder<R>::level_spectrum(Letter seed, unsigned level) {
  const auto key = std::make_pair(seed, level);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const Word w = iterate(*model_.rule, seed, level, cap_);
  auto s = std::make_shared<const SpectrumResult<R>>(spectrum(word_to_operator(*model_.rule, w, lambda_), exec_));
  cache_.emplace(key, s);
  periods_.emplace(key, w.size());
  return s;
}

template <typename R>
CoverFamily<R> CoverBuilder<R>::build(unsigned k) {
  if (k < 1) throw InputError("cover level k must be >= 1");
  using std::abs;
  CoverFamily<R> f;
  f.model = model_.kind;
  f.kind = cover_kind_for(model_.kind);
  f.k = k;
  f.lambda = lambda_;
  R vmax(0);
  for (const auto& s : model_.rule->symbols()) vmax = max_of(vmax, abs(R(s.value.hi) + R(s.value.lo)));
  f.norm = R(2) + abs(lambda_) * vmax;

  std::vector<std::pair<Letter, unsigned>> which;
  if (f.kind == CoverKind::TwoSeeds) {
    if (model_.rule->alphabet_size() < 2) throw InputError("two-seed cover needs at least two symbols");
    which = {{Letter{0}, k}, {Letter{1}, k}};
  } else {
    which = {{model_.seed, k}, {model_.seed, k + 1}};
  }
  std::vector<Interval<R>> all;
  for (const auto& [seed, level] : which) {
    auto s = level_spectrum(seed, level);
    f.parts.push_back({seed, level, periods_.at({seed, level}), s});
    all.insert(all.end(), s->merged.begin(), s->merged.end());
  }
  f.cover = IntervalSet<R>::from_intervals(std::move(all));
  return f;
}

template <typename R>
CoverFamily<R> build_cover(const Model& model, const R& lambda, unsigned k, Execution exec, std::size_t cap) {
  CoverBuilder<R> b(model, lambda, exec, cap);
  return b.build(k);
}

namespace {

template <typename R>
std::vector<R> word_potential(const SubstitutionRule& s, Letter seed, unsigned level, const R& lambda) {
  return word_to_operator(s, iterate(s, seed, level), lambda).b;
}

template <typename R>
R rel(const R& lhs, const R& rhs, const R& scale) {
  using std::abs;
  return abs(lhs - rhs) / max_of(R(1), scale);
}

template <typename R>
R matrix_rel(const Monodromy<R>& lhs, const Monodromy<R>& rhs, const R& scale) {
  using std::abs;
  const R d = max_of(max_of(abs(lhs.m11 - rhs.m11), abs(lhs.m12 - rhs.m12)),
                     max_of(abs(lhs.m21 - rhs.m21), abs(lhs.m22 - rhs.m22)));
  return d / max_of(R(1), scale);
}

}  // namespace

template <typename R>
TraceMapCheck<R> check_trace_map(ModelKind model, const R& lambda, unsigned k, std::span<const R> energies) {
  using std::abs;
  if (k < 1) throw InputError("trace-map level k must be >= 1");
  if (model != ModelKind::PeriodDoubling && model != ModelKind::ThueMorse)
    throw InputError("trace maps are implemented for period-doubling and thue-morse");
  // The Thue-Morse recursion uses tr M_{k-1}^a = tr M_{k-1}^b, false for single letters.
  if (model == ModelKind::ThueMorse && k < 2) throw InputError("thue-morse trace map needs k >= 2");
  const SubstitutionRule rule =
      model == ModelKind::PeriodDoubling ? SubstitutionRule::period_doubling() : SubstitutionRule::thue_morse();
  const std::vector<R> va_prev = word_potential<R>(rule, 0, k - 1, lambda);
  const std::vector<R> va = word_potential<R>(rule, 0, k, lambda);
  const std::vector<R> vb = word_potential<R>(rule, 1, k, lambda);
  const std::vector<R> va_next = word_potential<R>(rule, 0, k + 1, lambda);
  const std::vector<R> vb_next = word_potential<R>(rule, 1, k + 1, lambda);

  TraceMapCheck<R> out;
  for (const R& e : energies) {
    try {
      const Monodromy<R> ma = schrodinger_monodromy<R>(va, e);
      const Monodromy<R> mb = schrodinger_monodromy<R>(vb, e);
      const Monodromy<R> ma1 = schrodinger_monodromy<R>(va_next, e);
      const Monodromy<R> mb1 = schrodinger_monodromy<R>(vb_next, e);
      const R x = ma.trace(), y = mb.trace(), x1 = ma1.trace(), y1 = mb1.trace();
      const R prod_scale = ma.max_abs() * max_of(ma.max_abs(), mb.max_abs()) * R(2);
      R tr(0), mr(0);
      if (model == ModelKind::PeriodDoubling) {
        tr = max_of(rel(x1, x * y - R(2), abs(x * y) + R(2)), rel(y1, x * x - R(2), x * x + R(2)));
        mr = max_of(matrix_rel(ma1, mb * ma, prod_scale), matrix_rel(mb1, ma * ma, prod_scale));
      } else {
        const R x0 = schrodinger_monodromy<R>(va_prev, e).trace();
        const R rhs = x0 * x0 * (x - R(2)) + R(2);
        tr = max_of(rel(x1, rhs, x0 * x0 * (abs(x) + R(2)) + R(2)), rel(y1, x1, abs(x1)));
        mr = max_of(matrix_rel(ma1, mb * ma, prod_scale), matrix_rel(mb1, ma * mb, prod_scale));
      }
      if (!is_finite(tr) || !is_finite(mr)) throw NumericalError("non-finite trace residual");
      out.trace_residual = max_of(out.trace_residual, tr);
      out.matrix_residual = max_of(out.matrix_residual, mr);
      ++out.samples;
    } catch (const NumericalError&) {
      ++out.skipped;
    }
  }
  return out;
}

template <typename R>
std::vector<R> default_trace_samples(const IntervalSet<R>& cover) {
  std::vector<R> out;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    out.push_back(ldexp(cover[i].lo + cover[i].hi, -1));
    if (i + 1 < cover.size()) out.push_back(ldexp(cover[i].hi + cover[i + 1].lo, -1));
  }
  return out;
}

#define QUASISPEC_INSTANTIATE(R)                                                                             \
  template struct CoverFamily<R>;                                                                           \
  template class CoverBuilder<R>;                                                                           \
  template CoverFamily<R> build_cover<R>(const Model&, const R&, unsigned, Execution, std::size_t);         \
  template TraceMapCheck<R> check_trace_map<R>(ModelKind, const R&, unsigned, std::span<const R>);          \
  template std::vector<R> default_trace_samples<R>(const IntervalSet<R>&);

QUASISPEC_INSTANTIATE(double)
QUASISPEC_INSTANTIATE(DoubleDouble)

}  // namespace quasispec
