#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "quasispec/cover.hpp"
#include "quasispec/fractal.hpp"

using namespace quasispec;
using oracle::Big;

namespace {

using Set = IntervalSet<double>;

Set make(std::vector<Interval<double>> v) { return Set::from_intervals(std::move(v)); }

Set random_set(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-5.0, 5.0), w(0.0, 0.4);
  std::vector<Interval<double>> v;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = u(rng);
    v.push_back({lo, lo + w(rng)});
  }
  return make(v);
}

// Transfer-matrix product in 50 digits, written out from the recurrence
// psi_{n+1} = (E - v_n) psi_n - psi_{n-1}.
struct BigMat {
  Big a = 1, b = 0, c = 0, d = 1;
};

BigMat big_monodromy(const SubstitutionRule& s, const Word& w, double lambda, const Big& e) {
  BigMat m;
  for (Letter l : w) {
    const Big t = e - Big(lambda) * oracle::big(s.symbols()[l].value);
    m = {t * m.a - m.c, t * m.b - m.d, m.a, m.b};
  }
  return m;
}

}  // namespace

TEST_CASE("normalization merges touching and overlapping intervals") {
  CHECK(set_union(make({{0, 1}, {2, 3}}), make({{1, 2}})) == make({{0, 3}}));
  CHECK(set_union(make({{0, 1}, {2, 3}}), make({{0.5, 2.5}})) == make({{0, 3}}));
  CHECK(set_union(make({{0, 1}}), Set{}) == make({{0, 1}}));
  const Set s = make({{3, 4}, {0, 1}, {0.5, 0.7}, {1, 1}});
  REQUIRE(s.size() == 2);
  CHECK(s[0] == Interval<double>{0, 1});
  CHECK(s[1] == Interval<double>{3, 4});
  CHECK(s.measure() == 2.0);
  CHECK_THROWS_AS(Set{}.hull(), InputError);
  CHECK_THROWS_AS(make({{1, 0}}), InputError);
  CHECK_THROWS_AS(make({{0, std::numeric_limits<double>::infinity()}}), NumericalError);
}

TEST_CASE("union is idempotent and commutative") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const Set a = random_set(rng, 1 + rng() % 12), b = random_set(rng, 1 + rng() % 12);
    CHECK(set_union(a, a) == a);
    CHECK(set_union(a, b) == set_union(b, a));
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1].hi < a[i].lo);
  }
}

TEST_CASE("containment with a fattening tolerance") {
  CHECK(contains(make({{0, 1}}), make({{0.2, 0.3}}), 0.0));
  CHECK_FALSE(contains(make({{0, 1}}), make({{0, 1.1}}), 0.05));
  CHECK(contains(make({{0, 1}}), make({{0, 1.1}}), 0.2));
  // A gap narrower than 2 tol is bridged by the fattening.
  CHECK(contains(make({{0, 1}, {1.1, 2}}), make({{0.5, 1.5}}), 0.06));
  CHECK_FALSE(contains(make({{0, 1}, {1.2, 2}}), make({{0.5, 1.5}}), 0.06));
  CHECK(contains(make({{0, 1}}), Set{}, 0.0));
  CHECK_THROWS_AS(contains(make({{0, 1}}), make({{0, 1}}), -1.0), InputError);
}

TEST_CASE("gaps inside the hull") {
  CHECK(gaps(make({{0, 1}, {2, 3}})) == make({{1, 2}}));
  CHECK(gaps(make({{0, 1}})).empty());
  CHECK(gaps(make({{0, 1}, {2, 3}}), std::optional<Interval<double>>({-1, 4})) == make({{-1, 0}, {1, 2}, {3, 4}}));
  const PeriodicJacobi<double> free(std::vector<double>(512, 1.0), std::vector<double>(512, 0.0));
  CHECK(largest_gap(spectrum(free).merged) < 1e-12);
}

TEST_CASE("Minkowski sums") {
  CHECK(minkowski_sum(make({{0, 1}, {2, 3}}), make({{0, 1}, {2, 3}})) == make({{0, 6}}));
  const Set a = make({{0, 0.1}, {1, 1.2}, {5, 5.5}});
  CHECK(minkowski_sum(a, make({{0, 0}})) == a);
  CHECK(minkowski_sum(make({{0, 0.125}, {1, 1.125}}), make({{0, 0.125}, {10, 10.125}})) ==
        make({{0, 0.25}, {1, 1.25}, {10, 10.25}, {11, 11.25}}));
  CHECK_THROWS_AS(minkowski_sum(a, a, 3), InputError);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const Set x = random_set(rng, 1 + rng() % 8), y = random_set(rng, 1 + rng() % 8), z = random_set(rng, 1 + rng() % 5);
    CHECK(minkowski_sum(x, y) == minkowski_sum(y, x));
    const Set l = minkowski_sum(minkowski_sum(x, y), z), r = minkowski_sum(x, minkowski_sum(y, z));
    // Associative up to the rounding of the triple sums.
    CHECK(contains(l, r, 1e-14));
    CHECK(contains(r, l, 1e-14));
    CHECK(std::abs(l.measure() - r.measure()) < 1e-12);
  }
}

TEST_CASE("cover kinds") {
  CHECK(cover_kind_for(ModelKind::PeriodDoubling) == CoverKind::TwoSeeds);
  CHECK(cover_kind_for(ModelKind::ThueMorse) == CoverKind::NextLevel);
  CHECK(cover_kind_for(ModelKind::Fibonacci) == CoverKind::NextLevel);
  CHECK(cover_kind_for(ModelKind::Custom) == CoverKind::NextLevel);
}

TEST_CASE("zero coupling gives the free spectrum") {
  for (ModelKind m : {ModelKind::PeriodDoubling, ModelKind::ThueMorse, ModelKind::Fibonacci}) {
    const auto c = build_cover<double>(Model::builtin(m), 0.0, 4);
    CHECK(c.cover.hull().lo == doctest::Approx(-2.0));
    CHECK(c.cover.hull().hi == doctest::Approx(2.0));
    CHECK(largest_gap(c) < 1e-12);
  }
}

TEST_CASE("cover constituents and raw bands") {
  const auto pd = build_cover<double>(Model::builtin(ModelKind::PeriodDoubling), 1.0, 5);
  REQUIRE(pd.parts.size() == 2);
  CHECK(pd.parts[0].seed == 0);
  CHECK(pd.parts[1].seed == 1);
  CHECK(pd.parts[0].level == 5);
  CHECK(pd.raw_bands().size() == 64);
  CHECK(pd.max_period() == 32);
  const auto tm = build_cover<double>(Model::builtin(ModelKind::ThueMorse), 1.0, 5);
  CHECK(tm.parts[1].level == 6);
  CHECK(tm.raw_bands().size() == 32 + 64);
  CHECK(tm.containment_tol() == doctest::Approx(1e3 * 64 * 0x1p-53 * 3.0));
  // Every raw band lies in the cover.
  for (const auto& b : tm.raw_bands()) CHECK(contains(tm.cover, make({b.band}), 0.0));
  CHECK_THROWS_AS(build_cover<double>(Model::almost_mathieu({1, 2}), 1.0, 2), InputError);
  CHECK_THROWS_AS(build_cover<double>(Model::builtin(ModelKind::ThueMorse), 1.0, 0), InputError);
}

TEST_CASE("builder shares the common level between consecutive covers") {
  CoverBuilder<double> b(Model::builtin(ModelKind::Fibonacci), 2.0);
  const auto c5 = b.build(5), c6 = b.build(6);
  CHECK(c5.parts[1].spectrum.get() == c6.parts[0].spectrum.get());
}

TEST_CASE("covers nest as k grows") {
  for (ModelKind m : {ModelKind::PeriodDoubling, ModelKind::ThueMorse, ModelKind::Fibonacci}) {
    for (double lam : {1.0, 2.0, 4.0}) {
      CoverBuilder<double> b(Model::builtin(m), lam);
      auto prev = b.build(1);
      for (unsigned k = 2; k <= 7; ++k) {
        auto next = b.build(k);
        const double tol = next.containment_tol();
        CHECK(contains(prev.cover, next.cover, tol));
        CHECK(next.cover.measure() <= prev.cover.measure() + tol);
        CHECK(largest_gap(next) >= largest_gap(prev) - tol);
        prev = std::move(next);
      }
    }
  }
}

TEST_CASE("Fibonacci lambda = 4: level 11 sits inside level 10") {
  CoverBuilder<DoubleDouble> b(Model::builtin(ModelKind::Fibonacci), DoubleDouble(4.0));
  const auto c10 = b.build(10), c11 = b.build(11);
  CHECK(contains(c10.cover, c11.cover, c11.containment_tol()));
}

TEST_CASE("period doubling trace map at double precision") {
  std::vector<double> es;
  for (int i = 0; i < 100; ++i) es.push_back(-3.0 + 7.0 * i / 99.0);
  const auto r = check_trace_map<double>(ModelKind::PeriodDoubling, 1.0, 3, es);
  CHECK(r.samples == 100);
  CHECK(r.trace_residual <= 1e-10);
  CHECK(r.matrix_residual <= 1e-10);
  const auto free = check_trace_map<double>(ModelKind::PeriodDoubling, 0.0, 4, es);
  CHECK(free.trace_residual <= 1e-12);
  CHECK_THROWS_AS(check_trace_map<double>(ModelKind::Fibonacci, 1.0, 3, es), InputError);
}

TEST_CASE("Thue-Morse trace map at band midpoints, extended") {
  const auto c = build_cover<DoubleDouble>(Model::builtin(ModelKind::ThueMorse), DoubleDouble(2.0), 4);
  const auto es = default_trace_samples(c.cover);
  CHECK(es.size() == 2 * c.cover.size() - 1);
  const auto r = check_trace_map<DoubleDouble>(ModelKind::ThueMorse, DoubleDouble(2.0), 4, es);
  CHECK(r.skipped == 0);
  CHECK(to_double(r.trace_residual) <= 1e-8);
  CHECK(to_double(r.matrix_residual) <= 1e-8);
  CHECK_THROWS_AS(check_trace_map<DoubleDouble>(ModelKind::ThueMorse, DoubleDouble(2.0), 1, es), InputError);
}

TEST_CASE("trace map residuals drop by ten orders from double to extended") {
  for (ModelKind m : {ModelKind::PeriodDoubling, ModelKind::ThueMorse}) {
    const auto c = build_cover<double>(Model::builtin(m), 1.5, 5);
    const auto es = default_trace_samples(c.cover);
    std::vector<DoubleDouble> esd(es.begin(), es.end());
    const auto rd = check_trace_map<double>(m, 1.5, 5, es);
    const auto re = check_trace_map<DoubleDouble>(m, DoubleDouble(1.5), 5, esd);
    REQUIRE(rd.trace_residual > 0);
    CHECK(to_double(re.trace_residual) <= 1e-10 * rd.trace_residual);
    CHECK(to_double(re.matrix_residual) <= std::max(1e-10 * rd.matrix_residual, 1e-30));
  }
}

TEST_CASE("period doubling traces follow the recursion in 50-digit arithmetic") {
  // Oracle: iterate x' = x y - 2, y' = x^2 - 2 from the level-1 traces in
  // 50 digits and compare with extended monodromy products on S^k(a).
  const auto pd = SubstitutionRule::period_doubling();
  const Model model = Model::builtin(ModelKind::PeriodDoubling);
  for (double e : {-1.7, -0.3, 0.9, 2.2}) {
    const Big be(e);
    const auto m1a = big_monodromy(pd, iterate(pd, 0, 1), 1.0, be);
    const auto m1b = big_monodromy(pd, iterate(pd, 1, 1), 1.0, be);
    Big x = m1a.a + m1a.d, y = m1b.a + m1b.d;
    for (unsigned k = 2; k <= 7; ++k) {
      const Big xn = x * y - 2, yn = x * x - 2;
      x = xn;
      y = yn;
      const auto j = word_to_operator(pd, iterate(pd, 0, k), DoubleDouble(1.0));
      const Big got = oracle::big(monodromy_at(j, DoubleDouble(e)).trace());
      CHECK(static_cast<double>(abs(got - x) / std::max(Big(1), abs(x))) <= 1e-24);
    }
  }
  (void)model;
}

TEST_CASE("square Hamiltonian for Thue-Morse at strong coupling is disconnected") {
  const auto c = build_cover<double>(Model::builtin(ModelKind::ThueMorse), 4.0, 4);
  const auto sq = minkowski_sum(c.cover, c.cover);
  CHECK(sq.size() > 1);
  CHECK(sq.hull().lo == doctest::Approx(2 * c.cover.hull().lo));
  CHECK(sq.hull().hi == doctest::Approx(2 * c.cover.hull().hi));
}

TEST_CASE("serial and parallel covers are identical") {
  const auto a = build_cover<double>(Model::builtin(ModelKind::ThueMorse), 1.0, 9, Execution::Serial);
  const auto b = build_cover<double>(Model::builtin(ModelKind::ThueMorse), 1.0, 9, Execution::Parallel);
  CHECK(a.cover == b.cover);
}
