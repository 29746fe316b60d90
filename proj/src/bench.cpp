#include "quasispec/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "quasispec/substitution.hpp"

namespace quasispec {

std::string_view to_string(BenchMethod m) { return m == BenchMethod::Banded ? "banded" : "dense"; }

std::vector<std::size_t> bench_grid(std::size_t kmin, std::size_t kmax, int points_per_octave) {
  if (kmin < 3 || kmax < kmin) throw InputError("benchmark K-range must satisfy 3 <= kmin <= kmax");
  if (points_per_octave < 1) throw InputError("points per octave must be positive");
  std::vector<std::size_t> ks;
  const double octaves = std::log2(static_cast<double>(kmax) / static_cast<double>(kmin));
  const int steps = static_cast<int>(std::floor(octaves * points_per_octave + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const auto k = static_cast<std::size_t>(
        std::llround(static_cast<double>(kmin) * std::exp2(static_cast<double>(i) / points_per_octave)));
    if (ks.empty() || k != ks.back()) ks.push_back(k);
  }
  return ks;
}

namespace {

using Clock = std::chrono::steady_clock;

// Seconds per call; calls that finish under 10 ms are repeated until the
// batch does not, then averaged.
template <typename Fn>
double time_call(Fn&& fn) {
  constexpr double kMinBatch = 0.010;
  std::size_t calls = 1;
  for (;;) {
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < calls; ++i) fn();
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (s >= kMinBatch) return s / static_cast<double>(calls);
    calls *= 2;
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename R>
BenchRecord bench_one(std::size_t k, BenchMethod method, const BenchConfig& cfg) {
  const Model fib = Model::builtin(ModelKind::Fibonacci);
  std::vector<PeriodicJacobi<R>> ops;
  for (double lam : cfg.lambdas) ops.push_back(sample_potential<R>(fib, R(lam), k));

  BenchRecord rec;
  rec.k = k;
  rec.method = method;
  rec.precision = RealTraits<R>::precision;
  std::vector<double> reps;
  for (int r = 0; r < cfg.repetitions; ++r) {
    double total = 0.0;
    for (const auto& op : ops) {
      total += time_call([&] {
        if (method == BenchMethod::Banded) {
          ReductionStats stats;
          const SymTridiag<R> t = penta_to_tridiag(assemble_reordered(op, +1), &stats);
          const auto eigs = tridiag_eigenvalues<R>(t, std::nullopt, cfg.exec);
          if (eigs.size() != k) throw NumericalError("benchmark eigenvalue count mismatch");
          rec.rotation_count = stats.rotations;
        } else {
          const SymTridiag<R> t = dense_to_tridiag(assemble_jpm(op, +1), cfg.exec);
          const auto eigs = tridiag_eigenvalues<R>(t, std::nullopt, cfg.exec);
          if (eigs.size() != k) throw NumericalError("benchmark eigenvalue count mismatch");
        }
      });
    }
    reps.push_back(total / static_cast<double>(ops.size()));
  }
  rec.wall_seconds = median(std::move(reps));
  return rec;
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
  if (cfg.ks.size() < 5) throw InputError("benchmark needs at least 5 values of K");
  if (cfg.repetitions < 3) throw InputError("benchmark needs at least 3 repetitions");
  if (cfg.lambdas.empty()) throw InputError("benchmark needs at least one lambda");
  for (std::size_t k : cfg.ks)
    if (k < 3) throw InputError("benchmark K must be at least 3");

  std::vector<BenchRecord> out;
  for (Precision p : cfg.precisions) {
    for (BenchMethod m : {BenchMethod::Banded, BenchMethod::Dense}) {
      if (m == BenchMethod::Dense && !cfg.dense) continue;
      for (std::size_t k : cfg.ks) {
        if (m == BenchMethod::Dense && k > cfg.dense_max) continue;
        out.push_back(with_precision(p, [&](auto tag) { return bench_one<decltype(tag)>(k, m, cfg); }));
      }
    }
  }
  return out;
}

std::vector<BenchSlope> bench_slopes(const std::vector<BenchRecord>& records, std::size_t last) {
  std::map<std::pair<int, int>, std::vector<const BenchRecord*>> series;
  for (const auto& r : records)
    series[{static_cast<int>(r.precision), static_cast<int>(r.method)}].push_back(&r);
  std::vector<BenchSlope> out;
  for (const auto& [key, recs] : series) {
    if (recs.size() < 2) continue;
    const std::size_t first = recs.size() > last ? recs.size() - last : 0;
    std::vector<double> x, y;
    for (std::size_t i = first; i < recs.size(); ++i) {
      x.push_back(static_cast<double>(recs[i]->k));
      y.push_back(recs[i]->wall_seconds);
    }
    out.push_back({recs.front()->method, recs.front()->precision, fit_loglog(x, y)});
  }
  return out;
}

}  // namespace quasispec
