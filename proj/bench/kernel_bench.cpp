// Sturm-count kernel throughput: serial reference vs batched (OpenMP + SIMD).
//
//   kernel_bench [n] [shifts] [reps]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include <omp.h>

#include "quasispec/sturm.hpp"

using namespace quasispec;

template <typename R>
static double median_seconds(int reps, auto&& fn) {
  std::vector<double> t;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

template <typename R>
static void run(std::size_t n, std::size_t m, int reps) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymTridiag<R> t;
  for (std::size_t i = 0; i < n; ++i) t.diag.push_back(R(4.0 * u(rng)));
  for (std::size_t i = 0; i + 1 < n; ++i) t.off.push_back(R(1.0 + 0.1 * u(rng)));
  const SturmMatrix<R> sm(t);
  std::vector<R> x(m);
  for (auto& v : x) v = R(6.0 * u(rng));
  std::vector<std::int32_t> c1(m), c2(m);

  const double ts = median_seconds<R>(reps, [&] { sturm_counts_serial<R>(sm, x, c1); });
  const double tp = median_seconds<R>(reps, [&] { sturm_counts_parallel<R>(sm, x, c2); });
  const double steps = static_cast<double>(n) * static_cast<double>(m);
  std::printf("%-9s n=%zu shifts=%zu  serial %.3f s (%.2f ns/step)  batched %.3f s (%.2f ns/step)  x%.1f  %s\n",
              RealTraits<R>::name, n, m, ts, 1e9 * ts / steps, tp, 1e9 * tp / steps, ts / tp,
              c1 == c2 ? "counts identical" : "COUNTS DIFFER");
}

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 4096;
  const std::size_t m = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 4096;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 3;
  std::printf("threads: %d\n", omp_get_max_threads());
  run<double>(n, m, reps);
  run<DoubleDouble>(n, m, reps);
  return 0;
}
