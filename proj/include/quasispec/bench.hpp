#pragma once

// Scaling benchmark: eigenvalues of the periodic boundary matrix of the
// Fibonacci operator by the banded pipeline (reorder, bulge chase, bisection)
// and by the dense one (Householder, bisection), timed over a grid of K.

#include <cstdint>
#include <string_view>
#include <vector>

#include "quasispec/fractal.hpp"
#include "quasispec/realnum.hpp"

namespace quasispec {

enum class BenchMethod { Banded, Dense };

std::string_view to_string(BenchMethod m);

struct BenchRecord {
  std::size_t k = 0;
  BenchMethod method = BenchMethod::Banded;
  Precision precision = Precision::Double;
  double wall_seconds = 0.0;  // median over repetitions of the mean over lambdas
  std::uint64_t rotation_count = 0;  // banded reduction only; 0 for dense
};

struct BenchConfig {
  std::vector<std::size_t> ks;
  std::vector<Precision> precisions{Precision::Double};
  std::vector<double> lambdas{1.0, 2.0, 3.0, 4.0};
  int repetitions = 3;
  std::size_t dense_max = 4096;
  bool dense = true;
  Execution exec = Execution::Parallel;
};

/// Powers-of-two grid from kmin to kmax with the given number of points per
/// doubling (rounded to integers).
std::vector<std::size_t> bench_grid(std::size_t kmin, std::size_t kmax, int points_per_octave = 1);

/// Runs the grid; records come out ordered by precision, method, then K.
/// Throws InputError for fewer than 5 grid points or fewer than 3 repetitions.
std::vector<BenchRecord> run_bench(const BenchConfig& cfg);

struct BenchSlope {
  BenchMethod method;
  Precision precision;
  SlopeFit fit;
};

/// log-log slope of wall time against K over the last five records of each
/// (method, precision) series.
std::vector<BenchSlope> bench_slopes(const std::vector<BenchRecord>& records, std::size_t last = 5);

}  // namespace quasispec
