#pragma once

// Periodic covers of substitution spectra and trace-map verification.
//
// Period doubling:           cover_k = sigma(S^k(a)) u sigma(S^k(b))
// Thue-Morse, Fibonacci, and
// any other substitution:    cover_k = sigma(S^k(a)) u sigma(S^{k+1}(a))

#include <map>
#include <memory>
#include <span>
#include <utility>

#include "quasispec/monodromy.hpp"
#include "quasispec/substitution.hpp"

namespace quasispec {

enum class CoverKind { TwoSeeds, NextLevel };

CoverKind cover_kind_for(ModelKind m);

template <typename R>
struct Constituent {
  Letter seed;
  unsigned level;
  std::size_t period;
  std::shared_ptr<const SpectrumResult<R>> spectrum;
};

template <typename R>
struct RawBand {
  Interval<R> band;
  Letter seed;
  unsigned level;
  bool repaired;
};

template <typename R>
struct CoverFamily {
  ModelKind model = ModelKind::Custom;
  CoverKind kind = CoverKind::NextLevel;
  unsigned k = 0;
  R lambda{0};
  R norm{0};  // bound on the operator norm of every constituent
  IntervalSet<R> cover;
  std::vector<Constituent<R>> parts;

  std::vector<RawBand<R>> raw_bands() const;
  std::vector<R> raw_widths() const;
  std::size_t repaired() const;
  std::size_t max_period() const;
  /// 1e3 K u ||J|| with K the longest constituent period.
  R containment_tol() const;
};

/// Builds covers for one (model, lambda), sharing spectra between levels:
/// cover k and cover k+1 of the next-level kind have sigma(S^{k+1}(a)) in
/// common.
template <typename R>
class CoverBuilder {
 public:
  CoverBuilder(Model model, R lambda, Execution exec = Execution::Parallel, std::size_t cap = kDefaultWordCap);

  CoverFamily<R> build(unsigned k);
  std::shared_ptr<const SpectrumResult<R>> level_spectrum(Letter seed, unsigned level);
  const Model& model() const { return model_; }
  const R& lambda() const { return lambda_; }

 private:
  Model model_;
  R lambda_;
  Execution exec_;
  std::size_t cap_;
  std::map<std::pair<Letter, unsigned>, std::shared_ptr<const SpectrumResult<R>>> cache_;
  std::map<std::pair<Letter, unsigned>, std::size_t> periods_;
};

template <typename R>
CoverFamily<R> build_cover(const Model& model, const R& lambda, unsigned k, Execution exec = Execution::Parallel,
                           std::size_t cap = kDefaultWordCap);

template <typename R>
struct TraceMapCheck {
  R trace_residual{0};   // max relative residual of the trace recursions
  R matrix_residual{0};  // max relative residual of the matrix recursions
  std::size_t samples = 0;
  std::size_t skipped = 0;  // energies where a product overflowed
};

/// Checks, at each energy, the trace recursions of period doubling
/// (x' = x y - 2, y' = x^2 - 2) or Thue-Morse (x_{k+1} = x_{k-1}^2 (x_k - 2) + 2,
/// y_{k+1} = x_{k+1}) against direct monodromy products, together with the
/// word-level identities M_{k+1}^a = M_k^b M_k^a and M_{k+1}^b = M_k^a M_k^a
/// (period doubling) or M_k^a M_k^b (Thue-Morse). Residuals are relative to
/// max(1, magnitude of the terms). Thue-Morse needs k >= 2.
template <typename R>
TraceMapCheck<R> check_trace_map(ModelKind model, const R& lambda, unsigned k, std::span<const R> energies);

/// Band and gap midpoints of a cover.
template <typename R>
std::vector<R> default_trace_samples(const IntervalSet<R>& cover);

}  // namespace quasispec
