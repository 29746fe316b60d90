#pragma once

// Substitution rules on small alphabets, iterated words, and the potentials
// (substitution, almost Mathieu, Sturmian) that turn them into periodic
// Schroedinger operators.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quasispec/jacobi.hpp"

namespace quasispec {

using Letter = std::uint8_t;
using Word = std::vector<Letter>;

inline constexpr std::size_t kDefaultWordCap = std::size_t{1} << 26;

class SubstitutionRule {
 public:
  struct Symbol {
    char name;
    DoubleDouble value;  // potential value before scaling by lambda
  };

  /// images[i] is the image of symbols[i], spelled with symbol names.
  SubstitutionRule(std::vector<Symbol> symbols, const std::vector<std::string>& images);

  std::size_t alphabet_size() const { return symbols_.size(); }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  const Word& image(Letter l) const { return images_[l]; }
  /// Throws InputError for a symbol not in the alphabet.
  Letter letter(char name) const;
  std::string spell(const Word& w) const;
  /// m[i][j] = occurrences of letter i in the image of letter j.
  std::vector<std::vector<std::uint64_t>> incidence() const;

  static SubstitutionRule fibonacci();
  static SubstitutionRule period_doubling();
  static SubstitutionRule thue_morse();
  /// a->ab, b->ac, c->db, d->dc. There is no canonical value map for four
  /// letters, so the caller supplies one.
  static SubstitutionRule rudin_shapiro(const std::vector<DoubleDouble>& values);

 private:
  std::vector<Symbol> symbols_;
  std::vector<Word> images_;
};

/// S^k(seed). Throws InputError once the word would exceed cap letters.
Word iterate(const SubstitutionRule& s, Letter seed, unsigned k, std::size_t cap = kDefaultWordCap);

struct Primitivity {
  bool primitive = false;
  unsigned power = 0;  // least k with a positive incidence power
};

/// Least k <= (m-1)^2 + 1 with every entry of the k-th incidence power positive.
Primitivity check_primitive(const SubstitutionRule& s);

/// a_n = 1, b_n = lambda * value(w_n).
template <typename R>
PeriodicJacobi<R> word_to_operator(const SubstitutionRule& s, const Word& w, const R& lambda);

struct Rational {
  std::int64_t p = 0;
  std::int64_t q = 1;
};

/// Parses "p/q" (or an integer); requires q >= 1 and gcd(p, q) = 1.
Rational parse_rational(std::string_view text);

enum class ModelKind { Fibonacci, PeriodDoubling, ThueMorse, RudinShapiro, AlmostMathieu, Sturmian, Custom };

std::string_view to_string(ModelKind m);
ModelKind parse_model_kind(std::string_view text);

struct Model {
  ModelKind kind = ModelKind::Fibonacci;
  Rational alpha{};        // AlmostMathieu, Sturmian
  DoubleDouble theta{0.0};  // AlmostMathieu, Sturmian
  std::optional<SubstitutionRule> rule;  // substitution models
  Letter seed = 0;

  bool is_substitution() const { return rule.has_value(); }
  static Model substitution(ModelKind kind, SubstitutionRule rule, Letter seed = 0);
  static Model almost_mathieu(Rational alpha, DoubleDouble theta = 0.0);
  static Model sturmian(Rational alpha, DoubleDouble theta = 0.0);
  static Model builtin(ModelKind kind);  // Fibonacci, PeriodDoubling, ThueMorse
};

/// Period-K operator for the model at coupling lambda. Substitution models
/// use the prefix of length K of the iterated seed word; almost Mathieu uses
/// b_n = 2 lambda cos(2 pi (n alpha + theta)), Sturmian
/// b_n = lambda [ (n alpha + theta) mod 1 >= 1 - alpha ], n = 1..K, and these
/// require q | K.
template <typename R>
PeriodicJacobi<R> sample_potential(const Model& m, const R& lambda, std::size_t k,
                                   std::size_t cap = kDefaultWordCap);

}  // namespace quasispec
