#pragma once

// File formats. Every real number travels as a decimal string.
//
//   operator:      {"K": 2, "a": ["1", "1"], "b": ["0", "0"]}
//   substitution:  {"alphabet": [{"symbol": "a", "value": "1.0"}, ...],
//                   "rules": {"a": "ab", "b": "aa"}, "seed": "a"}
//   interval set:  {"intervals": [["lo", "hi"], ...]}

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "quasispec/interval_set.hpp"
#include "quasispec/jacobi.hpp"
#include "quasispec/substitution.hpp"

namespace quasispec {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file; InputError on I/O or syntax errors.
Json read_json_file(const std::string& path);

template <typename R>
Json to_json(const IntervalSet<R>& s);

template <typename R>
IntervalSet<R> interval_set_from_json(const Json& j);

template <typename R>
Json reals_to_json(const std::vector<R>& v);

template <typename R>
PeriodicJacobi<R> operator_from_json(const Json& j);

template <typename R>
Json to_json(const PeriodicJacobi<R>& op);

struct LoadedSubstitution {
  SubstitutionRule rule;
  Letter seed;
};

LoadedSubstitution substitution_from_json(const Json& j);

/// lambda,k,quantity,value rows.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os);
  void row(const std::string& lambda, const std::string& k, const std::string& quantity, const std::string& value);

 private:
  std::ostream& os_;
};

}  // namespace quasispec
