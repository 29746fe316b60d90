#include "quasispec/serialize.hpp"

#include <fstream>
#include <sstream>

namespace quasispec {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError("invalid JSON in '" + path + "': " + e.what());
  }
}

namespace {

template <typename R>
R real_from_json(const Json& v, const char* what) {
  if (v.is_string()) return parse_real<R>(v.get<std::string>());
  if (v.is_number()) {
    // Plain JSON numbers are accepted but only carry double precision.
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return parse_real<R>(os.str());
  }
  throw InputError(std::string(what) + " must be a decimal string");
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

template <typename R>
Json to_json(const IntervalSet<R>& s) {
  Json arr = Json::array();
  for (const auto& iv : s) arr.push_back(Json::array({format_real(iv.lo), format_real(iv.hi)}));
  return Json{{"intervals", std::move(arr)}};
}

template <typename R>
IntervalSet<R> interval_set_from_json(const Json& j) {
  const Json& arr = member(j, "intervals");
  if (!arr.is_array()) throw InputError("\"intervals\" must be an array");
  std::vector<Interval<R>> parts;
  for (const Json& e : arr) {
    if (!e.is_array() || e.size() != 2) throw InputError("each interval must be a [lo, hi] pair");
    parts.push_back({real_from_json<R>(e[0], "interval endpoint"), real_from_json<R>(e[1], "interval endpoint")});
  }
  return IntervalSet<R>::from_intervals(std::move(parts));
}

template <typename R>
Json reals_to_json(const std::vector<R>& v) {
  Json arr = Json::array();
  for (const R& x : v) arr.push_back(format_real(x));
  return arr;
}

template <typename R>
PeriodicJacobi<R> operator_from_json(const Json& j) {
  const Json& k = member(j, "K");
  if (!k.is_number_integer() || k.get<long long>() < 1) throw InputError("\"K\" must be a positive integer");
  const std::size_t period = k.get<std::size_t>();
  const Json& a = member(j, "a");
  const Json& b = member(j, "b");
  if (!a.is_array() || !b.is_array()) throw InputError("\"a\" and \"b\" must be arrays");
  if (a.size() != period || b.size() != period) throw InputError("\"a\" and \"b\" must have exactly K entries");
  std::vector<R> av, bv;
  for (const Json& v : a) av.push_back(real_from_json<R>(v, "coefficient"));
  for (const Json& v : b) bv.push_back(real_from_json<R>(v, "coefficient"));
  return PeriodicJacobi<R>(std::move(av), std::move(bv));
}

template <typename R>
Json to_json(const PeriodicJacobi<R>& op) {
  return Json{{"K", op.period()}, {"a", reals_to_json(op.a)}, {"b", reals_to_json(op.b)}};
}

LoadedSubstitution substitution_from_json(const Json& j) {
  const Json& alphabet = member(j, "alphabet");
  const Json& rules = member(j, "rules");
  if (!alphabet.is_array() || alphabet.empty()) throw InputError("\"alphabet\" must be a nonempty array");
  if (!rules.is_object()) throw InputError("\"rules\" must be an object");
  std::vector<SubstitutionRule::Symbol> symbols;
  std::vector<std::string> images;
  auto symbol_name = [](const Json& v) {
    if (!v.is_string() || v.get<std::string>().size() != 1)
      throw InputError("symbols must be one-character strings");
    return v.get<std::string>()[0];
  };
  for (const Json& e : alphabet) {
    const char name = symbol_name(member(e, "symbol"));
    symbols.push_back({name, real_from_json<DoubleDouble>(member(e, "value"), "symbol value")});
    const std::string key(1, name);
    if (!rules.contains(key)) throw InputError("no rule for symbol '" + key + "'");
    if (!rules.at(key).is_string()) throw InputError("rule images must be strings");
    images.push_back(rules.at(key).get<std::string>());
  }
  if (rules.size() != symbols.size()) throw InputError("rules mention a symbol outside the alphabet");
  SubstitutionRule rule(std::move(symbols), images);
  Letter seed = 0;
  if (j.contains("seed")) seed = rule.letter(symbol_name(j.at("seed")));
  return {std::move(rule), seed};
}

CsvWriter::CsvWriter(std::ostream& os) : os_(os) { os_ << "lambda,k,quantity,value\n"; }

void CsvWriter::row(const std::string& lambda, const std::string& k, const std::string& quantity,
                    const std::string& value) {
  os_ << lambda << ',' << k << ',' << quantity << ',' << value << '\n';
}

#define QUASISPEC_INSTANTIATE(R)                                          \
  template Json to_json<R>(const IntervalSet<R>&);                        \
  template IntervalSet<R> interval_set_from_json<R>(const Json&);         \
  template Json reals_to_json<R>(const std::vector<R>&);                  \
  template PeriodicJacobi<R> operator_from_json<R>(const Json&);          \
  template Json to_json<R>(const PeriodicJacobi<R>&);

QUASISPEC_INSTANTIATE(double)
QUASISPEC_INSTANTIATE(DoubleDouble)

}  // namespace quasispec
