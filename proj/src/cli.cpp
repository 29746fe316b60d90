#include "quasispec/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quasispec/bench.hpp"
#include "quasispec/cover.hpp"
#include "quasispec/fractal.hpp"
#include "quasispec/monodromy.hpp"
#include "quasispec/serialize.hpp"

namespace quasispec {

namespace {

struct RunConfig {
  std::string command;
  std::string model;
  std::string file;
  std::string lambda;
  std::vector<std::string> lambda_grid;
  std::optional<unsigned> k;
  std::optional<unsigned> k2;
  std::string precision = "double";
  std::string eps_list = "2^-4..2^-40";
  std::string out = "json";
  std::string output;
  int threads = 0;
  std::string seed_symbol;
  std::size_t max_word_length = kDefaultWordCap;
  std::string alpha;
  std::string theta = "0";
  std::vector<std::string> values;
  std::vector<std::string> energies;
  // bench
  std::size_t kmin = 512;
  std::size_t kmax = 8192;
  int points_per_octave = 1;
  int repetitions = 3;
  std::size_t dense_max = 4096;
  bool no_dense = false;
};

// Where the operator comes from: a named or file-defined model, or a literal
// operator file.
struct ModelSource {
  std::optional<Model> model;
  std::optional<Json> op;
  std::string name;
};

class Output {
 public:
  explicit Output(const RunConfig& cfg) : csv_(cfg.out == "csv") {}
  bool csv() const { return csv_; }
  Json& json() { return json_; }
  CsvWriter& rows() {
    if (!writer_) writer_.emplace(text_);
    return *writer_;
  }
  std::string str() const { return csv_ ? text_.str() : json_.dump(2) + "\n"; }

 private:
  bool csv_;
  Json json_ = Json::object();
  std::ostringstream text_;
  std::optional<CsvWriter> writer_;
};

template <typename R>
R parse_value(const std::string& text) {
  if (text.find('^') != std::string::npos) return R(parse_double_or_power(text));
  return parse_real<R>(text);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

template <typename R>
std::vector<R> lambda_values(const RunConfig& cfg) {
  using std::exp;
  using std::log;
  if (!cfg.lambda.empty() && !cfg.lambda_grid.empty()) throw InputError("give either --lambda or --lambda-grid");
  if (!cfg.lambda.empty()) return {parse_value<R>(cfg.lambda)};
  std::vector<std::string> spec = cfg.lambda_grid;
  if (spec.empty()) spec = {"0..4", "lin", "512"};
  const auto dots = spec[0].find("..");
  if (dots == std::string::npos) throw InputError("--lambda-grid expects MIN..MAX {lin|log} STEPS");
  const R lo = parse_value<R>(spec[0].substr(0, dots));
  const R hi = parse_value<R>(spec[0].substr(dots + 2));
  long long steps = 0;
  try {
    std::size_t used = 0;
    steps = std::stoll(spec[2], &used);
    if (used != spec[2].size()) steps = 0;
  } catch (const std::exception&) {
    steps = 0;
  }
  if (steps < 1) throw InputError("--lambda-grid needs a positive integer step count");
  if (hi < lo) throw InputError("--lambda-grid needs MIN <= MAX");
  const bool logscale = spec[1] == "log";
  if (!logscale && spec[1] != "lin") throw InputError("--lambda-grid spacing must be lin or log");
  if (logscale && !(R(0) < lo)) throw InputError("a log-spaced grid needs MIN > 0");
  std::vector<R> grid;
  if (steps == 1) return {lo};
  const R denom(static_cast<double>(steps - 1));
  for (long long i = 0; i < steps; ++i) {
    const R t = R(static_cast<double>(i)) / denom;
    if (i == 0)
      grid.push_back(lo);
    else if (i == steps - 1)
      grid.push_back(hi);
    else if (logscale)
      grid.push_back(exp(log(lo) + t * (log(hi) - log(lo))));
    else
      grid.push_back(lo + t * (hi - lo));
  }
  return grid;
}

// "2^-4..2^-40" expands to every integer power in between; anything else is
// a comma-separated list of values.
template <typename R>
std::vector<R> eps_values(const std::string& text) {
  std::vector<R> out;
  for (const std::string& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_value<R>(item));
      continue;
    }
    const std::string a = item.substr(0, dots), b = item.substr(dots + 2);
    if (a.rfind("2^", 0) != 0 || b.rfind("2^", 0) != 0) throw InputError("eps ranges must be written 2^a..2^b");
    int ea = 0, eb = 0;
    try {
      ea = std::stoi(a.substr(2));
      eb = std::stoi(b.substr(2));
    } catch (const std::exception&) {
      throw InputError("bad exponent in eps range '" + item + "'");
    }
    const int step = ea <= eb ? 1 : -1;
    for (int e = ea;; e += step) {
      out.push_back(ldexp(R(1), e));
      if (e == eb) break;
    }
  }
  if (out.empty()) throw InputError("--eps-list is empty");
  return out;
}

ModelSource resolve_source(const RunConfig& cfg) {
  if (cfg.model.empty() == cfg.file.empty()) throw InputError("give exactly one of --model and --file");
  ModelSource src;
  if (!cfg.file.empty()) {
    Json j = read_json_file(cfg.file);
    if (j.is_object() && j.contains("K")) {
      src.op = std::move(j);
      src.name = "operator-file";
      return src;
    }
    if (!j.is_object() || !j.contains("rules")) throw InputError("file is neither an operator nor a substitution");
    auto loaded = substitution_from_json(j);
    Letter seed = loaded.seed;
    if (!cfg.seed_symbol.empty()) seed = loaded.rule.letter(cfg.seed_symbol.at(0));
    src.model = Model::substitution(ModelKind::Custom, std::move(loaded.rule), seed);
    src.name = "custom";
    return src;
  }
  const ModelKind kind = parse_model_kind(cfg.model);
  src.name = std::string(to_string(kind));
  switch (kind) {
    case ModelKind::AlmostMathieu:
    case ModelKind::Sturmian: {
      if (cfg.alpha.empty()) throw InputError("model '" + cfg.model + "' needs --alpha p/q");
      const Rational alpha = parse_rational(cfg.alpha);
      const DoubleDouble theta = parse_real<DoubleDouble>(cfg.theta);
      src.model = kind == ModelKind::AlmostMathieu ? Model::almost_mathieu(alpha, theta) : Model::sturmian(alpha, theta);
      return src;
    }
    case ModelKind::RudinShapiro: {
      if (cfg.values.size() != 4) throw InputError("rudin-shapiro needs --values with four entries (a,b,c,d)");
      std::vector<DoubleDouble> vals;
      for (const auto& v : cfg.values) vals.push_back(parse_real<DoubleDouble>(v));
      src.model = Model::substitution(kind, SubstitutionRule::rudin_shapiro(vals));
      break;
    }
    default:
      src.model = Model::builtin(kind);
  }
  if (!cfg.seed_symbol.empty()) src.model->seed = src.model->rule->letter(cfg.seed_symbol.at(0));
  return src;
}

unsigned require_k(const RunConfig& cfg) {
  if (!cfg.k) throw InputError("--k is required for '" + cfg.command + "'");
  if (*cfg.k < 1) throw InputError("--k must be at least 1");
  return *cfg.k;
}

const Model& require_substitution(const ModelSource& src, const std::string& command) {
  if (!src.model || !src.model->is_substitution())
    throw InputError("'" + command + "' needs a substitution model");
  return *src.model;
}

// The operator of a single-operator command: the literal file, S^k(seed) for
// substitutions, or k periods of a rational-frequency model.
template <typename R>
PeriodicJacobi<R> single_operator(const RunConfig& cfg, const ModelSource& src, std::optional<R>& lambda) {
  if (src.op) {
    if (!cfg.lambda.empty() || !cfg.lambda_grid.empty()) throw InputError("--lambda does not apply to an operator file");
    return operator_from_json<R>(*src.op);
  }
  if (!cfg.lambda_grid.empty()) throw InputError("'" + cfg.command + "' takes a single --lambda");
  if (cfg.lambda.empty()) throw InputError("--lambda is required for '" + cfg.command + "'");
  lambda = parse_value<R>(cfg.lambda);
  const Model& m = *src.model;
  const unsigned k = require_k(cfg);
  if (m.is_substitution()) {
    const Word w = iterate(*m.rule, m.seed, k, cfg.max_word_length);
    return word_to_operator(*m.rule, w, *lambda);
  }
  const auto period = static_cast<std::size_t>(m.alpha.q) * k;
  if (period > cfg.max_word_length) throw InputError("period exceeds --max-word-length");
  return sample_potential(m, *lambda, period, cfg.max_word_length);
}

Execution execution() { return Execution::Parallel; }

template <typename R>
void header(Output& o, const RunConfig& cfg, const ModelSource& src) {
  Json& j = o.json();
  j["command"] = cfg.command;
  j["model"] = src.name;
  j["precision"] = std::string(to_string(RealTraits<R>::precision));
}

std::string k_text(const RunConfig& cfg) { return cfg.k ? std::to_string(*cfg.k) : std::string(); }

template <typename R>
void cmd_spectrum(const RunConfig& cfg, const ModelSource& src, Output& o) {
  std::optional<R> lambda;
  const PeriodicJacobi<R> op = single_operator<R>(cfg, src, lambda);
  const SpectrumResult<R> s = spectrum(op, execution());
  const std::string lam = lambda ? format_real(*lambda) : std::string();
  if (o.csv()) {
    auto& w = o.rows();
    for (const R& e : s.eigs_plus) w.row(lam, k_text(cfg), "eig_plus", format_real(e));
    for (const R& e : s.eigs_minus) w.row(lam, k_text(cfg), "eig_minus", format_real(e));
    for (const auto& b : s.bands) {
      w.row(lam, k_text(cfg), "band_lo", format_real(b.lo));
      w.row(lam, k_text(cfg), "band_hi", format_real(b.hi));
    }
    w.row(lam, k_text(cfg), "repaired", std::to_string(s.repaired));
    return;
  }
  header<R>(o, cfg, src);
  Json& j = o.json();
  j["lambda"] = lambda ? Json(lam) : Json(nullptr);
  j["k"] = cfg.k && !src.op ? Json(*cfg.k) : Json(nullptr);
  j["K"] = op.period();
  j["eigs_plus"] = reals_to_json(s.eigs_plus);
  j["eigs_minus"] = reals_to_json(s.eigs_minus);
  Json bands = Json::array();
  for (const auto& b : s.bands) bands.push_back(Json::array({format_real(b.lo), format_real(b.hi)}));
  j["bands"] = std::move(bands);
  j["spectrum"] = to_json(s.merged);
  j["repaired"] = s.repaired;
  j["ties"] = s.ties;
}

template <typename R>
void cmd_cover(const RunConfig& cfg, const ModelSource& src, Output& o) {
  const Model& m = require_substitution(src, cfg.command);
  const unsigned k = require_k(cfg);
  const std::vector<R> lambdas = lambda_values<R>(cfg);
  Json covers = Json::array();
  for (const R& lambda : lambdas) {
    const CoverFamily<R> c = build_cover(m, lambda, k, execution(), cfg.max_word_length);
    const std::string lam = format_real(lambda);
    if (o.csv()) {
      auto& w = o.rows();
      for (const auto& iv : c.cover) {
        w.row(lam, k_text(cfg), "interval_lo", format_real(iv.lo));
        w.row(lam, k_text(cfg), "interval_hi", format_real(iv.hi));
      }
      w.row(lam, k_text(cfg), "repaired", std::to_string(c.repaired()));
      continue;
    }
    Json entry = to_json(c.cover);
    entry["lambda"] = lam;
    entry["repaired"] = c.repaired();
    covers.push_back(std::move(entry));
  }
  if (o.csv()) return;
  header<R>(o, cfg, src);
  o.json()["k"] = k;
  o.json()["covers"] = std::move(covers);
}

template <typename R>
void cmd_dim(const RunConfig& cfg, const ModelSource& src, Output& o) {
  const Model& m = require_substitution(src, cfg.command);
  const unsigned k = require_k(cfg);
  const unsigned k2 = cfg.k2.value_or(k + 1);
  if (k2 != k + 1) throw InputError("'dim' needs consecutive levels: --k2 must equal --k + 1");
  Json rows = Json::array();
  for (const R& lambda : lambda_values<R>(cfg)) {
    CoverBuilder<R> builder(m, lambda, execution(), cfg.max_word_length);
    const CoverFamily<R> c1 = builder.build(k);
    const CoverFamily<R> c2 = builder.build(k2);
    const DimensionEstimate<R> est = hausdorff_estimate(c1, c2);
    const std::string lam = format_real(lambda);
    if (o.csv()) {
      auto& w = o.rows();
      w.row(lam, k_text(cfg), "alpha", format_real(est.alpha));
      w.row(lam, k_text(cfg), "residual", format_real(est.residual));
      w.row(lam, k_text(cfg), "status", std::string(to_string(est.status)));
      continue;
    }
    rows.push_back(Json{{"lambda", lam},
                        {"k", k},
                        {"k2", k2},
                        {"alpha", format_real(est.alpha)},
                        {"residual", format_real(est.residual)},
                        {"iterations", est.iterations},
                        {"status", std::string(to_string(est.status))},
                        {"identical_covers", est.identical_covers},
                        {"monotone", est.monotone}});
  }
  if (o.csv()) return;
  header<R>(o, cfg, src);
  o.json()["estimates"] = std::move(rows);
}

template <typename R>
void cmd_boxdim(const RunConfig& cfg, const ModelSource& src, Output& o) {
  const Model& m = require_substitution(src, cfg.command);
  const unsigned k = require_k(cfg);
  const std::vector<R> eps = eps_values<R>(cfg.eps_list);
  Json curves = Json::array();
  for (const R& lambda : lambda_values<R>(cfg)) {
    const CoverFamily<R> c = build_cover(m, lambda, k, execution(), cfg.max_word_length);
    const std::string lam = format_real(lambda);
    Json points = Json::array();
    for (const R& e : eps) {
      const BoxCount<R> b = box_count(c.cover, e);
      const auto curve = box_dim_curve<R>(c.cover, std::span<const R>(&e, 1));
      const std::string es = format_real(e);
      if (o.csv()) {
        o.rows().row(lam, k_text(cfg), "count:" + es, std::to_string(b.count));
        o.rows().row(lam, k_text(cfg), "ratio:" + es, format_real(curve.front().second));
      } else {
        points.push_back(Json{{"eps", es}, {"count", b.count}, {"ratio", format_real(curve.front().second)}});
      }
    }
    if (!o.csv()) curves.push_back(Json{{"lambda", lam}, {"points", std::move(points)}});
  }
  if (o.csv()) return;
  header<R>(o, cfg, src);
  o.json()["k"] = k;
  o.json()["curves"] = std::move(curves);
}

template <typename R>
void cmd_gaps(const RunConfig& cfg, const ModelSource& src, Output& o) {
  const Model& m = require_substitution(src, cfg.command);
  const unsigned k = require_k(cfg);
  Json rows = Json::array();
  for (const R& lambda : lambda_values<R>(cfg)) {
    const CoverFamily<R> c = build_cover(m, lambda, k, execution(), cfg.max_word_length);
    const std::string lam = format_real(lambda);
    const std::string gap = format_real(largest_gap(c));
    if (o.csv())
      o.rows().row(lam, k_text(cfg), "largest_gap", gap);
    else
      rows.push_back(Json{{"lambda", lam}, {"k", k}, {"largest_gap", gap}});
  }
  if (o.csv()) return;
  header<R>(o, cfg, src);
  o.json()["rows"] = std::move(rows);
}

template <typename R>
void cmd_sum(const RunConfig& cfg, const ModelSource& src, Output& o) {
  const Model& m = require_substitution(src, cfg.command);
  const unsigned k = require_k(cfg);
  if (!cfg.lambda_grid.empty()) throw InputError("'sum' takes a single --lambda");
  if (cfg.lambda.empty()) throw InputError("--lambda is required for 'sum'");
  const R lambda = parse_value<R>(cfg.lambda);
  const CoverFamily<R> c = build_cover(m, lambda, k, execution(), cfg.max_word_length);
  const IntervalSet<R> s = minkowski_sum(c.cover, c.cover);
  const std::string lam = format_real(lambda);
  if (o.csv()) {
    for (const auto& iv : s) {
      o.rows().row(lam, k_text(cfg), "interval_lo", format_real(iv.lo));
      o.rows().row(lam, k_text(cfg), "interval_hi", format_real(iv.hi));
    }
    return;
  }
  header<R>(o, cfg, src);
  o.json()["lambda"] = lam;
  o.json()["k"] = k;
  o.json()["intervals"] = to_json(s)["intervals"];
}

template <typename R>
void cmd_trace(const RunConfig& cfg, const ModelSource& src, Output& o) {
  if (cfg.energies.empty()) throw InputError("'trace' needs --energy");
  std::optional<R> lambda;
  const PeriodicJacobi<R> op = single_operator<R>(cfg, src, lambda);
  const R slack = default_slack(op);
  const std::string lam = lambda ? format_real(*lambda) : std::string();
  Json samples = Json::array();
  for (const std::string& text : cfg.energies) {
    const R e = parse_value<R>(text);
    const Monodromy<R> mono = monodromy_at(op, e);
    const std::string cls(to_string(classify_trace(mono.trace(), slack)));
    const std::string es = format_real(e);
    if (o.csv()) {
      o.rows().row(lam, k_text(cfg), "trace:" + es, format_real(mono.trace()));
      o.rows().row(lam, k_text(cfg), "class:" + es, cls);
    } else {
      samples.push_back(
          Json{{"energy", es}, {"trace", format_real(mono.trace())}, {"det", format_real(mono.det())}, {"class", cls}});
    }
  }
  if (o.csv()) return;
  header<R>(o, cfg, src);
  o.json()["lambda"] = lambda ? Json(lam) : Json(nullptr);
  o.json()["K"] = op.period();
  o.json()["slack"] = format_real(slack);
  o.json()["samples"] = std::move(samples);
}

void cmd_bench(const RunConfig& cfg, Output& o) {
  BenchConfig bc;
  bc.ks = bench_grid(cfg.kmin, cfg.kmax, cfg.points_per_octave);
  if (cfg.precision == "both")
    bc.precisions = {Precision::Double, Precision::Extended};
  else
    bc.precisions = {parse_precision(cfg.precision)};
  bc.repetitions = cfg.repetitions;
  bc.dense_max = std::min<std::size_t>(cfg.dense_max, 4096);
  bc.dense = !cfg.no_dense;
  const std::vector<BenchRecord> recs = run_bench(bc);
  const std::vector<BenchSlope> slopes = bench_slopes(recs);

  auto fmt = [](double x) { return format_real(x); };
  if (o.csv()) {
    auto& w = o.rows();
    for (const auto& r : recs) {
      const std::string series = std::string(to_string(r.method)) + "/" + std::string(to_string(r.precision));
      w.row("1-4", std::to_string(r.k), series + "/wall_seconds", fmt(r.wall_seconds));
      w.row("1-4", std::to_string(r.k), series + "/rotation_count", std::to_string(r.rotation_count));
    }
    for (const auto& s : slopes)
      w.row("1-4", "", "slope:" + std::string(to_string(s.method)) + "/" + std::string(to_string(s.precision)),
            fmt(s.fit.slope));
    return;
  }
  Json records = Json::array();
  for (const auto& r : recs)
    records.push_back(Json{{"K", r.k},
                           {"method", std::string(to_string(r.method))},
                           {"precision", std::string(to_string(r.precision))},
                           {"wall_seconds", fmt(r.wall_seconds)},
                           {"rotation_count", r.rotation_count}});
  Json fits = Json::array();
  for (const auto& s : slopes)
    fits.push_back(Json{{"method", std::string(to_string(s.method))},
                        {"precision", std::string(to_string(s.precision))},
                        {"slope", fmt(s.fit.slope)},
                        {"points", s.fit.points}});
  Json& j = o.json();
  j["command"] = "bench";
  j["model"] = "fibonacci";
  j["lambdas"] = Json::array({"1", "2", "3", "4"});
  j["records"] = std::move(records);
  j["slopes"] = std::move(fits);
}

void dispatch(const RunConfig& cfg, Output& o) {
  if (cfg.out != "json" && cfg.out != "csv") throw InputError("--out must be json or csv");
  if (cfg.command == "bench") return cmd_bench(cfg, o);
  const Precision p = parse_precision(cfg.precision);
  const ModelSource src = resolve_source(cfg);
  if (src.op && cfg.command != "spectrum" && cfg.command != "trace")
    throw InputError("an operator file only works with 'spectrum' and 'trace'");
  with_precision(p, [&](auto tag) {
    using R = decltype(tag);
    if (cfg.command == "spectrum") cmd_spectrum<R>(cfg, src, o);
    else if (cfg.command == "cover") cmd_cover<R>(cfg, src, o);
    else if (cfg.command == "dim") cmd_dim<R>(cfg, src, o);
    else if (cfg.command == "boxdim") cmd_boxdim<R>(cfg, src, o);
    else if (cfg.command == "gaps") cmd_gaps<R>(cfg, src, o);
    else if (cfg.command == "sum") cmd_sum<R>(cfg, src, o);
    else if (cfg.command == "trace") cmd_trace<R>(cfg, src, o);
  });
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--model", cfg.model, "fibonacci|period-doubling|thue-morse|rudin-shapiro|almost-mathieu|sturmian");
  sub->add_option("--file", cfg.file, "operator or substitution JSON file");
  sub->add_option("--lambda", cfg.lambda, "coupling constant");
  sub->add_option("--lambda-grid", cfg.lambda_grid, "MIN..MAX {lin|log} STEPS")->expected(3);
  sub->add_option("--k", cfg.k, "substitution level (periods for rational models)");
  sub->add_option("--k2", cfg.k2, "second level for 'dim' (k + 1)");
  sub->add_option("--precision", cfg.precision, "double|extended");
  sub->add_option("--eps-list", cfg.eps_list, "box sizes: 2^a..2^b or a comma list");
  sub->add_option("--out", cfg.out, "json|csv");
  sub->add_option("--output", cfg.output, "output path (default stdout)");
  sub->add_option("--threads", cfg.threads, "OpenMP threads");
  sub->add_option("--seed-symbol", cfg.seed_symbol, "seed letter of the substitution");
  sub->add_option("--max-word-length", cfg.max_word_length, "cap on substitution word length");
  sub->add_option("--alpha", cfg.alpha, "frequency p/q for almost-mathieu and sturmian");
  sub->add_option("--theta", cfg.theta, "phase for almost-mathieu and sturmian");
  sub->add_option("--values", cfg.values, "potential values a,b,c,d for rudin-shapiro")->delimiter(',');
  sub->add_option("--energy", cfg.energies, "energies for 'trace'")->delimiter(',');
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Spectra, covers and fractal statistics of periodic Jacobi operators"};
  app.require_subcommand(1);
  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "bands of one periodic operator"},
      {"cover", "substitution covers over a lambda grid"},
      {"dim", "two-level Hausdorff dimension estimate"},
      {"boxdim", "box counts of a cover"},
      {"gaps", "largest gap of a cover over a lambda grid"},
      {"sum", "Minkowski sum of a cover with itself"},
      {"trace", "monodromy trace test at given energies"},
      {"bench", "banded vs dense scaling benchmark"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->callback([&cfg, n = std::string(name)] { cfg.command = n; });
    if (std::string_view(name) == "bench") {
      sub->add_option("--precision", cfg.precision, "double|extended|both");
      sub->add_option("--kmin", cfg.kmin, "smallest K");
      sub->add_option("--kmax", cfg.kmax, "largest K");
      sub->add_option("--points-per-octave", cfg.points_per_octave, "grid points per doubling of K");
      sub->add_option("--reps", cfg.repetitions, "timed repetitions (median)");
      sub->add_option("--dense-max", cfg.dense_max, "largest K for the dense path (at most 4096)");
      sub->add_flag("--no-dense", cfg.no_dense, "skip the dense path");
      sub->add_option("--out", cfg.out, "json|csv");
      sub->add_option("--output", cfg.output, "output path (default stdout)");
      sub->add_option("--threads", cfg.threads, "OpenMP threads");
    } else {
      add_common(sub, cfg);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (cfg.threads < 0) throw InputError("--threads must be positive");
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    Output o(cfg);
    dispatch(cfg, o);
    const std::string text = o.str();
    if (cfg.output.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.output, std::ios::binary);
      if (!f) throw InputError("cannot write '" + cfg.output + "'");
      f << text;
      if (!f) throw InputError("failed writing '" + cfg.output + "'");
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::bad_alloc&) {
    err << "numerical failure: out of memory\n";
    return 2;
  }
  return 0;
}

}  // namespace quasispec
