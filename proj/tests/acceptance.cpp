// Acceptance run. `acceptance --criterion N` checks one criterion and prints a
// single PASS/FAIL line; without arguments every criterion runs in turn.
// Exit status is nonzero if any checked criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>

#include "oracles.hpp"
#include "quasispec/bench.hpp"
#include "quasispec/cover.hpp"
#include "quasispec/fractal.hpp"
#include "quasispec/monodromy.hpp"
#include "quasispec/substitution.hpp"

using namespace quasispec;
using oracle::Big;
using DD = DoubleDouble;

namespace {

struct Outcome {
  bool pass = true;
  std::string failures;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    failures += (pass ? "" : "; ") + what;
    pass = false;
  }
  std::string line() const { return pass ? note.str() : failures + " | " + note.str(); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double max_dev(const std::vector<double>& got, const std::vector<Big>& want) {
  if (got.size() != want.size()) return INFINITY;
  double worst = 0;
  for (std::size_t i = 0; i < got.size(); ++i)
    worst = std::max(worst, static_cast<double>(abs(Big(got[i]) - want[i])));
  return worst;
}

PeriodicJacobi<double> free_operator(std::size_t k) {
  return {std::vector<double>(k, 1.0), std::vector<double>(k, 0.0)};
}

// 1. Free operator against 2cos(2 pi j / K) and 2cos((2j+1) pi / K).
void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t k : {8u, 16u}) {
    const auto j = free_operator(k);
    for (int sign : {1, -1}) {
      const double d = max_dev(oracle::eigen_eigs(oracle::periodic_matrix(j, sign)), oracle::free_eigs(k, sign));
      o.require(d < 1e-13, "closed form vs dense solver at K=" + std::to_string(k));
    }
  }
  const std::size_t k = 512;
  const auto s = spectrum(free_operator(k));
  const double dp = max_dev(s.eigs_plus, oracle::free_eigs(k, 1));
  const double dm = max_dev(s.eigs_minus, oracle::free_eigs(k, -1));
  o.require(dp <= 1e-13 && dm <= 1e-13, "eigenvalues off by " + fmt("%.2e", std::max(dp, dm)));
  const auto hull = s.merged.hull();
  o.require(std::abs(hull.lo + 2) <= 1e-13 && std::abs(hull.hi - 2) <= 1e-13, "hull is not [-2, 2]");
  double widest = 0;
  for (const auto& g : gaps(s.merged)) widest = std::max(widest, g.hi - g.lo);
  o.require(widest <= 1e-12, "interior gap of width " + fmt("%.2e", widest));
  const double t = seconds_since(t0);
  o.require(t < 5, "runtime " + fmt("%.1f s", t));
  o.note << "K=512 max eigenvalue error " << fmt("%.2e", std::max(dp, dm)) << ", widest gap " << fmt("%.2e", widest)
         << ", " << fmt("%.2f s", t);
}

// 2. Banded pipeline against the dense solver on random operators.
void criterion2(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + static_cast<std::size_t>(rng() % 12);
    const auto j = oracle::random_jacobi(rng, k);
    const double norm = j.norm_bound();
    for (int sign : {1, -1}) {
      const auto banded = boundary_eigenvalues(j, sign);
      const auto dense = dense_eig(assemble_jpm(j, sign));
      for (std::size_t i = 0; i < k; ++i) worst = std::max(worst, std::abs(banded[i] - dense[i]) / norm);
    }
  }
  o.require(worst <= 1e-12, "relative deviation " + fmt("%.2e", worst));
  const double t = seconds_since(t0);
  o.require(t < 30, "runtime " + fmt("%.1f s", t));
  o.note << "200 operators, max |banded - dense| / ||J|| = " << fmt("%.2e", worst) << ", " << fmt("%.2f s", t);
}

// tr M_K(e) and its derivative in e, by differentiating M_n = T_n M_{n-1}
// alongside the product (Schroedinger case, a = 1).
std::pair<DD, DD> trace_and_slope(const std::vector<DD>& v, const DD& e) {
  DD m00(1), m01(0), m10(0), m11(1), d00(0), d01(0), d10(0), d11(0);
  for (const DD& x : v) {
    const DD c = e - x;
    const DD n00 = c * d00 - d10 + m00, n01 = c * d01 - d11 + m01;
    d10 = d00;
    d11 = d01;
    d00 = n00;
    d01 = n01;
    const DD p00 = c * m00 - m10, p01 = c * m01 - m11;
    m10 = m00;
    m11 = m01;
    m00 = p00;
    m01 = p01;
  }
  return {m00 + m11, d00 + d11};
}

// 3. Fibonacci approximants: interleaving and the discriminant at edges and midpoints.
void criterion3(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rule = SubstitutionRule::fibonacci();
  std::size_t repairs = 0, edges = 0, misclassified = 0;
  double worst_edge = 0;  // max over edges of (|tr| - 2) / tolerance
  for (double lambda : {1.0, 2.0, 3.0, 4.0}) {
    for (unsigned k = 1; k <= 16; ++k) {
      const auto j = word_to_operator(rule, iterate(rule, 0, k), DD(lambda));
      const auto s = spectrum(j);
      repairs += s.repaired;
      const DD tol = default_slack(j);
      // A computed edge is off by about K u ||J||; the trace there moves by the slope times that.
      const DD shift = DD(1e3 * static_cast<double>(j.period()) * unit_roundoff_of<DD>()) * j.norm_bound();
      for (const auto& b : s.bands) {
        for (const DD& e : {b.lo, b.hi}) {
          const auto [t, slope] = trace_and_slope(j.b, e);
          worst_edge = std::max(worst_edge, to_double((abs(t) - DD(2)) / (tol + shift * abs(slope))));
          ++edges;
        }
        misclassified += trace_test(j, ldexp(b.lo + b.hi, -1), tol) != TraceClass::Inside;
      }
      for (const auto& g : gaps(s.merged))
        misclassified += trace_test(j, ldexp(g.lo + g.hi, -1), tol) != TraceClass::Outside;
    }
  }
  o.require(repairs == 0, std::to_string(repairs) + " repaired bands");
  o.require(worst_edge <= 1.0, "edge trace exceeds 2 by " + fmt("%.2g", worst_edge) + " tolerances");
  o.require(misclassified == 0, std::to_string(misclassified) + " midpoints misclassified");
  const double t = seconds_since(t0);
  o.require(t < 120, "runtime " + fmt("%.1f s", t));
  o.note << edges << " edges, max (|tr|-2)/tol = " << fmt("%.3g", worst_edge) << ", " << fmt("%.1f s", t);
}

// 4. Covers nest from level k to k+1.
void criterion4(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t checks = 0;
  for (ModelKind m : {ModelKind::PeriodDoubling, ModelKind::ThueMorse, ModelKind::Fibonacci}) {
    for (double lambda : {1.0, 2.0, 4.0}) {
      CoverBuilder<DD> builder(Model::builtin(m), DD(lambda));
      CoverFamily<DD> prev = builder.build(1);
      for (unsigned k = 1; k <= 9; ++k) {
        CoverFamily<DD> next = builder.build(k + 1);
        const bool ok = contains(prev.cover, next.cover, next.containment_tol());
        o.require(ok, std::string(to_string(m)) + " lambda=" + fmt("%g", lambda) + " k=" + std::to_string(k));
        ++checks;
        prev = std::move(next);
      }
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 300, "runtime " + fmt("%.1f s", t));
  o.note << checks << " nestings, " << fmt("%.1f s", t);
}

// Transfer-matrix trace over a word, written out here so that the recursions
// are checked against something other than the library's own products.
DD word_trace(const std::vector<double>& v, const DD& e) {
  DD p00(1), p01(0), p10(0), p11(1);  // rows of T_n ... T_1
  for (double x : v) {
    const DD c = e - DD(x);
    const DD n00 = c * p00 - p10, n01 = c * p01 - p11;
    p10 = p00;
    p11 = p01;
    p00 = n00;
    p01 = n01;
  }
  return p00 + p11;
}

double rel_dev(const DD& got, const DD& want, const DD& scale) {
  return to_double(abs(got - want) / max_of(DD(1), scale));
}

// 5. Trace-map recursions for period doubling and Thue-Morse.
void criterion5(Outcome& o) {
  double worst_lib = 0, worst_own = 0;
  std::size_t skipped = 0;
  for (double lambda : {1.0, 2.0, 4.0}) {
    std::vector<DD> energies;
    const double lo = -2.0, hi = 2.0 + lambda;  // hull of every approximant spectrum
    for (int i = 0; i < 100; ++i) energies.push_back(DD(lo + (hi - lo) * (i + 0.5) / 100));
    for (ModelKind m : {ModelKind::PeriodDoubling, ModelKind::ThueMorse}) {
      const auto rule = m == ModelKind::PeriodDoubling ? SubstitutionRule::period_doubling() : SubstitutionRule::thue_morse();
      // Potentials of S^k(a) and S^k(b) for k = 0..9.
      std::vector<std::vector<double>> va, vb;
      for (unsigned k = 0; k <= 9; ++k) {
        for (Letter seed : {0, 1}) {
          std::vector<double> v;
          for (Letter l : iterate(rule, seed, k)) v.push_back(l == 0 ? lambda : 0.0);
          (seed == 0 ? va : vb).push_back(std::move(v));
        }
      }
      for (unsigned k = m == ModelKind::ThueMorse ? 2 : 1; k <= 8; ++k) {
        const auto chk = check_trace_map(m, DD(lambda), k, std::span<const DD>(energies));
        worst_lib = std::max({worst_lib, to_double(chk.trace_residual), to_double(chk.matrix_residual)});
        skipped += chk.skipped;
        for (const DD& e : energies) {
          const DD x = word_trace(va[k], e), y = word_trace(vb[k], e), x1 = word_trace(va[k + 1], e);
          if (m == ModelKind::PeriodDoubling) {
            const DD y1 = word_trace(vb[k + 1], e);
            worst_own = std::max(worst_own, rel_dev(x1, x * y - DD(2), abs(x * y) + DD(2)));
            worst_own = std::max(worst_own, rel_dev(y1, x * x - DD(2), x * x + DD(2)));
          } else {
            const DD x0 = word_trace(va[k - 1], e);
            worst_own = std::max(worst_own, rel_dev(x1, x0 * x0 * (x - DD(2)) + DD(2), x0 * x0 * (abs(x) + DD(2)) + DD(2)));
          }
        }
      }
    }
  }
  o.require(worst_lib <= 1e-8, "library residual " + fmt("%.2e", worst_lib));
  o.require(worst_own <= 1e-8, "independent residual " + fmt("%.2e", worst_own));
  o.require(skipped == 0, std::to_string(skipped) + " energies overflowed");
  o.note << "max residual " << fmt("%.2e", worst_lib) << " (matrix and trace), " << fmt("%.2e", worst_own)
         << " (independent traces)";
}

// 6. Fibonacci dimension estimates between the known bounds.
void criterion6(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const double num = std::log(1 + std::sqrt(2.0));
  for (double lambda : {8.0, 12.0, 16.0}) {
    CoverBuilder<DD> builder(Model::builtin(ModelKind::Fibonacci), DD(lambda));
    const auto c15 = builder.build(15), c16 = builder.build(16);
    const auto est = hausdorff_estimate(c15, c16);
    const double su = 2 * lambda + 22;
    const double sl = 0.5 * (lambda - 4 + std::sqrt((lambda - 4) * (lambda - 4) - 12));
    const double lo = num / std::log(su), hi = num / std::log(sl), a = to_double(est.alpha);
    o.require(est.status == DimStatus::Converged, "lambda=" + fmt("%g", lambda) + " not converged");
    o.require(lo <= a && a <= hi, "lambda=" + fmt("%g", lambda) + " alpha " + fmt("%.4f", a));
    o.note << "lambda=" << lambda << ": " << fmt("%.4f", lo) << " <= " << fmt("%.4f", a) << " <= " << fmt("%.4f", hi)
           << "; ";
  }
  const double t = seconds_since(t0);
  o.require(t < 600, "runtime " + fmt("%.1f s", t));
  o.note << fmt("%.1f s", t);
}

// 7. Middle-thirds Cantor set.
void criterion7(Outcome& o) {
  const double want = std::log(2.0) / std::log(3.0);
  double worst = 0;
  for (int d = 1; d <= 9; ++d) {
    const std::vector<double> wk(std::size_t{1} << d, std::pow(3.0, -d)), wk1(std::size_t{1} << (d + 1), std::pow(3.0, -d - 1));
    const auto est = hausdorff_estimate<double>(wk, wk1);
    worst = std::max(worst, std::abs(est.alpha - want));
  }
  o.require(worst <= 1e-6, "alpha off by " + fmt("%.2e", worst));
  const auto set = IntervalSet<double>::from_intervals(oracle::cantor_intervals<double>(6));
  for (int d = 0; d <= 6; ++d) {
    const double eps = std::pow(3.0, -d);
    const auto got = box_count(set, eps).count;
    const auto brute = oracle::brute_box_count(set, eps);
    o.require(got == (std::uint64_t{1} << d) && brute == got, "box count at d=" + std::to_string(d));
  }
  o.note << "max |alpha - log2/log3| = " << fmt("%.2e", worst) << ", N(3^-d) = 2^d for d = 0..6";
}

// 8. Thue-Morse gap regimes. Half-octave grids: 2^-9..2^-4 for levels 8..12
// (the slope-2 thresholds), 2^-2..1 for level 12 only. One builder per lambda
// shares spectra between consecutive levels.
void criterion8(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> lambdas;
  for (int i = 0; i <= 10; ++i) lambdas.push_back(std::exp2(-9 + 0.5 * i));
  const std::size_t n_low = lambdas.size();
  for (int i = 0; i <= 4; ++i) lambdas.push_back(std::exp2(-2 + 0.5 * i));
  std::map<unsigned, std::vector<double>> curves;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    CoverBuilder<DD> builder(Model::builtin(ModelKind::ThueMorse), DD(lambdas[i]));
    for (unsigned k = i < n_low ? 8 : 12; k <= 12; ++k) curves[k].push_back(to_double(largest_gap(builder.build(k))));
  }
  const auto& g12 = curves[12];
  const double small = fit_loglog(lambdas, g12, 0x1p-7, 0x1p-4).slope;
  const double large = fit_loglog(lambdas, g12, 0x1p-2, 1.0).slope;
  const double ll = std::log(4.0) / std::log(3.0);
  o.require(std::abs(small - 2) <= 0.2, "slope on [2^-7, 2^-4] is " + fmt("%.3f", small));
  o.require(std::abs(large - ll) <= 0.2, "slope on [2^-2, 1] is " + fmt("%.3f", large));
  // Threshold: top of the run of half-octave steps, from the bottom of the
  // grid up, whose local slopes all lie within 0.2 of 2.
  std::vector<double> thresholds;
  for (unsigned k = 8; k <= 12; ++k) {
    const auto& g = curves[k];
    double top = 0;
    for (std::size_t i = 0; i + 1 < n_low; ++i) {
      const double s = std::log(g[i + 1] / g[i]) / std::log(lambdas[i + 1] / lambdas[i]);
      if (std::abs(s - 2) > 0.2) break;
      top = lambdas[i + 1];
    }
    thresholds.push_back(top);
  }
  bool decreasing = thresholds.back() > 0 && thresholds.back() < thresholds.front();
  for (std::size_t i = 1; i < thresholds.size(); ++i) decreasing = decreasing && thresholds[i] <= thresholds[i - 1];
  o.require(decreasing, "threshold does not decrease with k");
  const double t = seconds_since(t0);
  o.require(t < 900, "runtime " + fmt("%.1f s", t));
  o.note << "k=12 slopes " << fmt("%.3f", small) << " on [2^-7, 2^-4], " << fmt("%.3f", large) << " on [2^-2, 1]";
  if (thresholds.back() > 0)
    o.note << ", " << fmt("%.3f", fit_loglog(lambdas, g12, 0x1p-9, thresholds.back()).slope) << " on [2^-9, 2^"
           << fmt("%.1f", std::log2(thresholds.back())) << "]";
  o.note << "; slope-2 thresholds k=8..12:";
  for (double th : thresholds) o.note << " " << (th > 0 ? "2^" + fmt("%.1f", std::log2(th)) : std::string("none"));
  o.note << "; " << fmt("%.1f s", t);
}

// 9. Period doubling lambda = 4: double hits its floor, extended does not.
void criterion9(Outcome& o) {
  const Model pd = Model::builtin(ModelKind::PeriodDoubling);
  const auto d10 = min_band_width(build_cover<double>(pd, 4.0, 10));
  const double floor_d = repair_width<double>();
  o.require(d10.repaired, "double reports no repaired band at k=10");
  o.require(d10.width >= floor_d && d10.width <= 2 * floor_d, "double width " + fmt("%.3e", d10.width) + " not at the floor");
  const auto e1 = min_band_width(build_cover<DD>(pd, DD(4.0), 10));
  const auto e2 = min_band_width(build_cover<DD>(pd, DD(4.0), 10, Execution::Serial));
  o.require(e1.width > DD(0), "extended width not positive");
  o.require(e1.width.hi == e2.width.hi && e1.width.lo == e2.width.lo, "extended width changes on rerun");
  o.require(to_double(e1.width) < floor_d, "extended width not below the double floor");
  // Agreement up to the double containment tolerance, i.e. double rounding of the edges.
  double worst = 0;
  for (unsigned k = 1; k <= 5; ++k) {
    const auto cd = build_cover<double>(pd, 4.0, k);
    const auto md = min_band_width(cd);
    const double we = to_double(min_band_width(build_cover<DD>(pd, DD(4.0), k)).width);
    o.require(!md.repaired, "double repaired at k=" + std::to_string(k));
    worst = std::max(worst, std::abs(md.width - we) / cd.containment_tol());
  }
  o.require(worst <= 1.0, "k<=5 disagreement " + fmt("%.2g", worst) + " tolerances");
  o.note << "k=10 double " << fmt("%.3e", d10.width) << " (repaired), extended " << fmt("%.3e", to_double(e1.width))
         << (e1.repaired ? " (extended floor)" : "") << "; k<=5 max difference / tol " << fmt("%.2e", worst);
}

// 10. Scaling of the banded and dense eigenvalue paths.
void criterion10(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  BenchConfig cfg;
  cfg.ks = bench_grid(512, 8192, 2);
  cfg.dense_max = 4096;
  const auto records = run_bench(cfg);
  for (const auto& s : bench_slopes(records)) {
    if (s.method == BenchMethod::Banded) {
      o.require(s.fit.slope >= 1.7 && s.fit.slope <= 2.3, "banded slope " + fmt("%.3f", s.fit.slope));
      o.note << "banded slope " << fmt("%.3f", s.fit.slope) << ", ";
    } else {
      o.require(s.fit.slope >= 2.6, "dense slope " + fmt("%.3f", s.fit.slope));
      o.note << "dense slope " << fmt("%.3f", s.fit.slope) << ", ";
    }
  }
  std::map<std::size_t, std::uint64_t> rot;
  for (const auto& r : records)
    if (r.method == BenchMethod::Banded) rot[r.k] = r.rotation_count;
  double lo = INFINITY, hi = 0;
  for (const auto& [k, n] : rot) {
    const auto it = rot.find(2 * k);
    if (it == rot.end()) continue;
    const double ratio = static_cast<double>(it->second) / static_cast<double>(n);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  o.require(lo >= 3.4 && hi <= 4.6, "rotation ratios in [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "]");
  o.note << "rotation ratio per doubling " << fmt("%.3f", lo) << ".." << fmt("%.3f", hi) << ", " << fmt("%.0f s", seconds_since(t0));
}

}  // namespace

int main(int argc, char** argv) {
  const std::function<void(Outcome&)> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                    criterion6, criterion7, criterion8, criterion9, criterion10};
  std::vector<int> which;
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    const int n = std::atoi(argv[2]);
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "criterion must be 1..10\n");
      return 2;
    }
    which.push_back(n);
  } else if (argc == 1) {
    for (int n = 1; n <= 10; ++n) which.push_back(n);
  } else {
    std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
    return 2;
  }
  bool all = true;
  for (int n : which) {
    Outcome o;
    try {
      criteria[n - 1](o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", n, o.line().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
