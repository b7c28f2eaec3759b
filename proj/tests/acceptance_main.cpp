// Acceptance suite: the release gate. Each criterion runs at a pinned
// tolerance and prints one PASS/FAIL line; the exit status is nonzero if any
// fail.
//
// Usage: fibrank_acceptance [--cli /path/to/fibrank] [--workers N]
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <thread>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fibrank/census.hpp"
#include "fibrank/io.hpp"
#include "fibrank/primes.hpp"
#include "fibrank/runner.hpp"
#include "fibrank/trace.hpp"
#include "oracles.hpp"

using namespace fibrank;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void verdict(int number, bool pass, const std::string& name, const std::string& detail) {
  std::printf("[%s] C%d %s: %s\n", pass ? "PASS" : "FAIL", number, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

std::vector<uint32_t> fiber_vec(const FamilyModP& fp, uint32_t t) {
  uint32_t f[7];
  fp.fiber_coeffs(t, f);
  return std::vector<uint32_t>(f, f + fp.degree_x + 1);
}

// ---- criterion 1: trace oracle equivalence, p <= 47 --------------------

void criterion1() {
  auto started = std::chrono::steady_clock::now();
  bool ok = true;
  std::string first_bad;
  for (const char* name : {"legendre", "f1", "g2s"}) {
    HyperellipticFamily fam = parse_family(corpus_config_text(name));
    auto excluded = bad_primes(fam, 47);
    for (uint32_t p : sieve_primes(47)) {
      if (std::binary_search(excluded.begin(), excluded.end(), p)) continue;
      FamilyModP fp = reduce_mod_p(fam, p, excluded);
      for (uint32_t t = 0; t < p; ++t) {
        if (fp.is_singular_at(t)) continue;
        int64_t a = fiber_trace(fp, t, false).a;
        int64_t naive = oracles::naive_curve_count_fp(p, fiber_vec(fp, t));
        if (a != static_cast<int64_t>(p) + 1 - naive) {
          ok = false;
          if (first_bad.empty()) first_bad = fmt("%s p=%u t=%u", name, p, t);
        }
      }
    }
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  ok = ok && secs <= 10.0;
  verdict(1, ok, "trace oracle equivalence (p <= 47)",
          ok ? fmt("exact for all fibers of all corpus families, %.1f s", secs)
             : ("first mismatch: " + first_bad));
}

// ---- criterion 2: hand-computed anchors ---------------------------------

void criterion2() {
  bool ok = true;
  std::string detail;
  try {
    PrimeFieldCtx c5 = build_ctx(5);
    uint32_t f3[4] = {1, 1, 0, 1};
    int64_t a = 5 + 1 - curve_count_fp_poly(c5, f3, 3);
    ok = ok && a == -3;

    PrimeFieldCtx c3 = build_ctx(3);
    uint32_t f5[6] = {1, 1, 0, 0, 0, 1};
    int64_t t1 = 3 + 1 - curve_count_fp_poly(c3, f5, 5);
    int64_t t2 = 9 + 1 - curve_count_fp2_poly(c3, f5, 5);
    int64_t b = b_from_h1(t1, t2, 3);
    uint64_t order = oracles::mumford_jacobian_order(3, {1, 1, 0, 0, 0, 1});
    int64_t p1 = 1 - t1 + b - 3 * t1 + 9;
    ok = ok && t1 == 0 && t2 == -4 && b == 2 && p1 == 12 && order == 12;
    detail = fmt("a=%lld t1=%lld t2=%lld b=%lld P(1)=%lld #J=%llu", (long long)a, (long long)t1,
                 (long long)t2, (long long)b, (long long)p1, (unsigned long long)order);
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  verdict(2, ok, "hand-computed anchors", detail);
}

// ---- shared full runs ----------------------------------------------------

struct FullRun {
  RunResult result;
  double wall = 0;
};

FullRun full_run(const std::string& family, const fs::path& dir, unsigned workers, bool census) {
  RunConfig cfg;
  cfg.family_spec = family;
  cfg.x_max = 10000;
  cfg.workers = workers;
  cfg.out_dir = dir;
  cfg.census = census;
  cfg.b_max = 500;
  FullRun out;
  auto t0 = std::chrono::steady_clock::now();
  out.result = run(cfg);
  out.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// ---- criterion 3: Hasse-Weil sweep + runtime -----------------------------

void criterion3(const FullRun& leg, const FullRun& f1, const FullRun& g2s) {
  // Per-fiber |a| <= floor(2g sqrt p) and (genus 2) |b| <= 6p are enforced
  // inside the engine on every fiber; a completed run certifies them. On top
  // of that, re-check the per-prime averages from the records.
  bool ok = true;
  for (const FullRun* r : {&leg, &f1, &g2s}) {
    int g = r->result.family.genus;
    for (const auto& rec : r->result.series.records()) {
      double bound = 2.0 * g * std::sqrt(static_cast<double>(rec.p));
      if (std::abs(static_cast<double>(rec.a_sum) / rec.p) > bound) ok = false;
      if (g == 2 && rec.b_sum &&
          std::abs(static_cast<double>(*rec.b_sum) / rec.p) > 6.0 * rec.p)
        ok = false;
    }
  }
  bool b_cover = true;
  for (const auto& rec : g2s.result.series.records()) {
    if (rec.p <= 500 && !rec.b_sum) b_cover = false;
    if (rec.p > 500 && rec.b_sum) b_cover = false;
  }
  bool time_ok = leg.wall <= 600.0 && f1.wall <= 600.0;
  ok = ok && b_cover && time_ok;
  verdict(3, ok, "Hasse-Weil sweep to X = 10^4",
          fmt("in-engine fiber checks on; averages bounded; B-pass covers p <= 500; "
              "elliptic walls %.0f s / %.0f s (limit 600)",
              leg.wall, f1.wall));
}

// ---- criterion 4: counting identities ------------------------------------

void criterion4(const FullRun& leg, const FullRun& f1) {
  bool cross_ok = true;
  std::string bad;
  for (const char* name : {"legendre", "f1", "g2s"}) {
    HyperellipticFamily fam = parse_family(corpus_config_text(name));
    auto excluded = bad_primes(fam, 101);
    for (uint32_t p : sieve_primes(101)) {
      if (std::binary_search(excluded.begin(), excluded.end(), p)) continue;
      try {
        lefschetz_crosscheck(reduce_mod_p(fam, p, excluded));
      } catch (const std::exception& e) {
        cross_ok = false;
        if (bad.empty()) bad = fmt("%s p=%u: %s", name, p, e.what());
      }
    }
  }
  bool identity_ok = true;
  for (const FullRun* r : {&leg, &f1}) {
    for (const auto& rec : r->result.series.records())
      if (!rec.b_sum || *rec.b_sum != static_cast<int64_t>(rec.p) * (rec.p - rec.n_delta))
        identity_ok = false;
  }
  verdict(4, cross_ok && identity_ok, "fiberwise counting identities",
          cross_ok && identity_ok
              ? "triple-loop crosscheck exact for all corpus families p <= 101; "
                "B_p = p - n_delta at every good prime of both elliptic runs"
              : (bad.empty() ? "B identity failed" : bad));
}

// ---- criterion 5: elliptic B-term limit ----------------------------------

void criterion5(const FullRun& f1) {
  double X = 10000;
  double T = f1.result.series.T(X);
  double theta = f1.result.series.theta(X);
  bool ok = std::abs(T - theta) <= 0.01 && T >= 0.93 && T <= 1.00;
  verdict(5, ok, "elliptic B-term limit (f1)",
          fmt("T(X) = %.6f, theta(X) = %.6f, |T - theta| = %.6f (<= 0.01), T in [0.93, 1.00]", T,
              theta, std::abs(T - theta)));
}

// ---- criterion 6: rank-0 convergence -------------------------------------

void criterion6(const FullRun& leg) {
  double S = leg.result.series.S(10000);
  bool ok = std::abs(S) < 0.5 && leg.result.estimate && leg.result.estimate->rounded == 0 &&
            leg.wall <= 600.0;
  verdict(6, ok, "rank-0 convergence (legendre)",
          fmt("S(X) = %.6f (|.| < 0.5), rounded = %d, wall %.0f s", S,
              leg.result.estimate ? leg.result.estimate->rounded : -999, leg.wall));
}

// ---- criterion 7: rank >= 1 detection ------------------------------------

bool section_is_non_torsion() {
  // specialization oracle: P = (0, t0) on y^2 = x^3 + x + t0^2 stays away
  // from the identity through 12 multiples (Mazur bounds torsion order by 12)
  using oracles::QPoint;
  using oracles::Rational;
  for (int t0 : {1, 2, 3}) {
    Rational a = 1, b = Rational(t0) * t0;
    QPoint P;
    P.infinity = false;
    P.x = 0;
    P.y = t0;
    if (!oracles::q_on_curve(P, a, b)) return false;
    for (uint32_t n = 1; n <= 12; ++n)
      if (oracles::q_mul(n, P, a, b).infinity) return false;
  }
  return true;
}

void criterion7(const FullRun& leg, const FullRun& f1) {
  double S1 = f1.result.series.S(10000);
  double S0 = leg.result.series.S(10000);
  bool oracle = section_is_non_torsion();
  bool ok = oracle && f1.result.estimate && f1.result.estimate->rounded >= 1 &&
            (S1 - S0) >= 0.5;
  verdict(7, ok, "rank detection (f1 vs legendre)",
          fmt("section non-torsion: %s; rounded = %d (>= 1); S_f1 - S_leg = %.6f (>= 0.5)",
              oracle ? "yes" : "NO", f1.result.estimate ? f1.result.estimate->rounded : -999,
              S1 - S0));
}

// ---- criterion 8: singular-fiber census ----------------------------------

void criterion8(const FullRun& leg, const FullRun& f1) {
  bool ok = true;
  std::string bad;
  for (const FullRun* r : {&f1, &leg}) {
    size_t in_range = 0;
    for (const auto& rep : r->result.census_reports) {
      if (rep.p < 1000 || rep.p > 10000) {
        if (!rep.crosscheck_pass) ok = false;
        continue;
      }
      ++in_range;
      if (std::abs(rep.inferred_trace) > 0.1 || rep.rounded != 0 || !rep.crosscheck_pass) {
        ok = false;
        if (bad.empty())
          bad = fmt("%s p=%u inferred=%.4f rounded=%d pass=%d", r->result.family.name.c_str(),
                    rep.p, rep.inferred_trace, rep.rounded, rep.crosscheck_pass ? 1 : 0);
      }
    }
    if (in_range < 100) ok = false;
  }
  verdict(8, ok, "singular-fiber census on [10^3, 10^4]",
          ok ? "|inferred trace| <= 0.1, rounded stably 0, every crosscheck passed"
             : ("first violation: " + bad));
}

// ---- criterion 9: determinism and resumability (through the CLI) ---------

int run_cli(const std::string& cmdline) {
  int status = std::system(cmdline.c_str());
  if (status < 0) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

void criterion9(const std::string& cli, const fs::path& scratch, unsigned workers) {
  fs::path d1 = scratch / "det1", d2 = scratch / "det2", d3 = scratch / "resume";
  std::string base = "\"" + cli + "\" run --family legendre --xmax 2000 --checkpoint-every 50";
  bool ok = true;
  std::string detail;

  int rc1 = run_cli(base + " --workers 1 --out-dir " + d1.string() + " > /dev/null");
  int rc2 = run_cli(base + " --workers " + std::to_string(workers) + " --out-dir " + d2.string() +
                    " > /dev/null");
  bool det = rc1 == 0 && rc2 == 0 &&
             read_file(d1 / "summaries.csv") == read_file(d2 / "summaries.csv") &&
             read_file(d1 / "checkpoint.json") == read_file(d2 / "checkpoint.json");
  ok = ok && det;

  int rc3 = run_cli(base + " --workers " + std::to_string(workers) + " --out-dir " + d3.string() +
                    " --abort-after-checkpoints 3 > /dev/null 2>&1");
  bool abort_ok = rc3 == 75;
  int rc4 = run_cli("\"" + cli + "\" run --resume " + (d3 / "checkpoint.json").string() +
                    " --workers 1 > /dev/null");
  bool resumed_ok = rc4 == 0 &&
                    read_file(d1 / "summaries.csv") == read_file(d3 / "summaries.csv");

  // compare final sums at <= 1e-12 relative
  double worst = 0;
  if (resumed_ok) {
    nlohmann::json a = nlohmann::json::parse(read_file(d1 / "checkpoint.json"));
    nlohmann::json b = nlohmann::json::parse(read_file(d3 / "checkpoint.json"));
    for (const char* key : {"S", "T", "theta"}) {
      double va = a.at(key).get<double>(), vb = b.at(key).get<double>();
      double rel = std::abs(va - vb) / std::max({std::abs(va), std::abs(vb), 1e-300});
      worst = std::max(worst, rel);
    }
  }
  ok = ok && abort_ok && resumed_ok && worst <= 1e-12;
  detail = fmt("worker invariance: %s; abort rc=%d; resume byte-equal: %s; sum drift %.2e",
               det ? "byte-identical" : "MISMATCH", rc3, resumed_ok ? "yes" : "NO", worst);
  verdict(9, ok, "determinism and resumability (X = 2000)", detail);
}

// ---- criterion 10: estimator coherence -----------------------------------

void criterion10(const FullRun& leg, const FullRun& f1, const FullRun& g2s) {
  bool ok = true;
  std::string detail;
  for (const FullRun* r : {&leg, &f1, &g2s}) {
    double S = r->result.series.S(10000);
    double est = r->result.residues ? r->result.residues->A.extrapolated : 1e9;
    double diff = std::abs(est - S);
    detail += fmt("%s: |resA_est - S| = %.4f  ", r->result.family.name.c_str(), diff);
    if (diff > 0.25) ok = false;
  }
  if (!ok)
    detail += "| INVESTIGATION NOTE: the Dirichlet surrogate drifted from the Cesaro sum; "
              "inspect the per-prime averages before trusting either estimate";
  verdict(10, ok, "estimator coherence (two residue surrogates)", detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  unsigned workers = 4;
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string flag = argv[i];
    if (flag == "--cli") cli = argv[i + 1];
    if (flag == "--workers") workers = static_cast<unsigned>(std::stoul(argv[i + 1]));
  }
  unsigned hw = std::thread::hardware_concurrency();
  if (hw && workers > hw) workers = hw;
  if (workers < 1) workers = 1;

  fs::path scratch = fs::temp_directory_path() / ("fibrank-acceptance-" + std::to_string(getpid()));
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  std::printf("acceptance: workers = %u, scratch = %s\n", workers, scratch.string().c_str());

  criterion1();
  criterion2();

  std::printf("... full runs to X = 10^4 (legendre, f1 with census; g2s with B-pass)\n");
  std::fflush(stdout);
  FullRun leg = full_run("legendre", scratch / "leg", workers, true);
  FullRun f1 = full_run("f1", scratch / "f1", workers, true);
  FullRun g2s = full_run("g2s", scratch / "g2s", workers, false);

  criterion3(leg, f1, g2s);
  criterion4(leg, f1);
  criterion5(f1);
  criterion6(leg);
  criterion7(leg, f1);
  criterion8(leg, f1);
  if (!cli.empty()) {
    criterion9(cli, scratch, workers);
  } else {
    verdict(9, false, "determinism and resumability", "no --cli path supplied");
  }
  criterion10(leg, f1, g2s);

  fs::remove_all(scratch);
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
