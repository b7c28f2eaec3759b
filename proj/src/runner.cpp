#include "fibrank/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fibrank/primes.hpp"
#include "fibrank/trace.hpp"

namespace fibrank {

using nlohmann::json;

namespace {

struct CorpusEntry {
  const char* name;
  const char* description;
  const char* ini;
};

// Built-in families. legendre is the classical rank-0 reference surface, f1
// carries the visible section (x, y) = (0, t), g2s is the genus-2 workload.
const CorpusEntry kCorpus[] = {
    {"legendre", "y^2 = x(x-1)(x-t), genus 1, Mordell-Weil rank 0",
     "name = legendre\n"
     "degree_x = 3\n"
     "coeff.0 = 0\n"
     "coeff.1 = 0, 1\n"
     "coeff.2 = -1, -1\n"
     "coeff.3 = 1\n"},
    {"f1", "y^2 = x^3 + x + t^2, genus 1, section (0, t)",
     "name = f1\n"
     "degree_x = 3\n"
     "coeff.0 = 0, 0, 1\n"
     "coeff.1 = 1\n"
     "coeff.2 = 0\n"
     "coeff.3 = 1\n"},
    {"g2s", "y^2 = x^5 + t x + 1, genus 2 (Jacobian fibration)",
     "name = g2s\n"
     "degree_x = 5\n"
     "coeff.0 = 1\n"
     "coeff.1 = 0, 1\n"
     "coeff.2 = 0\n"
     "coeff.3 = 0\n"
     "coeff.4 = 0\n"
     "coeff.5 = 1\n"},
};

const char* mode_name(EstimateMode m) {
  return m == EstimateMode::elliptic ? "elliptic" : "combined";
}

EstimateMode mode_from_name(const std::string& s) {
  if (s == "elliptic") return EstimateMode::elliptic;
  if (s == "combined") return EstimateMode::combined;
  raise(Errc::malformed_config, "unknown mode: " + s);
}

struct HistoryEntry {
  uint64_t X = 0;
  double S = 0, T = 0, theta = 0;
};

struct Session {
  RunConfig cfg;
  std::map<std::string, std::string> family_kv;
  HyperellipticFamily fam;
  EstimateMode mode = EstimateMode::elliptic;
  std::string fingerprint;
  std::vector<uint32_t> excluded;
  std::vector<uint32_t> good;
  bool census_enabled = false;
  std::filesystem::path summaries_path, census_path, checkpoint_path, manifest_path;
};

Session open_session(const RunConfig& cfg) {
  Session s;
  s.cfg = cfg;
  if (cfg.x_max < 11) raise(Errc::malformed_config, "x_max must be at least 11");
  if (cfg.x_max > 100000000ull)
    raise(Errc::malformed_config, "x_max above 10^8 is beyond the intended scale");
  if (cfg.b_max > cfg.x_max) s.cfg.b_max = static_cast<uint32_t>(cfg.x_max);
  if (s.cfg.b_max > (1u << 20)) raise(Errc::malformed_config, "b_max above 2^20 is not supported");
  if (cfg.checkpoint_every < 1) raise(Errc::malformed_config, "checkpoint_every must be >= 1");

  s.family_kv = load_family_config(cfg.family_spec);
  s.fam = family_from_config(s.family_kv);
  s.fingerprint = config_fingerprint(s.family_kv);

  s.mode = cfg.mode.value_or(s.fam.genus == 1 ? EstimateMode::elliptic : EstimateMode::combined);
  if (s.mode == EstimateMode::elliptic && s.fam.genus != 1)
    raise(Errc::malformed_config, "elliptic mode requires a genus-1 family");

  s.excluded = bad_primes(s.fam, cfg.x_max);
  for (uint32_t p : sieve_primes(cfg.x_max))
    if (!std::binary_search(s.excluded.begin(), s.excluded.end(), p)) s.good.push_back(p);

  s.census_enabled = cfg.census && s.fam.genus == 1;
  s.summaries_path = cfg.out_dir / "summaries.csv";
  s.census_path = cfg.out_dir / "census.csv";
  s.checkpoint_path = cfg.out_dir / "checkpoint.json";
  s.manifest_path = cfg.out_dir / "manifest.json";
  return s;
}

unsigned effective_workers(unsigned requested) {
  if (requested >= 1) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? hw : 1;
}

struct PrimeWork {
  PrimeSummary summary;
  CensusReport census;
  bool has_census = false;
  double census_ms = 0.0;
};

// Largest-first dispatch inside the window balances the p^2-dominated load;
// merging stays ascending regardless.
std::vector<PrimeWork> process_window(const Session& s, const uint32_t* primes, size_t count,
                                      unsigned workers) {
  std::vector<PrimeWork> out(count);
  std::atomic<size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;

  auto body = [&]() {
    try {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= count) break;
        size_t idx = count - 1 - i;
        uint32_t p = primes[idx];
        FamilyModP fp = reduce_mod_p(s.fam, p, s.excluded);
        TraceOptions opt;
        opt.compute_b = s.fam.genus == 1 || p <= s.cfg.b_max;
        out[idx].summary = fibral_averages(fp, opt);
        if (s.census_enabled) {
          auto census_start = std::chrono::steady_clock::now();
          out[idx].census =
              p <= s.cfg.crosscheck_cutoff ? lefschetz_crosscheck(fp) : census_at_prime(fp);
          out[idx].has_census = true;
          out[idx].census_ms = std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - census_start)
                                   .count();
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mu);
      if (!err) err = std::current_exception();
    }
  };

  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    unsigned n = std::min<size_t>(workers, count ? count : 1);
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);
  return out;
}

json grid_to_json(const ResidueGrid& g) {
  json arr = json::array();
  for (size_t i = 0; i < g.s.size(); ++i)
    arr.push_back({{"s", g.s[i]}, {"raw", g.raw[i]}, {"normalized", g.normalized[i]}});
  return arr;
}

void write_checkpoint(const Session& s, const EstimateSeries& series, uint64_t X,
                      size_t rows_committed, const std::vector<HistoryEntry>& history) {
  double Xd = static_cast<double>(X);
  json j;
  j["version"] = kArtifactVersion;
  j["family"] = s.fam.name;
  j["X"] = X;
  j["S"] = series.S(Xd);
  j["T"] = series.T(Xd);
  j["theta"] = series.theta(Xd);

  j["resA_grid"] = nullptr;
  j["resB_grid"] = nullptr;
  j["resA_est"] = nullptr;
  j["resB_est"] = nullptr;
  if (series.n_primes() >= 100) {
    ResidueEstimate res = dirichlet_residue(series.records());
    j["resA_grid"] = grid_to_json(res.A);
    j["resB_grid"] = grid_to_json(res.B);
    j["resA_est"] = res.A.extrapolated;
    j["resB_est"] = res.B.extrapolated;
  }

  j["raw"] = nullptr;
  j["rounded"] = nullptr;
  j["gap"] = nullptr;
  if (s.fam.trace_trivial_asserted) {
    RankEstimate est = rank_estimate(series, s.fam, s.mode, Xd);
    j["raw"] = est.raw;
    j["rounded"] = est.rounded;
    j["gap"] = est.gap;
  }
  j["mode"] = mode_name(s.mode);
  j["hypotheses"] = {{"trace_trivial_asserted", s.fam.trace_trivial_asserted},
                     {"ns_ak_rank_asserted", s.fam.ns_ak_rank_asserted}};
  j["b_pass"] = {{"complete", series.b_complete()}, {"b_max", s.cfg.b_max}};

  json hist = json::array();
  for (const auto& h : history)
    hist.push_back({{"X", h.X}, {"S", h.S}, {"T", h.T}, {"theta", h.theta}});
  j["history"] = hist;

  j["resume"] = {{"fingerprint", s.fingerprint},
                 {"last_p", series.last_p()},
                 {"rows_committed", rows_committed},
                 {"summaries_csv", s.summaries_path.filename().string()},
                 {"census_csv", s.census_enabled ? json(s.census_path.filename().string())
                                                 : json(nullptr)},
                 {"config",
                  {{"x_max", s.cfg.x_max},
                   {"mode", mode_name(s.mode)},
                   {"b_max", s.cfg.b_max},
                   {"checkpoint_every", s.cfg.checkpoint_every},
                   {"census", s.cfg.census},
                   {"crosscheck_cutoff", s.cfg.crosscheck_cutoff}}},
                 {"family_config", s.family_kv}};
  atomic_write_file(s.checkpoint_path, j.dump(2) + "\n");
}

void write_manifest(const Session& s, double wall_seconds, uint64_t fibers_total,
                    uint64_t fibers_computed, double trace_cpu_ms, double census_cpu_ms,
                    bool resumed, const std::string& started_at, unsigned workers) {
  json j;
  j["artifact_version"] = kArtifactVersion;
  j["family"] = s.fam.name;
  j["fingerprint"] = s.fingerprint;
  j["config"] = {{"family_spec", s.cfg.family_spec},
                 {"x_max", s.cfg.x_max},
                 {"mode", mode_name(s.mode)},
                 {"b_max", s.cfg.b_max},
                 {"checkpoint_every", s.cfg.checkpoint_every},
                 {"census", s.cfg.census},
                 {"crosscheck_cutoff", s.cfg.crosscheck_cutoff},
                 {"workers", workers}};
  j["started_at"] = started_at;
  j["finished_at"] = iso8601_now();
  j["wall_seconds"] = wall_seconds;
  j["stages"] = {{"trace_cpu_ms", trace_cpu_ms}, {"census_cpu_ms", census_cpu_ms}};
  j["fibers_total"] = fibers_total;
  j["fibers_computed"] = fibers_computed;
  j["fibers_per_second"] = wall_seconds > 0 ? fibers_computed / wall_seconds : 0.0;
  j["resumed"] = resumed;
  atomic_write_file(s.manifest_path, j.dump(2) + "\n");
}

std::string render_report(const Session& s, const EstimateSeries& series, uint64_t X,
                          const std::vector<CensusReport>& census_reports) {
  std::ostringstream out;
  double Xd = static_cast<double>(X);
  out << "family: " << s.fam.name << " (genus " << s.fam.genus << ", x-degree " << s.fam.degree_x
      << ")\n";
  out << "mode: " << mode_name(s.mode) << "\n";
  out << "X = " << X << ", good primes = " << series.n_primes() << ", excluded:";
  for (uint32_t p : s.excluded) out << " " << p;
  out << "\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "S(X) = %.6f  T(X) = %.6f  theta(X) = %.6f\n", series.S(Xd),
                series.T(Xd), series.theta(Xd));
  out << buf;
  if (series.n_primes() >= 100) {
    ResidueEstimate res = dirichlet_residue(series.records());
    out << "Dirichlet grid A (s: raw / normalized):";
    for (size_t i = 0; i < res.A.s.size(); ++i) {
      std::snprintf(buf, sizeof buf, "  %.2f: %.4f / %.4f", res.A.s[i], res.A.raw[i],
                    res.A.normalized[i]);
      out << buf;
    }
    out << "\n";
    out << "Dirichlet grid B (s: raw / normalized):";
    for (size_t i = 0; i < res.B.s.size(); ++i) {
      std::snprintf(buf, sizeof buf, "  %.2f: %.4f / %.4f", res.B.s[i], res.B.raw[i],
                    res.B.normalized[i]);
      out << buf;
    }
    out << "\n";
    std::snprintf(buf, sizeof buf, "resA_est = %.6f  resB_est = %.6f\n", res.A.extrapolated,
                  res.B.extrapolated);
    out << buf;
    std::snprintf(buf, sizeof buf, "estimator coherence |resA_est - S(X)| = %.6f\n",
                  std::abs(res.A.extrapolated - series.S(Xd)));
    out << buf;
  } else {
    out << "Dirichlet grids: skipped (need at least 100 primes)\n";
  }
  if (s.fam.trace_trivial_asserted) {
    RankEstimate est = rank_estimate(series, s.fam, s.mode, Xd);
    std::snprintf(buf, sizeof buf, "estimated rank %d (raw %.6f, gap %.6f)\n", est.rounded,
                  est.raw, est.gap);
    out << buf;
  } else {
    out << "rank estimate withheld: trivial-trace hypothesis not asserted for this family\n";
  }
  out << "hypotheses: trace_trivial = " << (s.fam.trace_trivial_asserted ? "true" : "false")
      << ", ns_ak_rank = " << s.fam.ns_ak_rank_asserted;
  if (s.mode == EstimateMode::elliptic) out << " (unused in elliptic mode)";
  out << "\n";
  if (!series.b_complete())
    out << "B pass: partial, cutoff b_max = " << s.cfg.b_max
        << " (T(X) sums only the computed primes)\n";
  if (s.cfg.census && s.fam.genus != 1) out << "census: skipped (genus-1 families only)\n";
  if (!census_reports.empty()) {
    bool all_pass = true;
    for (const auto& r : census_reports) all_pass = all_pass && r.crosscheck_pass;
    size_t half = census_reports.size() / 2;
    bool stable = census_reports.size() >= 4;
    int value = census_reports.empty() ? 0 : census_reports[half].rounded;
    for (size_t i = half; i < census_reports.size(); ++i)
      if (census_reports[i].rounded != value) stable = false;
    out << "census: " << census_reports.size() << " primes, crosschecks "
        << (all_pass ? "all pass" : "FAILED") << ", inferred trace ";
    if (census_reports.size() < 4)
      out << "verdict: insufficient range";
    else if (stable)
      out << "stable at " << value << " on the upper half";
    else
      out << "UNSTABLE on the upper half";
    out << "\n";
  }
  out << "note: finite-X values carry no proven convergence rate; tolerances are empirical\n";
  return out.str();
}

struct ResumeState {
  uint64_t last_p = 0;
  size_t rows_committed = 0;
  std::vector<HistoryEntry> history;
};

// Rows with p <= last_p, tolerating a torn tail line (the file is rewritten
// from the kept rows before the run continues).
std::vector<PrimeRecord> read_rows_lenient(const std::filesystem::path& path, uint64_t last_p) {
  std::vector<PrimeRecord> kept;
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    return kept;
  }
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (line != kSummaryCsvHeader) break;
      continue;
    }
    auto comma1 = line.find(',');
    if (comma1 == std::string::npos) break;
    try {
      auto fields_end = line;
      std::vector<std::string> fields;
      size_t pos = 0;
      while (pos <= fields_end.size()) {
        size_t c = fields_end.find(',', pos);
        fields.push_back(fields_end.substr(pos, c == std::string::npos ? c : c - pos));
        if (c == std::string::npos) break;
        pos = c + 1;
      }
      if (fields.size() != 5) break;
      PrimeRecord r;
      r.p = static_cast<uint32_t>(std::stoull(fields[0]));
      r.n_delta = static_cast<uint32_t>(std::stoull(fields[1]));
      r.a_sum = std::stoll(fields[2]);
      if (!fields[3].empty()) r.b_sum = std::stoll(fields[3]);
      if (r.p > last_p) break;
      kept.push_back(r);
    } catch (const std::exception&) {
      break;
    }
  }
  return kept;
}

std::vector<CensusReport> read_census_lenient(const std::filesystem::path& path, uint64_t last_p) {
  std::vector<CensusReport> kept;
  std::vector<CensusReport> all;
  try {
    all = read_census_csv(path);
  } catch (const Error&) {
    return kept;
  }
  for (const auto& r : all)
    if (r.p <= last_p) kept.push_back(r);
  return kept;
}

RunResult run_session(Session s, bool resumed, ResumeState rs) {
  auto wall_start = std::chrono::steady_clock::now();
  std::string started_at = iso8601_now();
  unsigned workers = effective_workers(s.cfg.workers);

  std::filesystem::create_directories(s.cfg.out_dir);

  EstimateSeries series;
  std::vector<CensusReport> census_reports;
  std::vector<HistoryEntry> history = std::move(rs.history);
  size_t rows_committed = 0;
  double trace_cpu_ms = 0.0;
  double census_cpu_ms = 0.0;
  uint64_t fibers_computed = 0;

  if (resumed) {
    std::vector<PrimeRecord> kept = read_rows_lenient(s.summaries_path, rs.last_p);
    std::string body(kSummaryCsvHeader);
    body += "\n";
    for (const auto& r : kept) body += summary_csv_row(r) + "\n";
    atomic_write_file(s.summaries_path, body);
    for (const auto& r : kept) series.update(r);
    rows_committed = kept.size();
    if (s.census_enabled) {
      census_reports = read_census_lenient(s.census_path, rs.last_p);
      std::string cbody(kCensusCsvHeader);
      cbody += "\n";
      for (const auto& r : census_reports) cbody += census_csv_row(r) + "\n";
      atomic_write_file(s.census_path, cbody);
    }
  } else {
    atomic_write_file(s.summaries_path, std::string(kSummaryCsvHeader) + "\n");
    if (s.census_enabled)
      atomic_write_file(s.census_path, std::string(kCensusCsvHeader) + "\n");
  }

  // First window index not yet merged.
  size_t start = 0;
  while (start < s.good.size() && s.good[start] <= series.last_p()) ++start;

  int checkpoints_committed = 0;
  const size_t window = s.cfg.checkpoint_every;
  for (size_t lo = start; lo < s.good.size(); lo += window) {
    size_t hi = std::min(lo + window, s.good.size());
    std::vector<PrimeWork> work = process_window(s, s.good.data() + lo, hi - lo, workers);

    std::ofstream csv(s.summaries_path, std::ios::binary | std::ios::app);
    std::ofstream census_csv;
    if (s.census_enabled) census_csv.open(s.census_path, std::ios::binary | std::ios::app);
    for (auto& w : work) {
      PrimeRecord rec = to_record(w.summary);
      series.update(rec);
      csv << summary_csv_row(rec) << "\n";
      trace_cpu_ms += w.summary.elapsed_ms;
      census_cpu_ms += w.census_ms;
      fibers_computed += w.summary.p + (w.summary.includes_infinity_fiber ? 1 : 0);
      if (w.has_census) {
        census_reports.push_back(w.census);
        census_csv << census_csv_row(w.census) << "\n";
      }
      ++rows_committed;
    }
    csv.flush();
    if (!csv) raise(Errc::io_failure, "write failed: " + s.summaries_path.string());
    csv.close();
    if (s.census_enabled) census_csv.close();

    uint64_t X = s.good[hi - 1];
    history.push_back({X, series.S(static_cast<double>(X)), series.T(static_cast<double>(X)),
                       series.theta(static_cast<double>(X))});
    write_checkpoint(s, series, X, rows_committed, history);
    ++checkpoints_committed;
    if (s.cfg.abort_after_checkpoints >= 0 &&
        checkpoints_committed >= s.cfg.abort_after_checkpoints)
      throw RunAborted{checkpoints_committed};
  }

  // Final checkpoint at the configured horizon X = x_max.
  history.push_back({s.cfg.x_max, series.S(static_cast<double>(s.cfg.x_max)),
                     series.T(static_cast<double>(s.cfg.x_max)),
                     series.theta(static_cast<double>(s.cfg.x_max))});
  write_checkpoint(s, series, s.cfg.x_max, rows_committed, history);

  double wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  uint64_t fibers_total = 0;
  for (uint32_t p : s.good) fibers_total += p;
  write_manifest(s, wall_seconds, fibers_total, fibers_computed, trace_cpu_ms, census_cpu_ms,
                 resumed, started_at, workers);

  RunResult result;
  result.family = s.fam;
  result.mode = s.mode;
  result.series = std::move(series);
  if (s.fam.trace_trivial_asserted)
    result.estimate =
        rank_estimate(result.series, s.fam, s.mode, static_cast<double>(s.cfg.x_max));
  if (result.series.n_primes() >= 100)
    result.residues = dirichlet_residue(result.series.records());
  result.census_reports = std::move(census_reports);
  result.checkpoint_path = s.checkpoint_path;
  result.summaries_path = s.summaries_path;
  if (s.census_enabled) result.census_path = s.census_path;
  result.manifest_path = s.manifest_path;
  result.wall_seconds = wall_seconds;
  result.fibers_total = fibers_total;
  result.report_text = render_report(s, result.series, s.cfg.x_max, result.census_reports);
  return result;
}

}  // namespace

std::vector<std::string> corpus_names() {
  std::vector<std::string> names;
  for (const auto& e : kCorpus) names.push_back(e.name);
  return names;
}

const std::string& corpus_config_text(const std::string& name) {
  static std::map<std::string, std::string> cache;
  for (const auto& e : kCorpus) {
    if (name == e.name) {
      auto it = cache.find(name);
      if (it == cache.end()) it = cache.emplace(name, e.ini).first;
      return it->second;
    }
  }
  raise(Errc::malformed_config, "unknown corpus family: " + name);
}

std::string corpus_description(const std::string& name);
std::string corpus_description(const std::string& name) {
  for (const auto& e : kCorpus)
    if (name == e.name) return e.description;
  return "";
}

std::map<std::string, std::string> load_family_config(const std::string& spec) {
  for (const auto& e : kCorpus)
    if (spec == e.name) return parse_ini(e.ini);
  if (!std::filesystem::exists(spec))
    raise(Errc::malformed_config, "family '" + spec + "' is neither a corpus name nor a file");
  return parse_ini(read_file(spec));
}

HyperellipticFamily load_family_spec(const std::string& spec) {
  return family_from_config(load_family_config(spec));
}

RunResult run(const RunConfig& cfg) { return run_session(open_session(cfg), false, {}); }

RunResult resume(const std::filesystem::path& checkpoint_path, unsigned workers,
                 int abort_after_checkpoints) {
  json j;
  try {
    j = json::parse(read_file(checkpoint_path));
  } catch (const json::exception& e) {
    raise(Errc::corrupt_artifact, checkpoint_path.string() + ": " + e.what());
  }
  if (!j.contains("resume"))
    raise(Errc::corrupt_artifact, checkpoint_path.string() + ": no resume section");
  const json& r = j["resume"];

  RunConfig cfg;
  cfg.out_dir = checkpoint_path.parent_path();
  if (cfg.out_dir.empty()) cfg.out_dir = ".";
  cfg.workers = workers;
  cfg.abort_after_checkpoints = abort_after_checkpoints;
  try {
    const json& c = r.at("config");
    cfg.x_max = c.at("x_max").get<uint64_t>();
    cfg.mode = mode_from_name(c.at("mode").get<std::string>());
    cfg.b_max = c.at("b_max").get<uint32_t>();
    cfg.checkpoint_every = c.at("checkpoint_every").get<uint32_t>();
    cfg.census = c.at("census").get<bool>();
    cfg.crosscheck_cutoff = c.at("crosscheck_cutoff").get<uint32_t>();

    std::map<std::string, std::string> fam_kv =
        r.at("family_config").get<std::map<std::string, std::string>>();
    cfg.family_spec = fam_kv.at("name");

    Session s;
    s.cfg = cfg;
    s.family_kv = fam_kv;
    s.fam = family_from_config(fam_kv);
    s.fingerprint = config_fingerprint(fam_kv);
    if (s.fingerprint != r.at("fingerprint").get<std::string>())
      raise(Errc::corrupt_artifact, "checkpoint fingerprint does not match its family config");
    s.mode = *cfg.mode;
    s.excluded = bad_primes(s.fam, cfg.x_max);
    for (uint32_t p : sieve_primes(cfg.x_max))
      if (!std::binary_search(s.excluded.begin(), s.excluded.end(), p)) s.good.push_back(p);
    s.census_enabled = cfg.census && s.fam.genus == 1;
    s.summaries_path = cfg.out_dir / r.at("summaries_csv").get<std::string>();
    if (s.census_enabled && !r.at("census_csv").is_null())
      s.census_path = cfg.out_dir / r.at("census_csv").get<std::string>();
    else
      s.census_path = cfg.out_dir / "census.csv";
    s.checkpoint_path = checkpoint_path;
    s.manifest_path = cfg.out_dir / "manifest.json";

    ResumeState rs;
    rs.last_p = r.at("last_p").get<uint64_t>();
    rs.rows_committed = r.at("rows_committed").get<size_t>();
    if (j.contains("history"))
      for (const auto& h : j["history"])
        rs.history.push_back({h.at("X").get<uint64_t>(), h.at("S").get<double>(),
                              h.at("T").get<double>(), h.at("theta").get<double>()});
    // Drop history entries past the committed horizon (the final-X entry of a
    // completed run is regenerated).
    while (!rs.history.empty() && rs.history.back().X > rs.last_p) rs.history.pop_back();

    return run_session(std::move(s), true, std::move(rs));
  } catch (const json::exception& e) {
    raise(Errc::corrupt_artifact, checkpoint_path.string() + ": " + e.what());
  }
}

namespace {

std::string report_checkpoint(const std::filesystem::path& path, bool smooth) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    raise(Errc::corrupt_artifact, path.string() + ": " + e.what());
  }
  std::ostringstream out;
  char buf[256];
  try {
    out << "checkpoint: " << path.string() << "\n";
    out << "family: " << j.at("family").get<std::string>() << "  mode: "
        << j.at("mode").get<std::string>() << "  X = " << j.at("X").get<uint64_t>() << "\n";
    std::snprintf(buf, sizeof buf, "S(X) = %.6f  T(X) = %.6f  theta(X) = %.6f\n",
                  j.at("S").get<double>(), j.at("T").get<double>(), j.at("theta").get<double>());
    out << buf;
    if (!j.at("resA_est").is_null()) {
      std::snprintf(buf, sizeof buf, "resA_est = %.6f  resB_est = %.6f\n",
                    j.at("resA_est").get<double>(), j.at("resB_est").get<double>());
      out << buf;
    }
    if (!j.at("raw").is_null()) {
      std::snprintf(buf, sizeof buf, "estimated rank %d (raw %.6f, gap %.6f)\n",
                    j.at("rounded").get<int>(), j.at("raw").get<double>(),
                    j.at("gap").get<double>());
      out << buf;
    } else {
      out << "rank estimate withheld: trivial-trace hypothesis not asserted\n";
    }
    const json& hyp = j.at("hypotheses");
    out << "hypotheses: trace_trivial = "
        << (hyp.at("trace_trivial_asserted").get<bool>() ? "true" : "false")
        << ", ns_ak_rank = " << hyp.at("ns_ak_rank_asserted").get<int>() << "\n";
    if (!j.at("b_pass").at("complete").get<bool>())
      out << "B pass: partial, cutoff b_max = " << j.at("b_pass").at("b_max").get<uint32_t>()
          << "\n";

    if (smooth && j.contains("history")) {
      std::vector<double> svals;
      for (const auto& h : j["history"]) svals.push_back(h.at("S").get<double>());
      std::snprintf(buf, sizeof buf, "smoothed S (median of last 10 checkpoints) = %.6f\n",
                    trailing_median(svals, 10));
      out << buf;
    }

    // Recompute the sums from the CSV and compare.
    const json& r = j.at("resume");
    std::filesystem::path csv = path.parent_path() / r.at("summaries_csv").get<std::string>();
    if (std::filesystem::exists(csv)) {
      EstimateSeries replay;
      uint64_t last_p = r.at("last_p").get<uint64_t>();
      for (const auto& rec : read_summary_csv(csv))
        if (rec.p <= last_p) replay.update(rec);
      double X = static_cast<double>(j.at("X").get<uint64_t>());
      auto rel = [](double a, double b) {
        double scale = std::max({std::abs(a), std::abs(b), 1e-300});
        return std::abs(a - b) / scale;
      };
      double worst = std::max({rel(replay.S(X), j.at("S").get<double>()),
                               rel(replay.T(X), j.at("T").get<double>()),
                               rel(replay.theta(X), j.at("theta").get<double>())});
      if (worst > 1e-12) {
        std::snprintf(buf, sizeof buf,
                      "WARNING: CSV recomputation differs from checkpoint (rel %.3e)\n", worst);
        out << buf;
      } else {
        out << "CSV recomputation matches the checkpoint (<= 1e-12 relative)\n";
      }
    } else {
      out << "note: per-prime CSV not found next to the checkpoint; recomputation skipped\n";
    }

    if (!r.at("census_csv").is_null()) {
      std::filesystem::path census = path.parent_path() / r.at("census_csv").get<std::string>();
      if (std::filesystem::exists(census)) {
        auto rows = read_census_csv(census);
        bool all_pass = true;
        for (const auto& c : rows) all_pass = all_pass && c.crosscheck_pass;
        out << "census: " << rows.size() << " rows, crosschecks "
            << (all_pass ? "all pass" : "FAILED") << "\n";
      }
    }
  } catch (const json::exception& e) {
    raise(Errc::corrupt_artifact, path.string() + ": " + e.what());
  }
  out << "note: finite-X values carry no proven convergence rate; tolerances are empirical\n";
  return out.str();
}

std::string report_summary_csv(const std::filesystem::path& path) {
  std::vector<PrimeRecord> rows = read_summary_csv(path);
  std::ostringstream out;
  out << "per-prime CSV: " << path.string() << " (" << rows.size() << " rows)\n";
  if (rows.empty()) return out.str();
  EstimateSeries series;
  for (const auto& r : rows) series.update(r);
  double X = static_cast<double>(series.last_p());
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "X = %u (last prime in file)\nS(X) = %.6f  T(X) = %.6f  theta(X) = %.6f\n",
                series.last_p(), series.S(X), series.T(X), series.theta(X));
  out << buf;
  if (series.n_primes() >= 100) {
    ResidueEstimate res = dirichlet_residue(series.records());
    std::snprintf(buf, sizeof buf, "resA_est = %.6f  resB_est = %.6f\n", res.A.extrapolated,
                  res.B.extrapolated);
    out << buf;
  }
  out << "note: rank interpretation needs the family's hypotheses; run `report` on the "
         "checkpoint for that\n";
  out << "note: finite-X values carry no proven convergence rate; tolerances are empirical\n";
  return out.str();
}

std::string report_census_csv(const std::filesystem::path& path) {
  std::vector<CensusReport> rows = read_census_csv(path);
  std::ostringstream out;
  out << "census CSV: " << path.string() << " (" << rows.size() << " rows)\n";
  bool all_pass = true;
  for (const auto& r : rows) all_pass = all_pass && r.crosscheck_pass;
  out << "crosschecks: " << (all_pass ? "all pass" : "FAILED") << "\n";
  if (rows.size() < 4) {
    out << "stability verdict: insufficient range\n";
    return out.str();
  }
  size_t half = rows.size() / 2;
  int value = rows[half].rounded;
  bool stable = true;
  for (size_t i = half; i < rows.size(); ++i)
    if (rows[i].rounded != value) stable = false;
  if (stable)
    out << "stability verdict: rounded inferred trace stable at " << value
        << " on the upper half\n";
  else
    out << "stability verdict: UNSTABLE on the upper half\n";
  return out.str();
}

}  // namespace

std::string report(const std::filesystem::path& artifact, bool smooth) {
  std::string text = read_file(artifact);
  if (text.empty()) raise(Errc::corrupt_artifact, artifact.string() + ": empty file");
  size_t start = text.find_first_not_of(" \t\r\n");
  if (start != std::string::npos && text[start] == '{') return report_checkpoint(artifact, smooth);
  size_t nl = text.find('\n');
  std::string header = text.substr(0, nl == std::string::npos ? text.size() : nl);
  if (header == kSummaryCsvHeader) return report_summary_csv(artifact);
  if (header == kCensusCsvHeader) return report_census_csv(artifact);
  raise(Errc::corrupt_artifact, artifact.string() + ": unrecognized artifact");
}

}  // namespace fibrank
