// fibrank command-line driver.
#include <chrono>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fibrank/primes.hpp"
#include "fibrank/runner.hpp"
#include "fibrank/trace.hpp"

namespace {

int do_bench(const std::string& family, uint32_t pmin, uint32_t pmax,
             const std::string& check_path, const std::string& out_path) {
  using namespace fibrank;
  HyperellipticFamily fam = load_family_spec(family);
  std::vector<uint32_t> excluded = bad_primes(fam, pmax);
  uint64_t fibers = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (uint32_t p : sieve_primes(pmax)) {
    if (p < pmin) continue;
    if (std::binary_search(excluded.begin(), excluded.end(), p)) continue;
    FamilyModP fp = reduce_mod_p(fam, p, excluded);
    TraceOptions opt;
    opt.compute_b = fam.genus == 1;
    fibral_averages(fp, opt);
    fibers += p;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double fps = secs > 0 ? fibers / secs : 0.0;
  std::printf("bench: %llu fibers in %.3f s -> %.0f fibers/s\n",
              static_cast<unsigned long long>(fibers), secs, fps);
  if (!out_path.empty()) {
    nlohmann::json j;
    j["fibers_per_second"] = fps;
    atomic_write_file(out_path, j.dump(2) + "\n");
  }
  if (!check_path.empty()) {
    nlohmann::json j = nlohmann::json::parse(read_file(check_path));
    double baseline = j.at("fibers_per_second").get<double>();
    if (baseline > 0 && fps < baseline / 2) {
      std::fprintf(stderr, "throughput regression: %.0f fibers/s vs baseline %.0f (>2x slower)\n",
                   fps, baseline);
      return 1;
    }
    std::printf("throughput ok: baseline %.0f fibers/s\n", baseline);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fibrank: rank estimation for one-parameter curve families from "
               "fibral Frobenius-trace averages"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run the trace averages and estimators for a family");
  fibrank::RunConfig cfg;
  std::string mode_str;
  std::string resume_path;
  std::string out_dir = "fibrank-out";
  run_cmd->add_option("--family", cfg.family_spec, "corpus name or family config path");
  run_cmd->add_option("--xmax", cfg.x_max, "sum over good primes up to this bound")
      ->capture_default_str();
  run_cmd->add_option("--mode", mode_str, "elliptic | combined (default by genus)");
  run_cmd->add_option("--bmax", cfg.b_max, "genus-2 second-power pass cutoff")
      ->capture_default_str();
  run_cmd->add_option("--workers", cfg.workers, "worker threads (0 = hardware)")
      ->capture_default_str();
  run_cmd->add_option("--checkpoint-every", cfg.checkpoint_every, "good primes per checkpoint")
      ->capture_default_str();
  run_cmd->add_option("--out-dir", out_dir, "artifact directory")->capture_default_str();
  run_cmd->add_flag("--census", cfg.census, "also run the singular-fiber census (genus 1)");
  run_cmd->add_option("--crosscheck-cutoff", cfg.crosscheck_cutoff,
                      "triple-loop recount bound for the census")
      ->capture_default_str();
  run_cmd->add_option("--resume", resume_path, "continue from a committed checkpoint JSON");
  run_cmd->add_option("--abort-after-checkpoints", cfg.abort_after_checkpoints,
                      "testing: exit with code 75 after this many checkpoint commits");

  // report
  auto* report_cmd = app.add_subcommand("report", "summarize a checkpoint or CSV artifact");
  std::string artifact;
  bool smooth = false;
  report_cmd->add_option("artifact", artifact, "checkpoint.json, summaries.csv or census.csv")
      ->required();
  report_cmd->add_flag("--smooth", smooth, "include the trailing-median smoothed S(X)");

  // corpus
  auto* corpus_cmd = app.add_subcommand("corpus", "built-in families");
  auto* corpus_list = corpus_cmd->add_subcommand("list", "list the built-in families");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "measure trace throughput");
  std::string bench_family = "legendre";
  uint32_t bench_pmin = 3000, bench_pmax = 4000;
  std::string bench_check, bench_out;
  bench_cmd->add_option("--family", bench_family, "family to benchmark")->capture_default_str();
  bench_cmd->add_option("--pmin", bench_pmin, "first prime")->capture_default_str();
  bench_cmd->add_option("--pmax", bench_pmax, "last prime")->capture_default_str();
  bench_cmd->add_option("--check", bench_check,
                        "manifest/bench JSON baseline; fail on a >2x slowdown");
  bench_cmd->add_option("--out", bench_out, "write fibers/second to this JSON file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      cfg.out_dir = out_dir;
      fibrank::RunResult result;
      if (!resume_path.empty()) {
        result = fibrank::resume(resume_path, cfg.workers, cfg.abort_after_checkpoints);
      } else {
        if (cfg.family_spec.empty()) {
          std::cerr << "run: --family is required (or --resume)\n";
          return 2;
        }
        if (!mode_str.empty())
          cfg.mode = mode_str == "elliptic" ? fibrank::EstimateMode::elliptic
                     : mode_str == "combined"
                         ? fibrank::EstimateMode::combined
                         : throw fibrank::Error(fibrank::Errc::malformed_config,
                                                "unknown mode: " + mode_str);
        result = fibrank::run(cfg);
      }
      std::cout << result.report_text;
      std::cout << "artifacts: " << result.summaries_path.string() << ", "
                << result.checkpoint_path.string() << ", " << result.manifest_path.string();
      if (!result.census_path.empty()) std::cout << ", " << result.census_path.string();
      std::cout << "\n";
      return 0;
    }
    if (report_cmd->parsed()) {
      std::cout << fibrank::report(artifact, smooth);
      return 0;
    }
    if (corpus_list->parsed() || corpus_cmd->parsed()) {
      for (const auto& name : fibrank::corpus_names())
        std::cout << name << "  " << fibrank::corpus_description(name) << "\n";
      return 0;
    }
    if (bench_cmd->parsed())
      return do_bench(bench_family, bench_pmin, bench_pmax, bench_check, bench_out);
  } catch (const fibrank::RunAborted& aborted) {
    std::cerr << "aborted by --abort-after-checkpoints after " << aborted.checkpoints_committed
              << " commits\n";
    return 75;
  } catch (const fibrank::Error& e) {
    std::cerr << fibrank::errc_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
