// Orchestration: configuration, prime scheduling across a worker pool,
// deterministic merge, checkpoint/resume, and the human-readable report.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fibrank/census.hpp"
#include "fibrank/estimate.hpp"
#include "fibrank/io.hpp"

namespace fibrank {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct RunConfig {
  std::string family_spec;  // corpus name or path to a config file
  uint64_t x_max = 10000;
  std::optional<EstimateMode> mode;  // default: elliptic for genus 1, combined for genus 2
  uint32_t b_max = 500;              // genus-2 second-power pass cutoff
  unsigned workers = 0;              // 0 = hardware concurrency
  uint32_t checkpoint_every = 500;   // good primes per checkpoint window
  std::filesystem::path out_dir = "fibrank-out";
  bool census = false;
  uint32_t crosscheck_cutoff = 101;  // triple-loop recount bound when census is on
  int abort_after_checkpoints = -1;  // test hook for kill/resume coverage; < 0 disables
};

struct RunResult {
  HyperellipticFamily family;
  EstimateMode mode = EstimateMode::elliptic;
  EstimateSeries series;
  std::optional<RankEstimate> estimate;
  std::optional<ResidueEstimate> residues;
  std::vector<CensusReport> census_reports;
  std::filesystem::path checkpoint_path;
  std::filesystem::path summaries_path;
  std::filesystem::path census_path;  // empty when census off
  std::filesystem::path manifest_path;
  double wall_seconds = 0.0;
  uint64_t fibers_total = 0;
  std::string report_text;
};

// Signals the abort_after_checkpoints test hook; the CLI maps it to a
// distinct exit code so resume tests can tell it from success or failure.
struct RunAborted {
  int checkpoints_committed = 0;
};

std::vector<std::string> corpus_names();
const std::string& corpus_config_text(const std::string& name);
std::string corpus_description(const std::string& name);

// Resolves a corpus name or reads a config file.
std::map<std::string, std::string> load_family_config(const std::string& spec);
HyperellipticFamily load_family_spec(const std::string& spec);

RunResult run(const RunConfig& cfg);

// Continues from a committed checkpoint; the stored config snapshot wins.
RunResult resume(const std::filesystem::path& checkpoint_path, unsigned workers = 0,
                 int abort_after_checkpoints = -1);

// Renders a checkpoint JSON, a per-prime CSV, or a census CSV. For
// checkpoints the sums are recomputed from the CSV and a warning is included
// when they drift beyond 1e-12 relative.
std::string report(const std::filesystem::path& artifact, bool smooth = false);

}  // namespace fibrank
