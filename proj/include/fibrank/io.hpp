// On-disk artifacts: the bit-exact per-prime CSV, the census CSV, atomic file
// replacement, and config fingerprinting.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fibrank/census.hpp"
#include "fibrank/estimate.hpp"

namespace fibrank {

// Per-prime CSV schema: p,n_delta,A_num,B_num,elapsed_ms
// A_num and B_num are the exact integer numerators (divide by p for the
// averages); B_num is empty when the genus-2 second-power pass was skipped.
// elapsed_ms is pinned to 0 in the file: the CSV is a deterministic artifact
// (byte-identical across reruns and worker counts) and timings live in the
// manifest instead.
inline constexpr const char* kSummaryCsvHeader = "p,n_delta,A_num,B_num,elapsed_ms";

std::string summary_csv_row(const PrimeRecord& r);
std::vector<PrimeRecord> read_summary_csv(const std::filesystem::path& path);

inline constexpr const char* kCensusCsvHeader =
    "p,n_delta,singular_total,inferred_trace,rounded,crosscheck_pass";

std::string census_csv_row(const CensusReport& r);
std::vector<CensusReport> read_census_csv(const std::filesystem::path& path);

// Write-then-rename replacement so observers never see a partial file.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

// Canonical form of a parsed config: sorted keys, normalized list spacing.
// Reordering keys in the source file does not change it.
std::string canonical_config(const std::map<std::string, std::string>& kv);

// FNV-1a over the canonical form, rendered as fixed-width hex.
std::string config_fingerprint(const std::map<std::string, std::string>& kv);

std::string iso8601_now();

}  // namespace fibrank
