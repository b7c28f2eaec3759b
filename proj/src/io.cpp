#include "fibrank/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fibrank {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    size_t next = line.find(sep, pos);
    out.push_back(line.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

int64_t parse_i64(const std::string& s, const std::filesystem::path& path) {
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    raise(Errc::corrupt_artifact, path.string() + ": bad integer field '" + s + "'");
  return v;
}

// Lines of a CSV body; requires the expected header and a trailing newline
// (a missing one means the last row may be torn).
std::vector<std::string> csv_lines(const std::filesystem::path& path, const char* header) {
  std::string text = read_file(path);
  if (text.empty() || text.back() != '\n')
    raise(Errc::corrupt_artifact, path.string() + ": truncated (no trailing newline)");
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty() || lines[0] != header)
    raise(Errc::corrupt_artifact, path.string() + ": unexpected header");
  lines.erase(lines.begin());
  return lines;
}

}  // namespace

std::string summary_csv_row(const PrimeRecord& r) {
  std::string row = std::to_string(r.p) + "," + std::to_string(r.n_delta) + "," +
                    std::to_string(r.a_sum) + ",";
  if (r.b_sum) row += std::to_string(*r.b_sum);
  row += ",0";
  return row;
}

std::vector<PrimeRecord> read_summary_csv(const std::filesystem::path& path) {
  std::vector<PrimeRecord> rows;
  for (const std::string& line : csv_lines(path, kSummaryCsvHeader)) {
    auto fields = split(line, ',');
    if (fields.size() != 5)
      raise(Errc::corrupt_artifact, path.string() + ": wrong field count in '" + line + "'");
    PrimeRecord r;
    r.p = static_cast<uint32_t>(parse_i64(fields[0], path));
    r.n_delta = static_cast<uint32_t>(parse_i64(fields[1], path));
    r.a_sum = parse_i64(fields[2], path);
    if (!fields[3].empty()) r.b_sum = parse_i64(fields[3], path);
    parse_i64(fields[4], path);  // elapsed_ms, validated but unused
    rows.push_back(r);
  }
  return rows;
}

std::string census_csv_row(const CensusReport& r) {
  char inferred[64];
  std::snprintf(inferred, sizeof inferred, "%.6f", r.inferred_trace);
  return std::to_string(r.p) + "," + std::to_string(r.n_delta) + "," +
         std::to_string(r.singular_total) + "," + inferred + "," + std::to_string(r.rounded) +
         "," + (r.crosscheck_pass ? "1" : "0");
}

std::vector<CensusReport> read_census_csv(const std::filesystem::path& path) {
  std::vector<CensusReport> rows;
  for (const std::string& line : csv_lines(path, kCensusCsvHeader)) {
    auto fields = split(line, ',');
    if (fields.size() != 6)
      raise(Errc::corrupt_artifact, path.string() + ": wrong field count in '" + line + "'");
    CensusReport r;
    r.p = static_cast<uint32_t>(parse_i64(fields[0], path));
    r.n_delta = static_cast<uint32_t>(parse_i64(fields[1], path));
    r.singular_total = parse_i64(fields[2], path);
    try {
      r.inferred_trace = std::stod(fields[3]);
    } catch (const std::exception&) {
      raise(Errc::corrupt_artifact, path.string() + ": bad float field '" + fields[3] + "'");
    }
    r.rounded = static_cast<int>(parse_i64(fields[4], path));
    r.crosscheck_run = true;
    r.crosscheck_pass = fields[5] == "1";
    rows.push_back(r);
  }
  return rows;
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_failure, "cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) raise(Errc::io_failure, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) raise(Errc::io_failure, "rename " + tmp.string() + " -> " + path.string() + " failed");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_failure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string canonical_config(const std::map<std::string, std::string>& kv) {
  std::string out;
  for (const auto& [key, value] : kv) {  // std::map iterates in key order
    std::string norm;
    for (char c : value) {
      if (c == ' ' || c == '\t') continue;
      norm += c;
    }
    out += key;
    out += '=';
    out += norm;
    out += '\n';
  }
  return out;
}

std::string config_fingerprint(const std::map<std::string, std::string>& kv) {
  std::string canon = canonical_config(kv);
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string iso8601_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace fibrank
