// Cesàro and Dirichlet partial-sum estimators over the per-prime trace
// averages, plus the rank-ledger arithmetic.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fibrank/family.hpp"
#include "fibrank/trace.hpp"

namespace fibrank {

// Compensated (Neumaier) accumulator; the sums run over up to ~10^5 terms and
// are part of the bit-reproducibility contract, so the update order is fixed
// by the ascending-p merge.
struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v);
  double value() const { return sum + comp; }
};

// The slice of a PrimeSummary the estimators persist and replay.
struct PrimeRecord {
  uint32_t p = 0;
  uint32_t n_delta = 0;
  int64_t a_sum = 0;
  std::optional<int64_t> b_sum;  // absent when the genus-2 second-power pass was skipped
};

inline PrimeRecord to_record(const PrimeSummary& s) {
  PrimeRecord r{s.p, s.n_delta, s.a_sum, std::nullopt};
  if (s.b_computed) r.b_sum = s.b_sum;
  return r;
}

// Running Cesàro sums:
//   S(X)     = (1/X) sum_{p <= X} (-A_p) log p
//   T(X)     = (1/X) sum_{p <= X} B_p (log p)/p      (primes with B computed)
//   theta(X) = (1/X) sum_{p <= X} log p              (same good primes)
class EstimateSeries {
 public:
  // OutOfOrderPrime unless p exceeds every previously consumed prime.
  void update(const PrimeRecord& r);

  uint32_t last_p() const { return last_p_; }
  size_t n_primes() const { return records_.size(); }
  bool b_complete() const { return b_complete_; }

  double S(double X) const { return neg_a_logp_.value() / X; }
  double T(double X) const { return b_logp_over_p_.value() / X; }
  double theta(double X) const { return logp_.value() / X; }

  const std::vector<PrimeRecord>& records() const { return records_; }

 private:
  std::vector<PrimeRecord> records_;
  Kahan neg_a_logp_;
  Kahan b_logp_over_p_;
  Kahan logp_;
  uint32_t last_p_ = 0;
  bool b_complete_ = true;
};

// Grid of truncated Dirichlet sums near the residue point. `raw` is the
// literal (s - shift) * sum; at finite X that window vanishes as s approaches
// the pole, so the residue estimate extrapolates the `normalized` values,
// which divide by the matching truncated sum of the unit stream (A_p = -1,
// resp. B_p = p) and are exactly 1 on that stream at every s.
struct ResidueGrid {
  std::vector<double> s;
  std::vector<double> raw;
  std::vector<double> normalized;
  double extrapolated = 0.0;  // least-squares line of normalized vs (s - shift), at 0
};

struct ResidueEstimate {
  ResidueGrid A;  // pole at s = 1
  ResidueGrid B;  // pole at s = 2
};

// InsufficientData with fewer than 100 primes.
ResidueEstimate dirichlet_residue(const std::vector<PrimeRecord>& records,
                                  const std::vector<double>& s_grid_A = {1.5, 1.3, 1.2, 1.1, 1.05},
                                  const std::vector<double>& s_grid_B = {2.5, 2.3, 2.2, 2.1, 2.05});

enum class EstimateMode { elliptic, combined };

struct RankEstimate {
  double raw = 0.0;
  int rounded = 0;  // nearest integer, ties to even
  double gap = 0.0;
  EstimateMode mode = EstimateMode::elliptic;
};

// elliptic: raw = S(X); combined: raw = S(X) + T(X) - asserted rank NS(A/K).
// HypothesisNotAsserted when the family does not assert the trivial-trace
// hypothesis the interpretation depends on.
RankEstimate rank_estimate(const EstimateSeries& series, const HyperellipticFamily& fam,
                           EstimateMode mode, double X);

// Optional cosmetic smoothing: median of the last `window` checkpoint values.
double trailing_median(const std::vector<double>& values, size_t window = 10);

struct RankLedger {
  int64_t mw_rank = 0;
  int64_t ns_A_rank = 0;
  int64_t ns_S_rank = 0;
  int64_t ns_AK_rank = 0;
  int64_t f_inv_rank = 0;
};

struct LedgerInput {
  std::optional<int64_t> mw, ns_A, ns_S, ns_AK, f_inv;
};

// Solves ns_A = mw + ns_S + ns_AK + f_inv given four of the five fields.
// InconsistentLedger when the solved value is negative; OverDetermined when
// all five are supplied but violate the identity.
RankLedger ledger_solve(const LedgerInput& in);

}  // namespace fibrank
