#include "fibrank/estimate.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <string>

namespace fibrank {

void Kahan::add(double v) {
  double t = sum + v;
  if (std::abs(sum) >= std::abs(v))
    comp += (sum - t) + v;
  else
    comp += (v - t) + sum;
  sum = t;
}

void EstimateSeries::update(const PrimeRecord& r) {
  if (r.p <= last_p_)
    raise(Errc::out_of_order_prime, "p = " + std::to_string(r.p) + " after p = " +
                                        std::to_string(last_p_));
  last_p_ = r.p;
  double logp = std::log(static_cast<double>(r.p));
  double avg_a = static_cast<double>(r.a_sum) / r.p;
  neg_a_logp_.add(-avg_a * logp);
  if (r.b_sum) {
    double avg_b = static_cast<double>(*r.b_sum) / r.p;
    b_logp_over_p_.add(avg_b * logp / r.p);
  } else {
    b_complete_ = false;
  }
  logp_.add(logp);
  records_.push_back(r);
}

namespace {

// Intercept at x = 0 of the least-squares line through (x_i, y_i).
double ls_intercept(const std::vector<double>& x, const std::vector<double>& y) {
  size_t n = x.size();
  if (n == 1) return y[0];
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  double slope = sxx == 0 ? 0 : sxy / sxx;
  return my - slope * mx;
}

ResidueGrid residue_grid(const std::vector<PrimeRecord>& records, const std::vector<double>& grid,
                         double shift, bool use_b) {
  ResidueGrid out;
  out.s = grid;
  std::vector<double> offsets;
  for (double s : grid) {
    Kahan num, unit;
    for (const auto& r : records) {
      double logp = std::log(static_cast<double>(r.p));
      double wt = logp * std::pow(static_cast<double>(r.p), -s);
      if (use_b) {
        if (!r.b_sum) continue;
        double avg_b = static_cast<double>(*r.b_sum) / r.p;
        num.add(avg_b * wt);
        unit.add(static_cast<double>(r.p) * wt);
      } else {
        double avg_a = static_cast<double>(r.a_sum) / r.p;
        num.add(-avg_a * wt);
        unit.add(wt);
      }
    }
    out.raw.push_back((s - shift) * num.value());
    out.normalized.push_back(unit.value() == 0 ? 0.0 : num.value() / unit.value());
    offsets.push_back(s - shift);
  }
  out.extrapolated = ls_intercept(offsets, out.normalized);
  return out;
}

}  // namespace

ResidueEstimate dirichlet_residue(const std::vector<PrimeRecord>& records,
                                  const std::vector<double>& s_grid_A,
                                  const std::vector<double>& s_grid_B) {
  if (records.size() < 100)
    raise(Errc::insufficient_data,
          "dirichlet_residue needs at least 100 primes, have " + std::to_string(records.size()));
  ResidueEstimate est;
  est.A = residue_grid(records, s_grid_A, 1.0, false);
  est.B = residue_grid(records, s_grid_B, 2.0, true);
  return est;
}

RankEstimate rank_estimate(const EstimateSeries& series, const HyperellipticFamily& fam,
                           EstimateMode mode, double X) {
  if (!fam.trace_trivial_asserted)
    raise(Errc::hypothesis_not_asserted,
          "family '" + fam.name + "' does not assert the trivial-trace hypothesis");
  RankEstimate est;
  est.mode = mode;
  if (mode == EstimateMode::elliptic) {
    est.raw = series.S(X);
  } else {
    est.raw = series.S(X) + series.T(X) - fam.ns_ak_rank_asserted;
  }
  est.rounded = static_cast<int>(std::nearbyint(est.raw));  // FE_TONEAREST: ties to even
  est.gap = std::abs(est.raw - est.rounded);
  return est;
}

double trailing_median(const std::vector<double>& values, size_t window) {
  if (values.empty()) return 0.0;
  size_t n = std::min(window, values.size());
  std::vector<double> tail(values.end() - n, values.end());
  std::sort(tail.begin(), tail.end());
  return n % 2 == 1 ? tail[n / 2] : 0.5 * (tail[n / 2 - 1] + tail[n / 2]);
}

RankLedger ledger_solve(const LedgerInput& in) {
  int supplied = 0;
  for (const auto& f : {in.mw, in.ns_A, in.ns_S, in.ns_AK, in.f_inv}) {
    if (f) {
      ++supplied;
      if (*f < 0) throw std::invalid_argument("ledger fields must be non-negative");
    }
  }
  if (supplied < 4)
    raise(Errc::insufficient_data, "ledger_solve needs four of the five fields");

  if (supplied == 5) {
    if (*in.ns_A != *in.mw + *in.ns_S + *in.ns_AK + *in.f_inv)
      raise(Errc::over_determined, "all five ledger fields supplied and the identity fails");
    return {*in.mw, *in.ns_A, *in.ns_S, *in.ns_AK, *in.f_inv};
  }

  RankLedger out;
  if (!in.ns_A) {
    out = {*in.mw, *in.mw + *in.ns_S + *in.ns_AK + *in.f_inv, *in.ns_S, *in.ns_AK, *in.f_inv};
    return out;
  }
  int64_t rest;
  if (!in.mw) {
    rest = *in.ns_A - *in.ns_S - *in.ns_AK - *in.f_inv;
    out = {rest, *in.ns_A, *in.ns_S, *in.ns_AK, *in.f_inv};
  } else if (!in.ns_S) {
    rest = *in.ns_A - *in.mw - *in.ns_AK - *in.f_inv;
    out = {*in.mw, *in.ns_A, rest, *in.ns_AK, *in.f_inv};
  } else if (!in.ns_AK) {
    rest = *in.ns_A - *in.mw - *in.ns_S - *in.f_inv;
    out = {*in.mw, *in.ns_A, *in.ns_S, rest, *in.f_inv};
  } else {
    rest = *in.ns_A - *in.mw - *in.ns_S - *in.ns_AK;
    out = {*in.mw, *in.ns_A, *in.ns_S, *in.ns_AK, rest};
  }
  if (rest < 0)
    raise(Errc::inconsistent_ledger, "solved ledger field is negative (" + std::to_string(rest) + ")");
  return out;
}

}  // namespace fibrank
