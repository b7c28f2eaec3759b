// Per-fiber Frobenius traces and their per-prime fibral averages.
//
// Traces are realized by point counts: a = p + 1 - #C(F_p) on the smooth
// projective model of y^2 = f(x), and for genus-2 fibers the H^2 trace of the
// Jacobian comes from counts over F_p and F_{p^2}. Singular fibers contribute
// a = b = 0.
#pragma once

#include <cstdint>

#include "fibrank/family.hpp"

namespace fibrank {

struct FiberTrace {
  uint32_t t = 0;
  int64_t a = 0;
  int64_t b = 0;
  bool singular = false;
  bool b_known = true;  // false when the genus-2 second-power pass is disabled
};

struct PrimeSummary {
  uint32_t p = 0;
  uint32_t n_delta = 0;  // singular fibers in the affine chart
  uint32_t n_ns = 0;     // p - n_delta
  int64_t a_sum = 0;     // sum of a over fibers; the average is a_sum / p
  int64_t b_sum = 0;     // sum of b over fibers, valid iff b_computed
  bool b_computed = false;
  bool includes_infinity_fiber = false;
  double elapsed_ms = 0.0;  // measured; excluded from deterministic artifacts

  double a_avg() const { return static_cast<double>(a_sum) / p; }
  double b_avg() const { return static_cast<double>(b_sum) / p; }
};

struct TraceOptions {
  bool compute_b = true;  // genus 2 only: run the F_{p^2} pass
};

// floor(2g sqrt(p)) computed exactly.
int64_t hasse_weil_bound(int genus, uint32_t p);

namespace detail {

// Visits f(0), f(1), ..., f(p-1) by a forward-difference walk: deg additions
// mod p per step, no division. Valid for every p (the step recurrence is the
// image of an integer-polynomial identity).
template <int D, typename Fn>
void fiber_walk_fixed(const PrimeFieldCtx& ctx, const uint32_t* coeffs, Fn&& fn) {
  const uint32_t p = ctx.p;
  uint32_t w[D + 1];
  for (int i = 0; i <= D; ++i) {
    uint64_t acc = 0;
    for (int j = D; j >= 0; --j) acc = (acc * i + coeffs[j]) % p;
    w[i] = static_cast<uint32_t>(acc);
  }
  for (int k = 1; k <= D; ++k)
    for (int j = D; j >= k; --j) w[j] = sub_mod(w[j], w[j - 1], p);
  for (uint32_t x = 0; x < p; ++x) {
    fn(w[0]);
    for (int k = 0; k < D; ++k) w[k] = add_mod(w[k], w[k + 1], p);
  }
}

}  // namespace detail

template <typename Fn>
void fiber_walk(const PrimeFieldCtx& ctx, const uint32_t* coeffs, int deg, Fn&& fn) {
  switch (deg) {
    case 3: detail::fiber_walk_fixed<3>(ctx, coeffs, fn); return;
    case 4: detail::fiber_walk_fixed<4>(ctx, coeffs, fn); return;
    case 5: detail::fiber_walk_fixed<5>(ctx, coeffs, fn); return;
    case 6: detail::fiber_walk_fixed<6>(ctx, coeffs, fn); return;
    default: throw std::invalid_argument("unsupported x-degree");
  }
}

// Projective point count of y^2 = g(x) over F_p for coefficients g[0..deg];
// deg is the family degree (the fiber may have lower actual degree, in which
// case the infinity bookkeeping follows the degenerate leading coefficient).
int64_t curve_count_fp_poly(const PrimeFieldCtx& ctx, const uint32_t* coeffs, int deg);

// Same count over F_{p^2}.
int64_t curve_count_fp2_poly(const PrimeFieldCtx& ctx, const uint32_t* coeffs, int deg);

// Sum over x in F_p of chi(f(x)) for f given by coeffs[0..deg].
int64_t chi_sum_poly(const PrimeFieldCtx& ctx, const uint32_t* coeffs, int deg);

// #C_t(F_p) for a good fiber; SingularFiber otherwise.
int64_t curve_count_fp(const FamilyModP& fp, uint32_t t);

// Trace of Frob_p^2 on H^1 has e_2 = (t1^2 - t2)/2; ParityViolation when the
// difference is odd (which would signal a counting bug).
int64_t b_from_h1(int64_t t1, int64_t t2, uint32_t p);

FiberTrace fiber_trace(const FamilyModP& fp, uint32_t t, bool compute_b = true);

// One full pass over the affine chart (plus the infinity fiber when a second
// chart is present): exact integer accumulation, Hasse-Weil checks on every
// fiber, deterministic regardless of callers' threading.
PrimeSummary fibral_averages(const FamilyModP& fp, const TraceOptions& opt = {});

}  // namespace fibrank
