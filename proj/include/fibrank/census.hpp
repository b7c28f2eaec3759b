// Empirical verification of the fiber-by-fiber counting structure: the total
// space counted two ways must agree exactly, and the points lying over the
// discriminant locus expose the fibral-component trace term, inferred here on
// the plane-curve model.
#pragma once

#include <cstdint>
#include <vector>

#include "fibrank/family.hpp"

namespace fibrank {

struct CensusReport {
  uint32_t p = 0;
  uint32_t n_delta = 0;
  int64_t total_fiberwise = 0;  // sum of per-fiber plane-model counts
  int64_t total_direct = 0;     // flat enumeration of the same set
  int64_t singular_total = 0;   // sum over fibers above the discriminant locus
  double inferred_trace = 0.0;  // (singular_total - p n_delta) / p
  int rounded = 0;
  bool crosscheck_run = false;
  bool crosscheck_pass = false;
};

// nsqrt[v] = #{y in F_p : y^2 = v}, built by squaring enumeration (not from
// the character table, so the census counts stay independent of it).
std::vector<uint8_t> sqrt_count_table(uint32_t p);

// Projective plane-model count of the fiber at t: affine points plus infinity
// bookkeeping (one point for odd x-degree, nsqrt[c_D(t)] for even). Valid for
// singular fibers; O(p) per fiber.
int64_t fiber_count_plane(const FamilyModP& fp, uint32_t t, const uint8_t* nsqrt);

// Fiberwise totals (character sums on good fibers, direct enumeration on
// singular ones), a flat Horner/nsqrt recount of the same set, and the
// singular census. Genus 1 only.
CensusReport census_at_prime(const FamilyModP& fp);

// Literal (t, x, y) triple loop; O(p^3), intended for small p.
int64_t total_count_triple_loop(const FamilyModP& fp);

// census_at_prime plus the triple-loop recount; throws MismatchBug on any
// discrepancy. Intended for p up to the crosscheck cutoff (default 101).
CensusReport lefschetz_crosscheck(const FamilyModP& fp);

// Only the singular-fiber part (cheap: O(n_delta p + p)).
CensusReport singular_census(const FamilyModP& fp);

enum class CensusStability { stable, unstable, insufficient_range };

struct CensusVerdict {
  std::vector<CensusReport> reports;
  CensusStability stability = CensusStability::insufficient_range;
  int stable_value = 0;  // meaningful when stable
};

// Reports per prime, ascending, with the stability verdict taken over the
// rounded inferred trace on the upper half of the range. Needs at least four
// primes for a verdict. `workers` parallelizes across primes; the output is
// independent of it.
CensusVerdict census_sweep(const HyperellipticFamily& fam, const std::vector<uint32_t>& good_primes,
                           unsigned workers = 1);

}  // namespace fibrank
