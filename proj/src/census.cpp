#include "fibrank/census.hpp"

#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "fibrank/trace.hpp"

namespace fibrank {

std::vector<uint8_t> sqrt_count_table(uint32_t p) {
  std::vector<uint8_t> nsqrt(p, 0);
  for (uint64_t y = 0; y < p; ++y) nsqrt[y * y % p]++;
  return nsqrt;
}

namespace {

int64_t infinity_points(const FamilyModP& fp, const uint32_t* f, const uint8_t* nsqrt) {
  return fp.degree_x % 2 == 1 ? 1 : nsqrt[f[fp.degree_x]];
}

int64_t fiber_count_enumerated(const FamilyModP& fp, const uint32_t* f, const uint8_t* nsqrt) {
  int64_t affine = 0;
  fiber_walk(fp.ctx, f, fp.degree_x, [&](uint32_t v) { affine += nsqrt[v]; });
  return affine + infinity_points(fp, f, nsqrt);
}

}  // namespace

int64_t fiber_count_plane(const FamilyModP& fp, uint32_t t, const uint8_t* nsqrt) {
  uint32_t f[7];
  fp.fiber_coeffs(t, f);
  return fiber_count_enumerated(fp, f, nsqrt);
}

// Also valid for genus-2 families: the totals then count the curve-family
// surface y^2 = f(x,t) itself, which is what the fiberwise/direct equality
// checks. The inferred-trace interpretation stays genus-1.
CensusReport census_at_prime(const FamilyModP& fp) {
  const uint32_t p = fp.p;
  CensusReport rep;
  rep.p = p;
  rep.n_delta = fp.n_delta;

  std::vector<uint8_t> nsqrt = sqrt_count_table(p);
  uint32_t f[7];

  // Fiberwise side: character sums on good fibers, enumeration on singular.
  for (uint32_t t = 0; t < p; ++t) {
    fp.fiber_coeffs(t, f);
    if (fp.is_singular_at(t)) {
      int64_t n = fiber_count_enumerated(fp, f, nsqrt.data());
      rep.singular_total += n;
      rep.total_fiberwise += n;
    } else {
      rep.total_fiberwise += curve_count_fp_poly(fp.ctx, f, fp.degree_x);
    }
  }

  // Flat recount of the same set.
  for (uint32_t t = 0; t < p; ++t) {
    fp.fiber_coeffs(t, f);
    rep.total_direct += fiber_count_enumerated(fp, f, nsqrt.data());
  }

  rep.crosscheck_run = true;
  rep.crosscheck_pass = (rep.total_fiberwise == rep.total_direct);
  rep.inferred_trace =
      (static_cast<double>(rep.singular_total) - static_cast<double>(p) * rep.n_delta) / p;
  rep.rounded = static_cast<int>(std::nearbyint(rep.inferred_trace));
  return rep;
}

int64_t total_count_triple_loop(const FamilyModP& fp) {
  const uint32_t p = fp.p;
  int64_t total = 0;
  uint32_t f[7];
  for (uint32_t t = 0; t < p; ++t) {
    fp.fiber_coeffs(t, f);
    for (uint32_t x = 0; x < p; ++x) {
      uint64_t acc = 0;
      for (int j = fp.degree_x; j >= 0; --j) acc = (acc * x + f[j]) % p;
      for (uint64_t y = 0; y < p; ++y)
        if (y * y % p == acc) ++total;
    }
    if (fp.degree_x % 2 == 1) {
      ++total;
    } else {
      for (uint64_t y = 0; y < p; ++y)
        if (y * y % p == f[fp.degree_x]) ++total;
    }
  }
  return total;
}

CensusReport lefschetz_crosscheck(const FamilyModP& fp) {
  CensusReport rep = census_at_prime(fp);
  int64_t triple = total_count_triple_loop(fp);
  if (!rep.crosscheck_pass || triple != rep.total_fiberwise)
    raise(Errc::mismatch_bug, "fiberwise/direct totals disagree at p = " + std::to_string(fp.p) +
                                  ": fiberwise " + std::to_string(rep.total_fiberwise) +
                                  ", direct " + std::to_string(rep.total_direct) + ", triple " +
                                  std::to_string(triple));
  return rep;
}

CensusReport singular_census(const FamilyModP& fp) {
  if (fp.genus != 1) throw std::invalid_argument("census is defined for genus-1 families only");
  const uint32_t p = fp.p;
  CensusReport rep;
  rep.p = p;
  rep.n_delta = fp.n_delta;
  std::vector<uint8_t> nsqrt = sqrt_count_table(p);
  for (uint32_t t : fp.delta_roots) rep.singular_total += fiber_count_plane(fp, t, nsqrt.data());
  rep.inferred_trace =
      (static_cast<double>(rep.singular_total) - static_cast<double>(p) * rep.n_delta) / p;
  rep.rounded = static_cast<int>(std::nearbyint(rep.inferred_trace));
  return rep;
}

CensusVerdict census_sweep(const HyperellipticFamily& fam, const std::vector<uint32_t>& good_primes,
                           unsigned workers) {
  if (fam.genus != 1) throw std::invalid_argument("census is defined for genus-1 families only");
  CensusVerdict verdict;
  verdict.reports.resize(good_primes.size());

  if (workers < 1) workers = 1;
  std::atomic<size_t> next{0};
  auto work = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= good_primes.size()) break;
      // largest first: index from the back
      size_t idx = good_primes.size() - 1 - i;
      FamilyModP fp = reduce_mod_p(fam, good_primes[idx], {});
      verdict.reports[idx] = census_at_prime(fp);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  if (verdict.reports.size() < 4) {
    verdict.stability = CensusStability::insufficient_range;
    return verdict;
  }
  size_t half = verdict.reports.size() / 2;
  int value = verdict.reports[half].rounded;
  bool stable = true;
  for (size_t i = half; i < verdict.reports.size(); ++i)
    if (verdict.reports[i].rounded != value) stable = false;
  verdict.stability = stable ? CensusStability::stable : CensusStability::unstable;
  verdict.stable_value = value;
  return verdict;
}

}  // namespace fibrank
