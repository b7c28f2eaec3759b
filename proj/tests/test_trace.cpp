#include <doctest.h>

#include <algorithm>

#include "fibrank/primes.hpp"
#include "fibrank/runner.hpp"
#include "fibrank/trace.hpp"
#include "oracles.hpp"

using namespace fibrank;

namespace {

IntPoly P(std::vector<long long> c) {
  std::vector<BigInt> v(c.begin(), c.end());
  return IntPoly(std::move(v));
}

std::vector<uint32_t> fiber_vec(const FamilyModP& fp, uint32_t t) {
  uint32_t f[7];
  fp.fiber_coeffs(t, f);
  return std::vector<uint32_t>(f, f + fp.degree_x + 1);
}

}  // namespace

TEST_CASE("hand anchor: y^2 = x^3 + x + 1 at p = 5") {
  PrimeFieldCtx ctx = build_ctx(5);
  uint32_t f[4] = {1, 1, 0, 1};
  CHECK(curve_count_fp_poly(ctx, f, 3) == 9);

  // through a constant-in-t family: every fiber contributes a = -3
  HyperellipticFamily fam = make_family("const", {P({1}), P({1}), P({0}), P({1})});
  FamilyModP fp = reduce_mod_p(fam, 5, bad_primes(fam, 10));
  CHECK(fp.n_delta == 0);
  FiberTrace tr = fiber_trace(fp, 2);
  CHECK(tr.a == -3);
  CHECK(tr.b == 5);
  PrimeSummary s = fibral_averages(fp);
  CHECK(s.a_sum == -15);  // five identical fibers
  CHECK(s.a_avg() == -3.0);
}

TEST_CASE("hand anchor: y^2 = x^5 + x + 1 at p = 3") {
  PrimeFieldCtx ctx = build_ctx(3);
  uint32_t f[6] = {1, 1, 0, 0, 0, 1};
  CHECK(curve_count_fp_poly(ctx, f, 5) == 4);
  CHECK(curve_count_fp2_poly(ctx, f, 5) == 14);

  int64_t t1 = 3 + 1 - 4;
  int64_t t2 = 9 + 1 - 14;
  CHECK(t1 == 0);
  CHECK(t2 == -4);
  CHECK(b_from_h1(t1, t2, 3) == 2);

  // L-polynomial value at 1 equals the Jacobian order
  int64_t b = 2;
  int64_t order = 1 - t1 + b - 3 * t1 + 9;
  CHECK(order == 12);
  CHECK(oracles::mumford_jacobian_order(3, {1, 1, 0, 0, 0, 1}) == 12);
}

TEST_CASE("b_from_h1 basics") {
  CHECK(b_from_h1(0, 0, 7) == 0);
  CHECK_THROWS_AS(b_from_h1(0, 1, 7), Error);  // parity violation
}

TEST_CASE("zeta consistency on g2s fibers at p in {5, 7}") {
  HyperellipticFamily g2 = parse_family(corpus_config_text("g2s"));
  auto excluded = bad_primes(g2, 10);
  for (uint32_t p : {5u, 7u}) {
    FamilyModP fp = reduce_mod_p(g2, p, excluded);
    for (uint32_t t = 0; t < p; ++t) {
      if (fp.is_singular_at(t)) continue;
      FiberTrace tr = fiber_trace(fp, t);
      int64_t order = 1 - tr.a + tr.b - static_cast<int64_t>(p) * tr.a +
                      static_cast<int64_t>(p) * p;
      CHECK(oracles::mumford_jacobian_order(p, fiber_vec(fp, t)) ==
            static_cast<uint64_t>(order));
    }
  }
}

TEST_CASE("zeta consistency at p = 3 on the good g2s fibers") {
  // 3 is an excluded prime for whole-family runs, so drive the counting
  // kernels on the fiber polynomials directly. Good fibers mod 3 are t = 0
  // and t = 2 (the t = 1 fiber x^5 + x + 1 is not squarefree there).
  PrimeFieldCtx ctx = build_ctx(3);
  for (std::vector<uint32_t> f : {std::vector<uint32_t>{1, 0, 0, 0, 0, 1},
                                  std::vector<uint32_t>{1, 2, 0, 0, 0, 1}}) {
    REQUIRE(fp_squarefree(f.data(), 5, 3));
    int64_t t1 = 3 + 1 - curve_count_fp_poly(ctx, f.data(), 5);
    int64_t t2 = 9 + 1 - curve_count_fp2_poly(ctx, f.data(), 5);
    int64_t b = b_from_h1(t1, t2, 3);
    int64_t order = 1 - t1 + b - 3 * t1 + 9;
    CHECK(oracles::mumford_jacobian_order(3, f) == static_cast<uint64_t>(order));
  }
}

TEST_CASE("oracle equivalence: character path vs naive enumeration, p <= 47") {
  for (const char* name : {"legendre", "f1", "g2s"}) {
    HyperellipticFamily fam = parse_family(corpus_config_text(name));
    auto excluded = bad_primes(fam, 47);
    for (uint32_t p : sieve_primes(47)) {
      if (std::binary_search(excluded.begin(), excluded.end(), p)) continue;
      FamilyModP fp = reduce_mod_p(fam, p, excluded);
      for (uint32_t t = 0; t < p; ++t) {
        FiberTrace tr = fiber_trace(fp, t, /*compute_b=*/false);
        if (fp.is_singular_at(t)) {
          CHECK(tr.a == 0);
          CHECK(tr.b == 0);
          CHECK(tr.singular);
        } else {
          int64_t naive = oracles::naive_curve_count_fp(p, fiber_vec(fp, t));
          CHECK(tr.a == static_cast<int64_t>(p) + 1 - naive);
        }
      }
    }
  }
}

TEST_CASE("second-power counts vs naive F_{p^2} enumeration") {
  HyperellipticFamily g2 = parse_family(corpus_config_text("g2s"));
  auto excluded = bad_primes(g2, 20);
  for (uint32_t p : {5u, 7u, 11u}) {
    FamilyModP fp = reduce_mod_p(g2, p, excluded);
    uint32_t d = fp.ctx.nonresidue;
    for (uint32_t t = 0; t < p; ++t) {
      if (fp.is_singular_at(t)) continue;
      std::vector<uint32_t> f = fiber_vec(fp, t);
      CHECK(curve_count_fp2_poly(fp.ctx, f.data(), 5) ==
            oracles::naive_curve_count_fp2(p, d, f));
    }
  }
}

TEST_CASE("even-degree models: infinity bookkeeping on both counts") {
  // y^2 = x^6 + x + 3
  for (uint32_t p : {5u, 7u, 11u}) {
    PrimeFieldCtx ctx = build_ctx(p);
    std::vector<uint32_t> f = {3, 1, 0, 0, 0, 0, 1};
    CHECK(curve_count_fp_poly(ctx, f.data(), 6) == oracles::naive_curve_count_fp(p, f));
  }
  PrimeFieldCtx c3 = build_ctx(3);
  std::vector<uint32_t> f6 = {1, 1, 0, 0, 0, 0, 2};
  CHECK(curve_count_fp2_poly(c3, f6.data(), 6) ==
        oracles::naive_curve_count_fp2(3, c3.nonresidue, f6));
}

TEST_CASE("singular fibers: convention and errors") {
  HyperellipticFamily leg = parse_family(corpus_config_text("legendre"));
  FamilyModP fp = reduce_mod_p(leg, 5, bad_primes(leg, 10));
  FiberTrace tr = fiber_trace(fp, 0);
  CHECK(tr.singular);
  CHECK(tr.a == 0);
  CHECK(tr.b == 0);
  CHECK_THROWS_AS(curve_count_fp(fp, 0), Error);  // SingularFiber
  CHECK(curve_count_fp(fp, 2) > 0);
}

TEST_CASE("legendre p = 5 average over the three good fibers") {
  HyperellipticFamily leg = parse_family(corpus_config_text("legendre"));
  FamilyModP fp = reduce_mod_p(leg, 5, bad_primes(leg, 10));
  int64_t expect = 0;
  for (uint32_t t : {2u, 3u, 4u})
    expect += 5 + 1 - oracles::naive_curve_count_fp(5, fiber_vec(fp, t));
  PrimeSummary s = fibral_averages(fp);
  CHECK(s.a_sum == expect);
  CHECK(s.n_delta == 2);
  CHECK(s.n_ns == 3);
}

TEST_CASE("genus-1 second-cohomology identity: b_sum = p (p - n_delta)") {
  for (const char* name : {"legendre", "f1"}) {
    HyperellipticFamily fam = parse_family(corpus_config_text(name));
    auto excluded = bad_primes(fam, 200);
    for (uint32_t p : sieve_primes(200)) {
      if (std::binary_search(excluded.begin(), excluded.end(), p)) continue;
      PrimeSummary s = fibral_averages(reduce_mod_p(fam, p, excluded));
      CHECK(s.b_sum == static_cast<int64_t>(p) * (p - s.n_delta));
      CHECK(s.b_computed);
    }
  }
}

TEST_CASE("hasse-weil bounds hold and the bound helper is exact") {
  CHECK(hasse_weil_bound(1, 5) == 4);    // floor(2 sqrt 5)
  CHECK(hasse_weil_bound(1, 25) == 10);  // exact square
  CHECK(hasse_weil_bound(2, 3) == 6);    // floor(4 sqrt 3) = floor(6.92)
  HyperellipticFamily g2 = parse_family(corpus_config_text("g2s"));
  auto excluded = bad_primes(g2, 47);
  for (uint32_t p : sieve_primes(47)) {
    if (std::binary_search(excluded.begin(), excluded.end(), p)) continue;
    FamilyModP fp = reduce_mod_p(g2, p, excluded);
    int64_t hw = hasse_weil_bound(2, p);
    for (uint32_t t = 0; t < p; ++t) {
      FiberTrace tr = fiber_trace(fp, t);
      CHECK(std::abs(tr.a) <= hw);
      CHECK(std::abs(tr.b) <= 6 * static_cast<int64_t>(p));
    }
  }
}

TEST_CASE("skipping the second-power pass leaves b unknown") {
  HyperellipticFamily g2 = parse_family(corpus_config_text("g2s"));
  FamilyModP fp = reduce_mod_p(g2, 11, bad_primes(g2, 20));
  TraceOptions opt;
  opt.compute_b = false;
  PrimeSummary s = fibral_averages(fp, opt);
  CHECK(!s.b_computed);
  PrimeSummary full = fibral_averages(fp);
  CHECK(full.b_computed);
  CHECK(full.a_sum == s.a_sum);
}

TEST_CASE("determinism: repeated averaging is bit-identical") {
  HyperellipticFamily f1 = parse_family(corpus_config_text("f1"));
  FamilyModP fp = reduce_mod_p(f1, 101, bad_primes(f1, 200));
  PrimeSummary a = fibral_averages(fp);
  PrimeSummary b = fibral_averages(fp);
  CHECK(a.a_sum == b.a_sum);
  CHECK(a.b_sum == b.b_sum);
  CHECK(a.n_delta == b.n_delta);
}

TEST_CASE("infinity fiber from the second chart joins the averages") {
  std::string cfg =
      "name = with_inf\ndegree_x = 3\n"
      "coeff.0 = 0, 1\ncoeff.1 = 1\ncoeff.2 = 0\ncoeff.3 = 1\n"
      "chart2.coeff.0 = 1\nchart2.coeff.1 = 0, 1\nchart2.coeff.2 = 0\nchart2.coeff.3 = 1\n";
  HyperellipticFamily fam = parse_family(cfg);
  HyperellipticFamily affine_only = make_family("plain", fam.coeffs);
  uint32_t p = 13;
  FamilyModP with_inf = reduce_mod_p(fam, p, bad_primes(fam, 20));
  FamilyModP plain = reduce_mod_p(affine_only, p, bad_primes(affine_only, 20));
  PrimeSummary a = fibral_averages(with_inf);
  PrimeSummary b = fibral_averages(plain);
  // infinity fiber is y^2 = x^3 + 1
  uint32_t f[4] = {1, 0, 0, 1};
  int64_t a_inf = p + 1 - curve_count_fp_poly(with_inf.ctx, f, 3);
  CHECK(a.includes_infinity_fiber);
  CHECK(a.a_sum == b.a_sum + a_inf);
  CHECK(a.b_sum == b.b_sum + p);
}
