// Prime-field context: quadratic-character table, F_p helpers, and a minimal
// F_{p^2} = F_p[sqrt(d)] layer used by the second-power point counts.
#pragma once

#include <cstdint>
#include <vector>

#include "fibrank/errors.hpp"

namespace fibrank {

inline uint32_t add_mod(uint32_t a, uint32_t b, uint32_t p) {
  uint32_t r = a + b;
  return r >= p ? r - p : r;
}

inline uint32_t sub_mod(uint32_t a, uint32_t b, uint32_t p) { return a >= b ? a - b : a + p - b; }

inline uint32_t mul_mod(uint32_t a, uint32_t b, uint32_t p) {
  return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p);
}

uint32_t pow_mod(uint32_t base, uint64_t exp, uint32_t p);

struct PrimeFieldCtx {
  uint32_t p = 0;
  std::vector<int8_t> chi;      // chi[u] = +1 for nonzero squares, -1 otherwise, 0 at 0
  uint32_t nonresidue = 0;      // least quadratic non-residue d, so F_{p^2} = F_p[sqrt(d)]
  std::vector<uint32_t> cubes;  // optional x^3 mod p table, see ensure_cube_table

  int8_t chi_at(uint32_t u) const { return chi[u]; }
};

// Builds the character table by marking v^2 for v = 1..(p-1)/2, then scanning
// for the least non-residue. p must be an odd prime; p = 2 is rejected
// (y^2-counting via the quadratic character is undefined there) and p must fit
// in 31 bits so that products stay inside 64-bit arithmetic.
PrimeFieldCtx build_ctx(uint32_t p);

void ensure_cube_table(PrimeFieldCtx& ctx);

// a + b*sqrt(d) with d = ctx.nonresidue.
struct Fp2Elem {
  uint32_t a = 0;
  uint32_t b = 0;
  bool operator==(const Fp2Elem&) const = default;
};

inline Fp2Elem fp2_add(const Fp2Elem& x, const Fp2Elem& y, uint32_t p) {
  return {add_mod(x.a, y.a, p), add_mod(x.b, y.b, p)};
}

inline Fp2Elem fp2_sub(const Fp2Elem& x, const Fp2Elem& y, uint32_t p) {
  return {sub_mod(x.a, y.a, p), sub_mod(x.b, y.b, p)};
}

inline Fp2Elem fp2_mul(const Fp2Elem& x, const Fp2Elem& y, uint32_t p, uint32_t d) {
  // (a1 + b1 s)(a2 + b2 s) = a1 a2 + d b1 b2 + (a1 b2 + a2 b1) s,  s^2 = d
  uint32_t aa = mul_mod(x.a, y.a, p);
  uint32_t bb = mul_mod(x.b, y.b, p);
  uint32_t ab = mul_mod(x.a, y.b, p);
  uint32_t ba = mul_mod(x.b, y.a, p);
  return {add_mod(aa, mul_mod(d, bb, p), p), add_mod(ab, ba, p)};
}

// Norm to F_p: N(a + b sqrt(d)) = a^2 - d b^2.
inline uint32_t fp2_norm(const Fp2Elem& x, uint32_t p, uint32_t d) {
  return sub_mod(mul_mod(x.a, x.a, p), mul_mod(d, mul_mod(x.b, x.b, p), p), p);
}

inline Fp2Elem fp2_frobenius(const Fp2Elem& x, uint32_t p) {
  return {x.a, x.b == 0 ? 0u : p - x.b};
}

// Number of y in F_{p^2} with y^2 = u: 2 for nonzero squares, 1 for u = 0,
// 0 otherwise. Decided through the norm identity chi_{p^2}(u) = chi_p(N(u)).
int fp2_count_sqrt_classes(const PrimeFieldCtx& ctx, const Fp2Elem& u);

}  // namespace fibrank
