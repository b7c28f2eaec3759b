#include "fibrank/field.hpp"

#include <string>

namespace fibrank {

uint32_t pow_mod(uint32_t base, uint64_t exp, uint32_t p) {
  uint64_t acc = 1;
  uint64_t b = base % p;
  while (exp) {
    if (exp & 1) acc = acc * b % p;
    b = b * b % p;
    exp >>= 1;
  }
  return static_cast<uint32_t>(acc);
}

PrimeFieldCtx build_ctx(uint32_t p) {
  if (p == 2) raise(Errc::bad_prime, "p = 2: quadratic-character counting undefined");
  if (p < 2 || p % 2 == 0) raise(Errc::bad_prime, "p must be an odd prime: " + std::to_string(p));
  if (p >= (1u << 31)) raise(Errc::bad_prime, "p must fit in 31 bits");

  PrimeFieldCtx ctx;
  ctx.p = p;
  ctx.chi.assign(p, -1);
  ctx.chi[0] = 0;
  for (uint64_t v = 1; v <= (p - 1) / 2; ++v) ctx.chi[v * v % p] = 1;

  ctx.nonresidue = 0;
  for (uint32_t d = 2; d < p; ++d) {
    if (ctx.chi[d] == -1) {
      ctx.nonresidue = d;
      break;
    }
  }
  // p = 3 has nonresidue 2; every odd prime admits one.
  return ctx;
}

void ensure_cube_table(PrimeFieldCtx& ctx) {
  if (!ctx.cubes.empty()) return;
  ctx.cubes.resize(ctx.p);
  for (uint64_t x = 0; x < ctx.p; ++x)
    ctx.cubes[x] = static_cast<uint32_t>(x * x % ctx.p * x % ctx.p);
}

int fp2_count_sqrt_classes(const PrimeFieldCtx& ctx, const Fp2Elem& u) {
  if (u.a == 0 && u.b == 0) return 1;
  uint32_t n = fp2_norm(u, ctx.p, ctx.nonresidue);
  // N maps F_{p^2}^* onto F_p^*, and u is a square iff its norm is.
  return 1 + ctx.chi[n];
}

}  // namespace fibrank
