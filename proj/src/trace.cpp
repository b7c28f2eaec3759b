#include "fibrank/trace.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace fibrank {

namespace {

template <int D>
int64_t fp2_affine_walk(const PrimeFieldCtx& ctx, const uint32_t* A) {
  const uint32_t p = ctx.p;
  const uint32_t d = ctx.nonresidue;
  const int8_t* chi = ctx.chi.data();
  int64_t affine = 0;
  Fp2Elem w[D + 1];
  for (uint32_t b = 0; b < p; ++b) {
    // difference table along the a-direction of x = a + b sqrt(d)
    for (int i = 0; i <= D; ++i) {
      Fp2Elem x{static_cast<uint32_t>(i % p), b};
      Fp2Elem acc{0, 0};
      for (int j = D; j >= 0; --j) acc = fp2_add(fp2_mul(acc, x, p, d), Fp2Elem{A[j], 0}, p);
      w[i] = acc;
    }
    for (int k = 1; k <= D; ++k)
      for (int j = D; j >= k; --j) w[j] = fp2_sub(w[j], w[j - 1], p);

    for (uint32_t a = 0; a < p; ++a) {
      const Fp2Elem u = w[0];
      if (u.a == 0 && u.b == 0)
        affine += 1;
      else
        affine += 1 + chi[fp2_norm(u, p, d)];
      for (int k = 0; k < D; ++k) w[k] = fp2_add(w[k], w[k + 1], p);
    }
  }
  return affine;
}

int actual_degree(const uint32_t* coeffs, int deg) {
  while (deg > 0 && coeffs[deg] == 0) --deg;
  return deg;
}

}  // namespace

int64_t hasse_weil_bound(int genus, uint32_t p) {
  uint64_t n = 4ull * genus * genus * p;  // floor(2g sqrt p) = floor(sqrt(4 g^2 p))
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return static_cast<int64_t>(r);
}

int64_t chi_sum_poly(const PrimeFieldCtx& ctx, const uint32_t* coeffs, int deg) {
  const int8_t* chi = ctx.chi.data();
  int64_t s = 0;
  fiber_walk(ctx, coeffs, deg, [&](uint32_t v) { s += chi[v]; });
  return s;
}

int64_t curve_count_fp_poly(const PrimeFieldCtx& ctx, const uint32_t* coeffs, int deg) {
  int64_t affine = ctx.p + chi_sum_poly(ctx, coeffs, deg);
  int64_t eps = (deg % 2 == 1) ? 1 : 1 + ctx.chi[coeffs[deg]];
  return affine + eps;
}

int64_t curve_count_fp2_poly(const PrimeFieldCtx& ctx, const uint32_t* coeffs, int deg) {
  int64_t affine;
  switch (deg) {
    case 3: affine = fp2_affine_walk<3>(ctx, coeffs); break;
    case 4: affine = fp2_affine_walk<4>(ctx, coeffs); break;
    case 5: affine = fp2_affine_walk<5>(ctx, coeffs); break;
    case 6: affine = fp2_affine_walk<6>(ctx, coeffs); break;
    default: throw std::invalid_argument("unsupported x-degree " + std::to_string(deg));
  }
  // Every element of F_p^* is a square in F_{p^2}, so an even-degree model
  // always has two rational branches at infinity there (degree drops are
  // singular fibers and never reach this path).
  int64_t eps = (deg % 2 == 1) ? 1 : (coeffs[deg] == 0 ? 1 : 2);
  return affine + eps;
}

int64_t curve_count_fp(const FamilyModP& fp, uint32_t t) {
  if (fp.is_singular_at(t))
    raise(Errc::singular_fiber, "t = " + std::to_string(t) + " lies over the discriminant locus");
  uint32_t f[7];
  fp.fiber_coeffs(t, f);
  return curve_count_fp_poly(fp.ctx, f, fp.degree_x);
}

int64_t b_from_h1(int64_t t1, int64_t t2, uint32_t p) {
  int64_t num = t1 * t1 - t2;
  if (num % 2 != 0)
    raise(Errc::parity_violation, "t1^2 - t2 odd at p = " + std::to_string(p) +
                                      " (t1 = " + std::to_string(t1) +
                                      ", t2 = " + std::to_string(t2) + ")");
  int64_t b = num / 2;
  if (b > 6 * static_cast<int64_t>(p) || b < -6 * static_cast<int64_t>(p))
    raise(Errc::mismatch_bug, "|b| > 6p at p = " + std::to_string(p));
  return b;
}

namespace {

FiberTrace trace_from_coeffs(const FamilyModP& fp, uint32_t t, const uint32_t* f, bool singular,
                             bool compute_b) {
  FiberTrace out;
  out.t = t;
  if (singular) {
    out.singular = true;
    return out;
  }
  const uint32_t p = fp.p;
  int64_t count = curve_count_fp_poly(fp.ctx, f, fp.degree_x);
  out.a = static_cast<int64_t>(p) + 1 - count;
  int64_t hw = hasse_weil_bound(fp.genus, p);
  if (out.a > hw || out.a < -hw)
    raise(Errc::mismatch_bug, "Hasse-Weil violation at p = " + std::to_string(p) +
                                  ", t = " + std::to_string(t));
  if (fp.genus == 1) {
    out.b = p;
  } else if (compute_b) {
    int64_t count2 = curve_count_fp2_poly(fp.ctx, f, fp.degree_x);
    int64_t t2 = static_cast<int64_t>(p) * p + 1 - count2;
    out.b = b_from_h1(out.a, t2, p);
  } else {
    out.b_known = false;
  }
  return out;
}

}  // namespace

FiberTrace fiber_trace(const FamilyModP& fp, uint32_t t, bool compute_b) {
  uint32_t f[7];
  fp.fiber_coeffs(t, f);
  return trace_from_coeffs(fp, t, f, fp.is_singular_at(t), compute_b);
}

PrimeSummary fibral_averages(const FamilyModP& fp, const TraceOptions& opt) {
  auto started = std::chrono::steady_clock::now();
  PrimeSummary s;
  s.p = fp.p;
  s.n_delta = fp.n_delta;
  s.n_ns = fp.p - fp.n_delta;
  s.b_computed = (fp.genus == 1) || opt.compute_b;

  uint32_t f[7];
  for (uint32_t t = 0; t < fp.p; ++t) {
    if (fp.is_singular_at(t)) continue;
    fp.fiber_coeffs(t, f);
    FiberTrace tr = trace_from_coeffs(fp, t, f, false, s.b_computed);
    s.a_sum += tr.a;
    if (s.b_computed) s.b_sum += tr.b;
  }

  if (fp.has_infinity_fiber) {
    s.includes_infinity_fiber = true;
    if (!fp.infinity_singular) {
      FiberTrace tr =
          trace_from_coeffs(fp, fp.p, fp.infinity_coeffs.data(), false, s.b_computed);
      s.a_sum += tr.a;
      if (s.b_computed) s.b_sum += tr.b;
    }
  }

  s.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                           started)
                     .count();
  return s;
}

}  // namespace fibrank
