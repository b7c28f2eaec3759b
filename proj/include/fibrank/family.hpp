// A one-parameter hyperelliptic family y^2 = f(x,t) over Q and its reductions
// mod p: discriminant, bad-prime set, and per-prime singular-fiber tables.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fibrank/field.hpp"
#include "fibrank/poly.hpp"

namespace fibrank {

struct HyperellipticFamily {
  std::string name;
  int degree_x = 0;  // D in {3,4,5,6}
  int genus = 0;     // (D-1)/2
  std::vector<IntPoly> coeffs;  // size D+1; f(x,t) = sum coeffs[j](t) x^j
  bool trace_trivial_asserted = true;
  int ns_ak_rank_asserted = 1;
  std::optional<std::vector<IntPoly>> second_chart;  // coefficients near t = infinity
  IntPoly disc;  // disc_x f over Z[t]; nonzero for a valid family
};

// Parses the INI-style key=value config (keys: name, degree_x, coeff.<j>,
// optional trace_trivial, ns_ak_rank, chart2.coeff.<j>). Lines may carry
// '#'/';' comments. Throws MalformedConfig / DegenerateFamily.
std::map<std::string, std::string> parse_ini(const std::string& text);
HyperellipticFamily family_from_config(const std::map<std::string, std::string>& kv);
HyperellipticFamily parse_family(const std::string& config_text);

// Validates and completes a family assembled in code (corpus entries, tests).
HyperellipticFamily make_family(std::string name, std::vector<IntPoly> coeffs,
                                bool trace_trivial = true, int ns_ak_rank = 1);

inline const IntPoly& discriminant_poly(const HyperellipticFamily& fam) { return fam.disc; }

// Excluded primes up to x_max: always 2 and 3; primes dividing the content of
// the leading coefficient c_D(t) (identical degree drop); primes for which
// disc vanishes identically mod p; and every prime up to the largest prime
// dividing the leading coefficient of disc.
std::vector<uint32_t> bad_primes(const HyperellipticFamily& fam, uint64_t x_max);

struct FamilyModP {
  uint32_t p = 0;
  PrimeFieldCtx ctx;
  int degree_x = 0;
  int genus = 0;
  std::vector<std::vector<uint32_t>> coeff_tables;  // c_j mod p, ascending t powers
  std::vector<uint32_t> delta_roots;                // sorted; fiber singular or degree drop
  std::vector<uint8_t> singular_mask;               // size p
  uint32_t n_delta = 0;

  bool has_infinity_fiber = false;                  // second chart supplied
  std::array<uint32_t, 7> infinity_coeffs{};        // fiber polynomial at t = infinity
  bool infinity_singular = false;

  // out[0..degree_x] = coefficients of f(x, t) in F_p[x].
  void fiber_coeffs(uint32_t t, uint32_t* out) const;
  bool is_singular_at(uint32_t t) const { return singular_mask[t] != 0; }
};

// BadPrime if p is in the excluded set (pass the sorted result of bad_primes).
FamilyModP reduce_mod_p(const HyperellipticFamily& fam, uint32_t p,
                        const std::vector<uint32_t>& excluded);

// Squarefreeness of f in F_p[x], coefficients coeffs[0..deg] with
// coeffs[deg] != 0. An identically-zero derivative counts as non-squarefree.
bool fp_squarefree(const uint32_t* coeffs, int deg, uint32_t p);

}  // namespace fibrank
