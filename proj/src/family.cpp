#include "fibrank/family.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "fibrank/primes.hpp"

namespace fibrank {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int64_t parse_int(const std::string& s, const std::string& where) {
  int64_t v = 0;
  auto first = s.data();
  auto last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    raise(Errc::malformed_config, where + ": not an integer: '" + s + "'");
  return v;
}

IntPoly parse_coeff_list(const std::string& s, const std::string& where) {
  std::vector<BigInt> c;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    std::string item = trim(s.substr(pos, comma == std::string::npos ? comma : comma - pos));
    if (item.empty()) raise(Errc::malformed_config, where + ": empty coefficient entry");
    c.emplace_back(parse_int(item, where));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return IntPoly(std::move(c));
}

bool parse_bool(const std::string& s, const std::string& where) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  raise(Errc::malformed_config, where + ": expected true/false, got '" + s + "'");
}

void validate_family(HyperellipticFamily& fam) {
  if (fam.degree_x < 3 || fam.degree_x > 6)
    raise(Errc::malformed_config, "degree_x must be in 3..6");
  if (static_cast<int>(fam.coeffs.size()) != fam.degree_x + 1)
    raise(Errc::malformed_config, "coefficient list must cover j = 0..degree_x");
  if (fam.coeffs[fam.degree_x].is_zero())
    raise(Errc::malformed_config, "leading coefficient c_D(t) is identically zero");
  if (fam.ns_ak_rank_asserted < 0) raise(Errc::malformed_config, "ns_ak_rank must be >= 0");
  fam.genus = (fam.degree_x - 1) / 2;
  fam.disc = discriminant_x(fam.coeffs);
  if (fam.disc.is_zero())
    raise(Errc::degenerate_family, "disc_x f vanishes identically: f is not squarefree over Q(t)");
  if (fam.second_chart) {
    const auto& c2 = *fam.second_chart;
    if (static_cast<int>(c2.size()) != fam.degree_x + 1)
      raise(Errc::malformed_config, "chart2 coefficient list must cover j = 0..degree_x");
    if (c2[fam.degree_x].is_zero())
      raise(Errc::malformed_config, "chart2 leading coefficient is identically zero");
  }
}

// Prime factors of |n| found by the given ascending prime list; returns the
// largest factor found and whether an unfactored cofactor > 1 remains.
struct FactorScan {
  std::vector<uint32_t> factors;
  uint32_t largest = 0;
  bool cofactor_remains = false;
};

FactorScan scan_factors(BigInt n, const std::vector<uint32_t>& primes) {
  FactorScan out;
  if (n < 0) n = -n;
  if (n <= 1) return out;
  for (uint32_t q : primes) {
    if (n % q == 0) {
      out.factors.push_back(q);
      out.largest = q;
      while (n % q == 0) n /= q;
    }
    if (n == 1) break;
    if (BigInt(q) * q > n) {
      // remaining cofactor is prime
      if (n > 1 && n <= primes.back()) {
        uint32_t r = static_cast<uint32_t>(n);
        out.factors.push_back(r);
        out.largest = std::max(out.largest, r);
        n = 1;
      }
      break;
    }
  }
  out.cofactor_remains = (n > 1);
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_ini(const std::string& text) {
  std::map<std::string, std::string> kv;
  size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
    ++lineno;
    size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      raise(Errc::malformed_config, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) raise(Errc::malformed_config, "line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key))
      raise(Errc::malformed_config, "duplicate key: " + key);
    kv[key] = value;
  }
  return kv;
}

HyperellipticFamily family_from_config(const std::map<std::string, std::string>& kv) {
  HyperellipticFamily fam;
  std::set<std::string> seen;
  auto take = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    seen.insert(key);
    return &it->second;
  };

  const std::string* name = take("name");
  if (!name || name->empty()) raise(Errc::malformed_config, "missing key: name");
  fam.name = *name;

  const std::string* deg = take("degree_x");
  if (!deg) raise(Errc::malformed_config, "missing key: degree_x");
  fam.degree_x = static_cast<int>(parse_int(*deg, "degree_x"));
  if (fam.degree_x < 3 || fam.degree_x > 6)
    raise(Errc::malformed_config, "degree_x must be in 3..6");

  fam.coeffs.resize(fam.degree_x + 1);
  for (int j = 0; j <= fam.degree_x; ++j) {
    std::string key = "coeff." + std::to_string(j);
    const std::string* v = take(key);
    if (!v) raise(Errc::malformed_config, "missing key: " + key);
    fam.coeffs[j] = parse_coeff_list(*v, key);
  }

  if (const std::string* v = take("trace_trivial"))
    fam.trace_trivial_asserted = parse_bool(*v, "trace_trivial");
  if (const std::string* v = take("ns_ak_rank"))
    fam.ns_ak_rank_asserted = static_cast<int>(parse_int(*v, "ns_ak_rank"));

  bool any_chart2 = false;
  for (const auto& [key, value] : kv)
    if (key.rfind("chart2.coeff.", 0) == 0) any_chart2 = true;
  if (any_chart2) {
    std::vector<IntPoly> c2(fam.degree_x + 1);
    for (int j = 0; j <= fam.degree_x; ++j) {
      std::string key = "chart2.coeff." + std::to_string(j);
      const std::string* v = take(key);
      if (!v) raise(Errc::malformed_config, "missing key: " + key);
      c2[j] = parse_coeff_list(*v, key);
    }
    fam.second_chart = std::move(c2);
  }

  for (const auto& [key, value] : kv)
    if (!seen.count(key)) raise(Errc::malformed_config, "unknown key: " + key);

  validate_family(fam);
  return fam;
}

HyperellipticFamily parse_family(const std::string& config_text) {
  return family_from_config(parse_ini(config_text));
}

HyperellipticFamily make_family(std::string name, std::vector<IntPoly> coeffs, bool trace_trivial,
                                int ns_ak_rank) {
  HyperellipticFamily fam;
  fam.name = std::move(name);
  fam.degree_x = static_cast<int>(coeffs.size()) - 1;
  fam.coeffs = std::move(coeffs);
  fam.trace_trivial_asserted = trace_trivial;
  fam.ns_ak_rank_asserted = ns_ak_rank;
  validate_family(fam);
  return fam;
}

std::vector<uint32_t> bad_primes(const HyperellipticFamily& fam, uint64_t x_max) {
  std::vector<uint32_t> primes = sieve_primes(x_max);
  std::set<uint32_t> bad = {2, 3};

  // Identical x-degree drop: p divides every coefficient of c_D(t).
  BigInt lead_content = fam.coeffs[fam.degree_x].content();
  for (uint32_t q : scan_factors(lead_content, primes).factors) bad.insert(q);

  // disc identically zero mod p.
  for (uint32_t q : scan_factors(fam.disc.content(), primes).factors) bad.insert(q);

  // Everything up to the largest prime dividing lc(disc): past that point the
  // reduction of disc keeps its t-degree, so root counts stay bounded by the
  // characteristic-zero degree. Vacuous when disc is constant in t.
  if (fam.disc.degree() >= 1) {
    FactorScan lc = scan_factors(fam.disc.leading(), primes);
    uint32_t cutoff = lc.largest;
    if (lc.cofactor_remains) cutoff = primes.empty() ? 0 : primes.back();
    for (uint32_t q : primes) {
      if (q > cutoff) break;
      bad.insert(q);
    }
  }

  std::vector<uint32_t> out(bad.begin(), bad.end());
  while (!out.empty() && out.back() > x_max) out.pop_back();
  return out;
}

bool fp_squarefree(const uint32_t* coeffs, int deg, uint32_t p) {
  if (deg <= 0) return true;
  // a = f, b = f'
  std::vector<uint32_t> a(coeffs, coeffs + deg + 1), b(deg);
  for (int j = 1; j <= deg; ++j) b[j - 1] = mul_mod(coeffs[j], j % p, p);
  while (!b.empty() && b.back() == 0) b.pop_back();
  if (b.empty()) return false;  // inseparable: f' = 0 with deg f >= 1

  // Euclid; degrees at most 6, so make-monic inversions are cheap.
  while (true) {
    int da = static_cast<int>(a.size()) - 1;
    int db = static_cast<int>(b.size()) - 1;
    if (da < db) {
      std::swap(a, b);
      continue;
    }
    uint32_t inv = pow_mod(b[db], p - 2, p);
    while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
      int shift = static_cast<int>(a.size()) - 1 - db;
      uint32_t q = mul_mod(a.back(), inv, p);
      for (int i = 0; i <= db; ++i) a[shift + i] = sub_mod(a[shift + i], mul_mod(q, b[i], p), p);
      while (!a.empty() && a.back() == 0) a.pop_back();
    }
    if (a.empty()) return db == 0;  // gcd = b
    if (static_cast<int>(a.size()) - 1 == 0) return true;  // gcd is a unit
    std::swap(a, b);
  }
}

void FamilyModP::fiber_coeffs(uint32_t t, uint32_t* out) const {
  for (int j = 0; j <= degree_x; ++j) {
    const auto& tbl = coeff_tables[j];
    uint64_t acc = 0;
    for (size_t i = tbl.size(); i-- > 0;) acc = (acc * t + tbl[i]) % p;
    out[j] = static_cast<uint32_t>(acc);
  }
}

FamilyModP reduce_mod_p(const HyperellipticFamily& fam, uint32_t p,
                        const std::vector<uint32_t>& excluded) {
  if (std::binary_search(excluded.begin(), excluded.end(), p))
    raise(Errc::bad_prime, "p = " + std::to_string(p) + " is an excluded prime for " + fam.name);

  FamilyModP fp;
  fp.p = p;
  fp.ctx = build_ctx(p);
  fp.degree_x = fam.degree_x;
  fp.genus = fam.genus;
  fp.coeff_tables.resize(fam.degree_x + 1);
  for (int j = 0; j <= fam.degree_x; ++j) {
    const auto& c = fam.coeffs[j].coeffs();
    auto& tbl = fp.coeff_tables[j];
    tbl.resize(c.size());
    for (size_t i = 0; i < c.size(); ++i)
      tbl[i] = static_cast<uint32_t>(static_cast<BigInt>(((c[i] % p) + p) % p));
    while (!tbl.empty() && tbl.back() == 0) tbl.pop_back();
  }

  fp.singular_mask.assign(p, 0);
  uint32_t f[7];
  for (uint32_t t = 0; t < p; ++t) {
    fp.fiber_coeffs(t, f);
    bool singular = (f[fp.degree_x] == 0) || !fp_squarefree(f, fp.degree_x, p);
    if (singular) {
      fp.singular_mask[t] = 1;
      fp.delta_roots.push_back(t);
    }
  }
  fp.n_delta = static_cast<uint32_t>(fp.delta_roots.size());

  if (fam.second_chart) {
    fp.has_infinity_fiber = true;
    const auto& c2 = *fam.second_chart;
    for (int j = 0; j <= fam.degree_x; ++j) {
      BigInt v = c2[j].coeffs().empty() ? BigInt(0) : c2[j].coeffs()[0];
      fp.infinity_coeffs[j] = static_cast<uint32_t>(static_cast<BigInt>(((v % p) + p) % p));
    }
    fp.infinity_singular = (fp.infinity_coeffs[fp.degree_x] == 0) ||
                           !fp_squarefree(fp.infinity_coeffs.data(), fp.degree_x, p);
  }
  return fp;
}

}  // namespace fibrank
