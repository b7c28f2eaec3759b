// Exact arithmetic in Z[t] plus the resultant/discriminant machinery used to
// validate families and locate their singular fibers.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

namespace fibrank {

using BigInt = boost::multiprecision::cpp_int;

// Polynomial over Z, ascending coefficients, no trailing zeros.
class IntPoly {
public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }
  static IntPoly constant(BigInt v);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<BigInt>& coeffs() const { return c_; }
  const BigInt& operator[](size_t i) const { return c_[i]; }
  const BigInt& leading() const { return c_.back(); }

  BigInt eval(const BigInt& x) const;
  BigInt content() const;  // gcd of coefficients, 0 for the zero polynomial

  bool operator==(const IntPoly&) const = default;

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a);

private:
  void trim();
  std::vector<BigInt> c_;
};

// Quotient of a by b, asserting the division is exact in Z[t].
IntPoly divide_exact(const IntPoly& a, const IntPoly& b);

// p(t + shift).
IntPoly taylor_shift(const IntPoly& p, const BigInt& shift);

// Resultant with respect to x of f = sum f_x[j] x^j and g = sum g_x[j] x^j,
// each coefficient living in Z[t]. Computed as a Sylvester determinant by
// fraction-free (Bareiss) elimination.
IntPoly resultant_x(const std::vector<IntPoly>& f_x, const std::vector<IntPoly>& g_x);

// disc_x f = (-1)^{D(D-1)/2} Res_x(f, df/dx) / lc_x(f) for D = deg_x f.
IntPoly discriminant_x(const std::vector<IntPoly>& f_x);

}  // namespace fibrank
