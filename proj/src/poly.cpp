#include "fibrank/poly.hpp"

#include <stdexcept>

namespace fibrank {

namespace {

BigInt big_gcd(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt r = a % b;
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

IntPoly IntPoly::constant(BigInt v) {
  std::vector<BigInt> c;
  if (v != 0) c.push_back(std::move(v));
  return IntPoly(std::move(c));
}

void IntPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

BigInt IntPoly::eval(const BigInt& x) const {
  BigInt acc = 0;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

BigInt IntPoly::content() const {
  BigInt g = 0;
  for (const auto& v : c_) g = big_gcd(g, v);
  return g;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<BigInt> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return IntPoly(std::move(c));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
  std::vector<BigInt> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return IntPoly(std::move(c));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return IntPoly();
  std::vector<BigInt> c(a.c_.size() + b.c_.size() - 1, 0);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return IntPoly(std::move(c));
}

IntPoly operator-(const IntPoly& a) {
  std::vector<BigInt> c = a.c_;
  for (auto& v : c) v = -v;
  return IntPoly(std::move(c));
}

IntPoly divide_exact(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw std::invalid_argument("divide_exact: zero divisor");
  if (a.is_zero()) return IntPoly();
  if (a.degree() < b.degree()) throw std::invalid_argument("divide_exact: not divisible (degree)");

  std::vector<BigInt> rem = a.coeffs();
  std::vector<BigInt> quot(a.degree() - b.degree() + 1, 0);
  const auto& bc = b.coeffs();
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    BigInt top = rem[k + b.degree()];
    if (top % b.leading() != 0) throw std::invalid_argument("divide_exact: not divisible");
    BigInt q = top / b.leading();
    quot[k] = q;
    for (int i = 0; i <= b.degree(); ++i) rem[k + i] -= q * bc[i];
  }
  for (const auto& v : rem)
    if (v != 0) throw std::invalid_argument("divide_exact: nonzero remainder");
  return IntPoly(std::move(quot));
}

IntPoly taylor_shift(const IntPoly& p, const BigInt& shift) {
  // Horner in (t + shift).
  IntPoly acc;
  IntPoly lin(std::vector<BigInt>{shift, 1});
  for (size_t i = p.coeffs().size(); i-- > 0;) acc = acc * lin + IntPoly::constant(p.coeffs()[i]);
  return acc;
}

IntPoly resultant_x(const std::vector<IntPoly>& f_x, const std::vector<IntPoly>& g_x) {
  int m = static_cast<int>(f_x.size()) - 1;
  int n = static_cast<int>(g_x.size()) - 1;
  while (m >= 0 && f_x[m].is_zero()) --m;
  while (n >= 0 && g_x[n].is_zero()) --n;
  if (m < 0 || n < 0) return IntPoly();
  if (m == 0 && n == 0) return IntPoly::constant(1);

  const int N = m + n;
  std::vector<std::vector<IntPoly>> s(N, std::vector<IntPoly>(N));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k <= m; ++k) s[i][i + k] = f_x[m - k];
  for (int i = 0; i < m; ++i)
    for (int k = 0; k <= n; ++k) s[n + i][i + k] = g_x[n - k];

  // Fraction-free elimination; every division by the previous pivot is exact.
  int sign = 1;
  IntPoly prev = IntPoly::constant(1);
  for (int k = 0; k + 1 < N; ++k) {
    if (s[k][k].is_zero()) {
      int piv = -1;
      for (int i = k + 1; i < N; ++i)
        if (!s[i][k].is_zero()) {
          piv = i;
          break;
        }
      if (piv < 0) return IntPoly();
      std::swap(s[k], s[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < N; ++i) {
      for (int j = k + 1; j < N; ++j)
        s[i][j] = divide_exact(s[k][k] * s[i][j] - s[i][k] * s[k][j], prev);
      s[i][k] = IntPoly();
    }
    prev = s[k][k];
  }
  IntPoly det = s[N - 1][N - 1];
  return sign < 0 ? -det : det;
}

IntPoly discriminant_x(const std::vector<IntPoly>& f_x) {
  int d = static_cast<int>(f_x.size()) - 1;
  while (d >= 0 && f_x[d].is_zero()) --d;
  if (d < 1) throw std::invalid_argument("discriminant_x: degree < 1");

  std::vector<IntPoly> deriv(d);
  for (int j = 1; j <= d; ++j) deriv[j - 1] = IntPoly::constant(j) * f_x[j];

  IntPoly res = resultant_x(std::vector<IntPoly>(f_x.begin(), f_x.begin() + d + 1), deriv);
  IntPoly disc = divide_exact(res, f_x[d]);
  if ((static_cast<int64_t>(d) * (d - 1) / 2) % 2 == 1) disc = -disc;
  return disc;
}

}  // namespace fibrank
