#pragma once
// Complex polynomials in one and two variables, and truncated power series.
#include <vector>

#include "regulab/types.hpp"

namespace regulab {

struct Poly {
  std::vector<cplx> c;  // c[k] x^k
  Poly() = default;
  explicit Poly(std::vector<cplx> coeffs) : c(std::move(coeffs)) { trim(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  cplx operator()(cplx x) const;
  Poly derivative() const;
  Poly shifted(cplx x0) const;  // p(x0 + u) as a polynomial in u
  void trim();
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
};

// Roots by companion-matrix eigenvalues followed by Newton polishing.
std::vector<cplx> roots(const Poly& p);

// sum c[i][j] x^i y^j
struct BiPoly {
  std::vector<std::vector<cplx>> c;
  BiPoly() = default;
  static BiPoly constant(cplx v);
  static BiPoly from_x(const Poly& p);
  static BiPoly y_power(int n);
  int deg_x() const;
  int deg_y() const;
  cplx operator()(cplx x, cplx y) const;
  BiPoly dx() const;
  BiPoly dy() const;
  BiPoly shifted(cplx x0, cplx y0) const;  // G(x0 + u, y0 + v)
  bool is_zero() const;
  cplx& at(int i, int j);
  cplx get(int i, int j) const;
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator+(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator-(const BiPoly& a, const BiPoly& b);
  BiPoly scaled(cplx s) const;
};

// Truncated Laurent series sum_{k} a[k] u^{val + k}, length = precision.
struct Series {
  int val = 0;
  std::vector<cplx> a;
  static Series constant(cplx v, int n);
  static Series monomial(int power, int n);  // u^power
  int size() const { return static_cast<int>(a.size()); }
  friend Series operator+(const Series& x, const Series& y);
  friend Series operator-(const Series& x, const Series& y);
  friend Series operator*(const Series& x, const Series& y);
  Series scaled(cplx s) const;
  Series derivative() const;
  // Leading exponent with |coefficient| > tol * scale, or INT_MAX if none.
  int order(real tol) const;
  real scale() const;
};

Series series_pow(const Series& x, int k);
Series series_inverse(const Series& x);
// x^(1/n) for x with nonzero leading coefficient and val divisible by n; the
// leading root is lead_root.
Series series_root(const Series& x, int n, cplx lead_root);
Series compose(const Poly& p, const Series& s);
Series compose(const BiPoly& p, const Series& x, const Series& y);

}  // namespace regulab
