#pragma once
// Exact and tolerance-based linear algebra used by the MHS kernel.
#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <vector>

#include "regulab/types.hpp"

namespace regulab {

using Z = boost::multiprecision::mpz_int;
using Q = boost::multiprecision::mpq_rational;

// Gaussian rational a + b i.
struct GQ {
  Q re, im;
  GQ() = default;
  GQ(int v) : re(v), im(0) {}
  GQ(Q r) : re(std::move(r)), im(0) {}
  GQ(Q r, Q i) : re(std::move(r)), im(std::move(i)) {}

  GQ& operator+=(const GQ& o) { re += o.re; im += o.im; return *this; }
  GQ& operator-=(const GQ& o) { re -= o.re; im -= o.im; return *this; }
  friend GQ operator+(GQ a, const GQ& b) { return a += b; }
  friend GQ operator-(GQ a, const GQ& b) { return a -= b; }
  friend GQ operator-(const GQ& a) { return GQ(-a.re, -a.im); }
  friend GQ operator*(const GQ& a, const GQ& b) {
    return GQ(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  friend GQ operator/(const GQ& a, const GQ& b) {
    Q n = b.re * b.re + b.im * b.im;
    if (n == 0) throw domain_error("division by zero in Q(i)");
    return GQ((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
  }
  GQ& operator*=(const GQ& o) { return *this = *this * o; }
  friend bool operator==(const GQ& a, const GQ& b) { return a.re == b.re && a.im == b.im; }
  cplx to_cplx() const {
    return {static_cast<real>(re.convert_to<long double>()),
            static_cast<real>(im.convert_to<long double>())};
  }
};

// Inexact complex scalar with a declared zero tolerance.
struct ApproxC {
  cplx v{0, 0};
  static inline real tol = 1e-10L;
  ApproxC() = default;
  ApproxC(int x) : v(static_cast<real>(x), 0) {}
  ApproxC(cplx x) : v(x) {}
  ApproxC(const Q& q) : v(static_cast<real>(q.convert_to<long double>()), 0) {}
  ApproxC(const GQ& g) : v(g.to_cplx()) {}
  ApproxC& operator+=(const ApproxC& o) { v += o.v; return *this; }
  ApproxC& operator-=(const ApproxC& o) { v -= o.v; return *this; }
  friend ApproxC operator+(ApproxC a, const ApproxC& b) { return a += b; }
  friend ApproxC operator-(ApproxC a, const ApproxC& b) { return a -= b; }
  friend ApproxC operator-(const ApproxC& a) { return ApproxC(-a.v); }
  friend ApproxC operator*(const ApproxC& a, const ApproxC& b) { return ApproxC(a.v * b.v); }
  friend ApproxC operator/(const ApproxC& a, const ApproxC& b) { return ApproxC(a.v / b.v); }
  ApproxC& operator*=(const ApproxC& o) { v *= o.v; return *this; }
  friend bool operator==(const ApproxC& a, const ApproxC& b) { return std::abs(a.v - b.v) <= tol; }
  cplx to_cplx() const { return v; }
};

inline bool is_zero(const Q& q) { return q == 0; }
inline bool is_zero(const GQ& g) { return g.re == 0 && g.im == 0; }
inline bool is_zero(const ApproxC& a) { return std::abs(a.v) <= ApproxC::tol; }
inline real pivot_weight(const Q&) { return 1; }
inline real pivot_weight(const GQ&) { return 1; }
inline real pivot_weight(const ApproxC& a) { return std::abs(a.v); }
inline Q conj(const Q& q) { return q; }
inline GQ conj(const GQ& g) { return GQ(g.re, -g.im); }
inline ApproxC conj(const ApproxC& a) { return ApproxC(std::conj(a.v)); }
inline cplx to_cplx(const Q& q) { return {static_cast<real>(q.convert_to<long double>()), 0}; }
inline cplx to_cplx(const GQ& g) { return g.to_cplx(); }
inline cplx to_cplx(const ApproxC& a) { return a.v; }

std::string to_string(const Q& q);
std::string to_string(const GQ& g);
Q parse_q(const std::string& s);
GQ parse_gq(const std::string& s);

template <class T>
struct Mat {
  int r = 0, c = 0;
  std::vector<T> a;
  Mat() = default;
  Mat(int rows, int cols) : r(rows), c(cols), a(static_cast<size_t>(rows) * cols, T(0)) {}
  T& operator()(int i, int j) { return a[static_cast<size_t>(i) * c + j]; }
  const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * c + j]; }
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  Mat col(int j) const {
    Mat m(r, 1);
    for (int i = 0; i < r; ++i) m(i, 0) = (*this)(i, j);
    return m;
  }
  Mat cols(const std::vector<int>& js) const {
    Mat m(r, static_cast<int>(js.size()));
    for (int i = 0; i < r; ++i)
      for (size_t k = 0; k < js.size(); ++k) m(i, static_cast<int>(k)) = (*this)(i, js[k]);
    return m;
  }
  Mat rows(const std::vector<int>& is) const {
    Mat m(static_cast<int>(is.size()), c);
    for (size_t k = 0; k < is.size(); ++k)
      for (int j = 0; j < c; ++j) m(static_cast<int>(k), j) = (*this)(is[k], j);
    return m;
  }
  Mat transpose() const {
    Mat m(c, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(j, i) = (*this)(i, j);
    return m;
  }
  friend Mat operator*(const Mat& x, const Mat& y) {
    if (x.c != y.r) throw shape_error("matrix product " + std::to_string(x.r) + "x" +
                                      std::to_string(x.c) + " * " + std::to_string(y.r) + "x" +
                                      std::to_string(y.c));
    Mat m(x.r, y.c);
    for (int i = 0; i < x.r; ++i)
      for (int k = 0; k < x.c; ++k) {
        if (is_zero_entry(x(i, k))) continue;
        for (int j = 0; j < y.c; ++j) m(i, j) += x(i, k) * y(k, j);
      }
    return m;
  }
  friend Mat operator+(Mat x, const Mat& y) {
    if (x.r != y.r || x.c != y.c) throw shape_error("matrix sum");
    for (size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
    return x;
  }
  friend Mat operator-(Mat x, const Mat& y) {
    if (x.r != y.r || x.c != y.c) throw shape_error("matrix difference");
    for (size_t i = 0; i < x.a.size(); ++i) x.a[i] -= y.a[i];
    return x;
  }
  friend Mat operator-(Mat x) {
    for (auto& v : x.a) v = -v;
    return x;
  }
  friend bool operator==(const Mat& x, const Mat& y) {
    if (x.r != y.r || x.c != y.c) return false;
    for (size_t i = 0; i < x.a.size(); ++i)
      if (!(x.a[i] == y.a[i])) return false;
    return true;
  }
  Mat scaled(const T& s) const {
    Mat m = *this;
    for (auto& v : m.a) v = v * s;
    return m;
  }

 private:
  static bool is_zero_entry(const T& v) {
    if constexpr (std::is_same_v<T, Z>) return v == 0;
    else return is_zero(v);
  }
};

using ZMat = Mat<Z>;
using QMat = Mat<Q>;

template <class K, class S>
Mat<K> convert(const Mat<S>& m) {
  Mat<K> o(m.r, m.c);
  for (size_t i = 0; i < m.a.size(); ++i) {
    if constexpr (std::is_same_v<S, Z>) o.a[i] = K(Q(m.a[i]));
    else o.a[i] = K(m.a[i]);
  }
  return o;
}

template <class T>
Mat<T> hcat(const Mat<T>& x, const Mat<T>& y) {
  if (x.c == 0) return y;
  if (y.c == 0) return x;
  if (x.r != y.r) throw shape_error("hcat rows differ");
  Mat<T> m(x.r, x.c + y.c);
  for (int i = 0; i < x.r; ++i) {
    for (int j = 0; j < x.c; ++j) m(i, j) = x(i, j);
    for (int j = 0; j < y.c; ++j) m(i, x.c + j) = y(i, j);
  }
  return m;
}

template <class T>
Mat<T> vcat(const Mat<T>& x, const Mat<T>& y) {
  if (x.r == 0) return y;
  if (y.r == 0) return x;
  if (x.c != y.c) throw shape_error("vcat cols differ");
  Mat<T> m(x.r + y.r, x.c);
  for (int i = 0; i < x.r; ++i)
    for (int j = 0; j < x.c; ++j) m(i, j) = x(i, j);
  for (int i = 0; i < y.r; ++i)
    for (int j = 0; j < x.c; ++j) m(x.r + i, j) = y(i, j);
  return m;
}

template <class T>
Mat<T> block_diag(const Mat<T>& x, const Mat<T>& y) {
  Mat<T> m(x.r + y.r, x.c + y.c);
  for (int i = 0; i < x.r; ++i)
    for (int j = 0; j < x.c; ++j) m(i, j) = x(i, j);
  for (int i = 0; i < y.r; ++i)
    for (int j = 0; j < y.c; ++j) m(x.r + i, x.c + j) = y(i, j);
  return m;
}

template <class K>
Mat<K> conj(const Mat<K>& m) {
  Mat<K> o = m;
  for (auto& v : o.a) v = conj(v);
  return o;
}

// Reduced row echelon form over a field; returns pivot columns.
template <class K>
Mat<K> rref(Mat<K> m, std::vector<int>* pivots = nullptr) {
  std::vector<int> piv;
  int row = 0;
  for (int col = 0; col < m.c && row < m.r; ++col) {
    int best = -1;
    real bw = 0;
    for (int i = row; i < m.r; ++i) {
      if (is_zero(m(i, col))) continue;
      real w = pivot_weight(m(i, col));
      if (best < 0 || w > bw) { best = i; bw = w; }
    }
    if (best < 0) continue;
    if (best != row)
      for (int j = 0; j < m.c; ++j) std::swap(m(row, j), m(best, j));
    K inv = K(1) / m(row, col);
    for (int j = 0; j < m.c; ++j) m(row, j) = m(row, j) * inv;
    for (int i = 0; i < m.r; ++i) {
      if (i == row || is_zero(m(i, col))) continue;
      K f = m(i, col);
      for (int j = 0; j < m.c; ++j) m(i, j) -= f * m(row, j);
    }
    piv.push_back(col);
    ++row;
  }
  // clean tiny residue rows for inexact fields
  for (int i = row; i < m.r; ++i)
    for (int j = 0; j < m.c; ++j) m(i, j) = K(0);
  if (pivots) *pivots = piv;
  return m;
}

template <class K>
int rank(const Mat<K>& m) {
  std::vector<int> p;
  rref(m, &p);
  return static_cast<int>(p.size());
}

// Columns spanning the null space.
template <class K>
Mat<K> kernel(const Mat<K>& m) {
  std::vector<int> piv;
  Mat<K> e = rref(m, &piv);
  std::vector<bool> is_piv(m.c, false);
  for (int p : piv) is_piv[p] = true;
  int nfree = m.c - static_cast<int>(piv.size());
  Mat<K> ker(m.c, nfree);
  int k = 0;
  for (int f = 0; f < m.c; ++f) {
    if (is_piv[f]) continue;
    ker(f, k) = K(1);
    for (size_t i = 0; i < piv.size(); ++i) ker(piv[i], k) = -e(static_cast<int>(i), f);
    ++k;
  }
  return ker;
}

// A particular solution of m x = b (b may have several columns).
template <class K>
std::optional<Mat<K>> solve(const Mat<K>& m, const Mat<K>& b) {
  if (m.r != b.r) throw shape_error("solve: rhs rows");
  std::vector<int> piv;
  Mat<K> e = rref(hcat(m, b), &piv);
  Mat<K> x(m.c, b.c);
  for (size_t i = 0; i < piv.size(); ++i) {
    if (piv[i] >= m.c) return std::nullopt;
    for (int j = 0; j < b.c; ++j) x(piv[i], j) = e(static_cast<int>(i), m.c + j);
  }
  // verify for inexact fields
  Mat<K> res = m * x - b;
  for (auto& v : res.a)
    if (!is_zero(v)) return std::nullopt;
  return x;
}

// Independent columns of m (a basis of its column space, chosen greedily).
template <class K>
Mat<K> colbasis(const Mat<K>& m) {
  std::vector<int> piv;
  rref(m, &piv);
  return m.cols(piv);
}

template <class K>
bool in_span(const Mat<K>& basis, const Mat<K>& v) {
  if (basis.c == 0) {
    for (auto& x : v.a)
      if (!is_zero(x)) return false;
    return true;
  }
  return rank(hcat(basis, v)) == rank(basis);
}

// Basis of the intersection of two column spans.
template <class K>
Mat<K> intersect(const Mat<K>& u, const Mat<K>& v) {
  if (u.c == 0 || v.c == 0) return Mat<K>(u.r, 0);
  Mat<K> ker = kernel(hcat(u, -v));
  Mat<K> top(u.c, ker.c);
  for (int i = 0; i < u.c; ++i)
    for (int j = 0; j < ker.c; ++j) top(i, j) = ker(i, j);
  Mat<K> w = u * top;
  if (w.c == 0) return w;
  return colbasis(w);
}

// Rows l with l * u = 0, spanning the annihilator of span(u).
template <class K>
Mat<K> annihilator(const Mat<K>& u, int n) {
  if (u.c == 0) return Mat<K>::identity(n);
  return kernel(u.transpose()).transpose();
}

template <class K>
Mat<K> inverse(const Mat<K>& m) {
  if (m.r != m.c) throw shape_error("inverse of non-square matrix");
  auto x = solve(m, Mat<K>::identity(m.r));
  if (!x) throw domain_error("singular matrix");
  return *x;
}

// ---- integer lattices ----

struct Smith {
  ZMat U, D, V;  // U * M * V = D, U and V unimodular
  int rank = 0;
};

Smith smith(const ZMat& m);
ZMat hnf(const ZMat& m);  // column-style Hermite form of the column lattice
std::optional<ZMat> integer_solve(const ZMat& m, const ZMat& b);
std::optional<ZMat> integer_solve(const QMat& m, const QMat& b);
ZMat integer_kernel(const ZMat& m);  // saturated basis, as columns
ZMat unimodular_inverse(const ZMat& m);
Z det(const ZMat& m);
bool is_unimodular(const ZMat& m);
QMat to_q(const ZMat& m);
std::optional<ZMat> to_z(const QMat& m);

}  // namespace regulab
