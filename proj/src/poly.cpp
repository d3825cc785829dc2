#include "regulab/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <climits>

namespace regulab {

void Poly::trim() {
  while (!c.empty() && c.back() == cplx(0)) c.pop_back();
}

cplx Poly::operator()(cplx x) const {
  cplx v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

Poly Poly::derivative() const {
  std::vector<cplx> d;
  for (size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<real>(k));
  return Poly(d);
}

Poly Poly::shifted(cplx x0) const {
  // Horner in the polynomial ring: q(u) = q(u) * (x0 + u) + c_k
  Poly out;
  Poly lin(std::vector<cplx>{x0, 1});
  for (auto it = c.rbegin(); it != c.rend(); ++it) out = out * lin + Poly(std::vector<cplx>{*it});
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.c.empty() || b.c.empty()) return Poly();
  std::vector<cplx> r(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
  return Poly(r);
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<cplx> r(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
  return Poly(r);
}

Poly operator-(const Poly& a, const Poly& b) {
  std::vector<cplx> r(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
  return Poly(r);
}

std::vector<cplx> roots(const Poly& p) {
  int n = p.degree();
  if (n < 1) return {};
  using CM = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
  CM comp = CM::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.c[i] / p.c[n];
  Eigen::ComplexEigenSolver<CM> es(comp, false);
  std::vector<cplx> r;
  Poly dp = p.derivative();
  for (int i = 0; i < n; ++i) {
    cplx z = es.eigenvalues()(i);
    for (int it = 0; it < 50; ++it) {
      cplx d = dp(z);
      if (std::abs(d) == 0) break;
      cplx step = p(z) / d;
      z -= step;
      if (std::abs(step) <= 1e-18L * (1 + std::abs(z))) break;
    }
    r.push_back(z);
  }
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) {
    if (std::abs(a.real() - b.real()) > 1e-12L) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return r;
}

// ---------------------------------------------------------------- BiPoly

BiPoly BiPoly::constant(cplx v) {
  BiPoly b;
  b.c = {{v}};
  return b;
}

BiPoly BiPoly::from_x(const Poly& p) {
  BiPoly b;
  for (auto v : p.c) b.c.push_back({v});
  if (b.c.empty()) b.c = {{0}};
  return b;
}

BiPoly BiPoly::y_power(int n) {
  BiPoly b;
  b.c = {std::vector<cplx>(n + 1, 0)};
  b.c[0][n] = 1;
  return b;
}

int BiPoly::deg_x() const {
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    for (auto v : c[i])
      if (v != cplx(0)) return i;
  return -1;
}

int BiPoly::deg_y() const {
  int d = -1;
  for (auto& row : c)
    for (int j = 0; j < static_cast<int>(row.size()); ++j)
      if (row[j] != cplx(0)) d = std::max(d, j);
  return d;
}

cplx BiPoly::operator()(cplx x, cplx y) const {
  cplx v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    cplx row = 0;
    for (auto jt = it->rbegin(); jt != it->rend(); ++jt) row = row * y + *jt;
    v = v * x + row;
  }
  return v;
}

cplx& BiPoly::at(int i, int j) {
  if (static_cast<int>(c.size()) <= i) c.resize(i + 1);
  if (static_cast<int>(c[i].size()) <= j) c[i].resize(j + 1, 0);
  return c[i][j];
}

cplx BiPoly::get(int i, int j) const {
  if (i < 0 || i >= static_cast<int>(c.size())) return 0;
  if (j < 0 || j >= static_cast<int>(c[i].size())) return 0;
  return c[i][j];
}

BiPoly BiPoly::dx() const {
  BiPoly b;
  for (size_t i = 1; i < c.size(); ++i)
    for (size_t j = 0; j < c[i].size(); ++j) b.at(i - 1, j) = c[i][j] * static_cast<real>(i);
  if (b.c.empty()) b.c = {{0}};
  return b;
}

BiPoly BiPoly::dy() const {
  BiPoly b;
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 1; j < c[i].size(); ++j) b.at(i, j - 1) = c[i][j] * static_cast<real>(j);
  if (b.c.empty()) b.c = {{0}};
  return b;
}

bool BiPoly::is_zero() const {
  for (auto& row : c)
    for (auto v : row)
      if (v != cplx(0)) return false;
  return true;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  BiPoly r;
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < a.c[i].size(); ++j) {
      if (a.c[i][j] == cplx(0)) continue;
      for (size_t k = 0; k < b.c.size(); ++k)
        for (size_t l = 0; l < b.c[k].size(); ++l) r.at(i + k, j + l) += a.c[i][j] * b.c[k][l];
    }
  if (r.c.empty()) r.c = {{0}};
  return r;
}

BiPoly operator+(const BiPoly& a, const BiPoly& b) {
  BiPoly r = a;
  for (size_t k = 0; k < b.c.size(); ++k)
    for (size_t l = 0; l < b.c[k].size(); ++l) r.at(k, l) += b.c[k][l];
  return r;
}

BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + b.scaled(-1); }

BiPoly BiPoly::scaled(cplx s) const {
  BiPoly r = *this;
  for (auto& row : r.c)
    for (auto& v : row) v *= s;
  return r;
}

BiPoly BiPoly::shifted(cplx x0, cplx y0) const {
  // expand (x0 + u)^i (y0 + v)^j with binomial coefficients
  BiPoly r;
  r.c = {{0}};
  int dx_ = static_cast<int>(c.size()), dy_ = 0;
  for (auto& row : c) dy_ = std::max(dy_, static_cast<int>(row.size()));
  auto binom_row = [](cplx z0, int n) {
    std::vector<cplx> out(n + 1);
    real b = 1;
    for (int k = 0; k <= n; ++k) {
      out[k] = b * std::pow(z0, n - k);
      b = b * (n - k) / (k + 1);
    }
    return out;
  };
  std::vector<std::vector<cplx>> bx(dx_), by(dy_);
  for (int i = 0; i < dx_; ++i) bx[i] = binom_row(x0, i);
  for (int j = 0; j < dy_; ++j) by[j] = binom_row(y0, j);
  for (int i = 0; i < dx_; ++i)
    for (int j = 0; j < static_cast<int>(c[i].size()); ++j) {
      if (c[i][j] == cplx(0)) continue;
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= j; ++l) r.at(k, l) += c[i][j] * bx[i][k] * by[j][l];
    }
  return r;
}

// ---------------------------------------------------------------- Series

Series Series::constant(cplx v, int n) {
  Series s;
  s.a.assign(n, 0);
  s.a[0] = v;
  return s;
}

Series Series::monomial(int power, int n) {
  Series s;
  s.val = power;
  s.a.assign(n, 0);
  s.a[0] = 1;
  return s;
}

Series operator+(const Series& x, const Series& y) {
  Series r;
  r.val = std::min(x.val, y.val);
  int end = std::min(x.val + x.size(), y.val + y.size());
  r.a.assign(std::max(0, end - r.val), 0);
  for (int k = 0; k < r.size(); ++k) {
    int e = r.val + k;
    if (e >= x.val && e - x.val < x.size()) r.a[k] += x.a[e - x.val];
    if (e >= y.val && e - y.val < y.size()) r.a[k] += y.a[e - y.val];
  }
  return r;
}

Series operator-(const Series& x, const Series& y) { return x + y.scaled(-1); }

Series operator*(const Series& x, const Series& y) {
  Series r;
  r.val = x.val + y.val;
  int n = std::min(x.size(), y.size());
  r.a.assign(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; i + j < n; ++j) r.a[i + j] += x.a[i] * y.a[j];
  return r;
}

Series Series::scaled(cplx s) const {
  Series r = *this;
  for (auto& v : r.a) v *= s;
  return r;
}

Series Series::derivative() const {
  Series r;
  r.val = val - 1;
  r.a.assign(a.size(), 0);
  for (int k = 0; k < size(); ++k) r.a[k] = a[k] * static_cast<real>(val + k);
  return r;
}

real Series::scale() const {
  real m = 0;
  for (auto v : a) m = std::max(m, std::abs(v));
  return m;
}

int Series::order(real tol) const {
  real s = scale();
  for (int k = 0; k < size(); ++k)
    if (std::abs(a[k]) > tol * std::max<real>(s, 1)) return val + k;
  return INT_MAX;
}

Series series_pow(const Series& x, int k) {
  if (k < 0) return series_pow(series_inverse(x), -k);
  Series r = Series::constant(1, x.size());
  for (int i = 0; i < k; ++i) r = r * x;
  return r;
}

Series series_inverse(const Series& x) {
  if (x.a.empty() || x.a[0] == cplx(0)) throw domain_error("series inverse of zero leading term");
  Series r;
  r.val = -x.val;
  int n = x.size();
  r.a.assign(n, 0);
  r.a[0] = cplx(1) / x.a[0];
  for (int k = 1; k < n; ++k) {
    cplx s = 0;
    for (int j = 1; j <= k; ++j) s += x.a[j] * r.a[k - j];
    r.a[k] = -s / x.a[0];
  }
  return r;
}

Series series_root(const Series& x, int n, cplx lead_root) {
  if (x.val % n != 0) throw domain_error("series root of non-divisible valuation");
  int m = x.size();
  std::vector<cplx> w(m);
  for (int k = 0; k < m; ++k) w[k] = x.a[k] / x.a[0];
  std::vector<cplx> s(m, 0);
  s[0] = 1;
  real inv_n = 1.0L / n;
  for (int k = 1; k < m; ++k) {
    cplx acc = 0;
    for (int j = 1; j <= k; ++j) acc += inv_n * static_cast<real>(j) * w[j] * s[k - j];
    for (int j = 1; j < k; ++j) acc -= static_cast<real>(k - j) * s[k - j] * w[j];
    s[k] = acc / static_cast<real>(k);
  }
  Series r;
  r.val = x.val / n;
  r.a.resize(m);
  for (int k = 0; k < m; ++k) r.a[k] = lead_root * s[k];
  return r;
}

Series compose(const Poly& p, const Series& s) {
  Series r = Series::constant(0, s.size());
  if (s.val < 0) {
    // sum of powers handles Laurent inputs
    Series pw = Series::constant(1, s.size());
    for (size_t k = 0; k < p.c.size(); ++k) {
      r = r + pw.scaled(p.c[k]);
      pw = pw * s;
    }
    return r;
  }
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) r = r * s + Series::constant(*it, s.size());
  return r;
}

Series compose(const BiPoly& p, const Series& x, const Series& y) {
  int n = std::min(x.size(), y.size());
  std::vector<Series> xp{Series::constant(1, n)}, yp{Series::constant(1, n)};
  for (int i = 1; i < static_cast<int>(p.c.size()); ++i) xp.push_back(xp.back() * x);
  int dy = p.deg_y();
  for (int j = 1; j <= dy; ++j) yp.push_back(yp.back() * y);
  Series r = Series::constant(0, n);
  bool first = true;
  for (size_t i = 0; i < p.c.size(); ++i)
    for (size_t j = 0; j < p.c[i].size(); ++j) {
      if (p.c[i][j] == cplx(0)) continue;
      Series t = (xp[i] * yp[j]).scaled(p.c[i][j]);
      r = first ? t : r + t;
      first = false;
    }
  return r;
}

}  // namespace regulab
