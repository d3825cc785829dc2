#include "regulab/exact.hpp"

#include <algorithm>

namespace regulab {

std::string to_string(const Q& q) { return q.str(); }

std::string to_string(const GQ& g) {
  if (g.im == 0) return to_string(g.re);
  std::string im = g.im == 1 ? "" : g.im == -1 ? "-" : to_string(g.im);
  if (g.re == 0) return im + "i";
  std::string s = to_string(g.re);
  if (g.im > 0) s += "+";
  return s + im + "i";
}

Q parse_q(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  if (s.empty()) throw Error("parse-error", "empty rational");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Z n(s.substr(0, slash)), d(s.substr(slash + 1));
    if (d == 0) throw Error("parse-error", "zero denominator in '" + raw + "'");
    return Q(n, d);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Q(Z(s));
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  size_t frac = s.size() - dot - 1;
  if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
  Z den = 1;
  for (size_t i = 0; i < frac; ++i) den *= 10;
  return Q(Z(digits), den);
}

GQ parse_gq(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw Error("parse-error", "empty Gaussian rational");
  if (s.back() != 'i') return GQ(parse_q(s));
  std::string body = s.substr(0, s.size() - 1);
  size_t split = std::string::npos;
  for (size_t k = body.size(); k-- > 1;)
    if (body[k] == '+' || body[k] == '-') { split = k; break; }
  auto imag_of = [](std::string t) -> Q {
    if (t.empty() || t == "+") return Q(1);
    if (t == "-") return Q(-1);
    return parse_q(t);
  };
  if (split == std::string::npos) return GQ(Q(0), imag_of(body));
  return GQ(parse_q(body.substr(0, split)), imag_of(body.substr(split)));
}

namespace {

void swap_rows(ZMat& m, int a, int b) {
  if (a == b) return;
  for (int j = 0; j < m.c; ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(ZMat& m, int a, int b) {
  if (a == b) return;
  for (int i = 0; i < m.r; ++i) std::swap(m(i, a), m(i, b));
}
// row_a -= q * row_b
void row_axpy(ZMat& m, int a, int b, const Z& q) {
  if (q == 0) return;
  for (int j = 0; j < m.c; ++j) m(a, j) -= q * m(b, j);
}
void col_axpy(ZMat& m, int a, int b, const Z& q) {
  if (q == 0) return;
  for (int i = 0; i < m.r; ++i) m(i, a) -= q * m(i, b);
}
Z floor_div(const Z& a, const Z& b) {
  Z q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

}  // namespace

Smith smith(const ZMat& m) {
  Smith s;
  s.D = m;
  s.U = ZMat::identity(m.r);
  s.V = ZMat::identity(m.c);
  ZMat& D = s.D;
  int n = std::min(m.r, m.c);
  int t = 0;
  for (; t < n; ++t) {
    int pi = -1, pj = -1;
    for (int i = t; i < D.r; ++i)
      for (int j = t; j < D.c; ++j)
        if (D(i, j) != 0 && (pi < 0 || abs(D(i, j)) < abs(D(pi, pj)))) { pi = i; pj = j; }
    if (pi < 0) break;
    swap_rows(D, t, pi);
    swap_rows(s.U, t, pi);
    swap_cols(D, t, pj);
    swap_cols(s.V, t, pj);
    for (;;) {
      bool changed = false;
      for (int i = t + 1; i < D.r; ++i) {
        if (D(i, t) == 0) continue;
        Z q = D(i, t) / D(t, t);
        row_axpy(D, i, t, q);
        row_axpy(s.U, i, t, q);
        if (D(i, t) != 0) {
          swap_rows(D, t, i);
          swap_rows(s.U, t, i);
          changed = true;
        }
      }
      for (int j = t + 1; j < D.c; ++j) {
        if (D(t, j) == 0) continue;
        Z q = D(t, j) / D(t, t);
        col_axpy(D, j, t, q);
        col_axpy(s.V, j, t, q);
        if (D(t, j) != 0) {
          swap_cols(D, t, j);
          swap_cols(s.V, t, j);
          changed = true;
        }
      }
      if (changed) continue;
      // divisibility of the remaining block
      bool fixed = false;
      for (int i = t + 1; i < D.r && !fixed; ++i)
        for (int j = t + 1; j < D.c && !fixed; ++j)
          if (D(i, j) % D(t, t) != 0) {
            for (int k = 0; k < D.c; ++k) D(t, k) += D(i, k);
            for (int k = 0; k < s.U.c; ++k) s.U(t, k) += s.U(i, k);
            fixed = true;
          }
      if (!fixed) break;
    }
    if (D(t, t) < 0) {
      for (int k = 0; k < D.c; ++k) D(t, k) = -D(t, k);
      for (int k = 0; k < s.U.c; ++k) s.U(t, k) = -s.U(t, k);
    }
  }
  s.rank = t;
  return s;
}

ZMat hnf(const ZMat& m) {
  ZMat H = m;
  int col = 0;
  for (int i = 0; i < H.r && col < H.c; ++i) {
    for (;;) {
      int best = -1;
      for (int j = col; j < H.c; ++j)
        if (H(i, j) != 0 && (best < 0 || abs(H(i, j)) < abs(H(i, best)))) best = j;
      if (best < 0) break;
      swap_cols(H, col, best);
      bool rest = false;
      for (int j = col + 1; j < H.c; ++j) {
        if (H(i, j) == 0) continue;
        col_axpy(H, j, col, floor_div(H(i, j), H(i, col)));
        if (H(i, j) != 0) rest = true;
      }
      if (!rest) break;
    }
    if (H(i, col) == 0) continue;
    if (H(i, col) < 0)
      for (int k = 0; k < H.r; ++k) H(k, col) = -H(k, col);
    for (int j = 0; j < col; ++j) col_axpy(H, j, col, floor_div(H(i, j), H(i, col)));
    ++col;
  }
  std::vector<int> keep;
  for (int j = 0; j < col; ++j) keep.push_back(j);
  return H.cols(keep);
}

std::optional<ZMat> integer_solve(const ZMat& m, const ZMat& b) {
  if (m.r != b.r) throw shape_error("integer_solve rhs rows");
  Smith s = smith(m);
  ZMat ub = s.U * b;
  ZMat y(m.c, b.c);
  for (int k = 0; k < b.c; ++k) {
    for (int i = 0; i < m.r; ++i) {
      if (i < s.rank) {
        if (ub(i, k) % s.D(i, i) != 0) return std::nullopt;
        y(i, k) = ub(i, k) / s.D(i, i);
      } else if (ub(i, k) != 0) {
        return std::nullopt;
      }
    }
  }
  return s.V * y;
}

std::optional<ZMat> integer_solve(const QMat& m, const QMat& b) {
  ZMat mz(m.r, m.c), bz(b.r, b.c);
  for (int i = 0; i < m.r; ++i) {
    Z l = 1;
    for (int j = 0; j < m.c; ++j) l = lcm(l, denominator(m(i, j)));
    for (int j = 0; j < b.c; ++j) l = lcm(l, denominator(b(i, j)));
    for (int j = 0; j < m.c; ++j) mz(i, j) = numerator(m(i, j) * Q(l));
    for (int j = 0; j < b.c; ++j) bz(i, j) = numerator(b(i, j) * Q(l));
  }
  return integer_solve(mz, bz);
}

ZMat integer_kernel(const ZMat& m) {
  Smith s = smith(m);
  std::vector<int> cols;
  for (int j = s.rank; j < m.c; ++j) cols.push_back(j);
  return s.V.cols(cols);
}

QMat to_q(const ZMat& m) {
  QMat q(m.r, m.c);
  for (size_t i = 0; i < m.a.size(); ++i) q.a[i] = Q(m.a[i]);
  return q;
}

std::optional<ZMat> to_z(const QMat& m) {
  ZMat z(m.r, m.c);
  for (size_t i = 0; i < m.a.size(); ++i) {
    if (denominator(m.a[i]) != 1) return std::nullopt;
    z.a[i] = numerator(m.a[i]);
  }
  return z;
}

ZMat unimodular_inverse(const ZMat& m) {
  auto z = to_z(inverse(to_q(m)));
  if (!z) throw domain_error("matrix is not unimodular");
  return *z;
}

Z det(const ZMat& m) {
  if (m.r != m.c) throw shape_error("det of non-square matrix");
  QMat q = to_q(m);
  Q d = 1;
  int n = m.r;
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (q(i, c) != 0) { p = i; break; }
    if (p < 0) return 0;
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(q(c, j), q(p, j));
      d = -d;
    }
    d *= q(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (q(i, c) == 0) continue;
      Q f = q(i, c) / q(c, c);
      for (int j = c; j < n; ++j) q(i, j) -= f * q(c, j);
    }
  }
  return numerator(d);
}

bool is_unimodular(const ZMat& m) {
  if (m.r != m.c) return false;
  Z d = det(m);
  return d == 1 || d == -1;
}

}  // namespace regulab
