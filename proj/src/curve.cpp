#include "regulab/curve.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cmath>
#include <limits>
#include <numeric>

namespace regulab {

namespace {

cplx principal_root(cplx z, int n) {
  if (z == cplx(0)) return 0;
  return std::exp(std::log(z) / static_cast<real>(n));
}

Series poly_series(const Poly& p, int terms) {
  Series s;
  s.a.assign(terms, 0);
  for (int k = 0; k < terms && k < static_cast<int>(p.c.size()); ++k) s.a[k] = p.c[k];
  return s;
}

}  // namespace

// ---------------------------------------------------------------- Curve

Curve Curve::superelliptic(int n, const Poly& p, std::string kind) {
  if (n < 2) throw unsupported_input("y-degree must be at least 2");
  if (p.degree() < 1) throw unsupported_input("p(x) must be non-constant");
  Curve c;
  c.kind_ = std::move(kind);
  c.n_ = n;
  c.p_ = p;
  c.F_ = BiPoly::y_power(n) - BiPoly::from_x(p);
  c.branch_ = roots(p);
  // squarefree: roots pairwise distinct and p' nonzero there
  Poly dp = p.derivative();
  real scale = 0;
  for (auto v : p.c) scale = std::max(scale, std::abs(v));
  for (size_t i = 0; i < c.branch_.size(); ++i) {
    if (std::abs(dp(c.branch_[i])) < 1e-8L * scale)
      throw unsupported_input("p(x) is not squarefree (repeated root near " +
                              std::to_string(static_cast<double>(c.branch_[i].real())) + ")");
  }
  int d = p.degree();
  int g0 = std::gcd(n, d);
  c.genus_ = ((n - 1) * (d - 1) + 1 - g0) / 2;
  return c;
}

Curve Curve::hyperelliptic(const Poly& p) { return superelliptic(2, p, "hyperelliptic"); }

Curve Curve::fermat(int N) {
  if (N < 3) throw unsupported_input("Fermat degree must be at least 3");
  std::vector<cplx> c(N + 1, 0);
  c[0] = 1;
  c[N] = -1;
  return superelliptic(N, Poly(c), "fermat");
}

int Curve::infinity_count() const { return std::gcd(n_, p_.degree()); }

std::vector<cplx> Curve::fiber(cplx x) const {
  cplx y0 = principal_root(p_(x), n_);
  std::vector<cplx> out;
  for (int k = 0; k < n_; ++k) out.push_back(y0 * root_of_unity(k, n_));
  return out;
}

cplx Curve::nearest_y(cplx x, cplx guess) const {
  auto f = fiber(x);
  return *std::min_element(f.begin(), f.end(), [&](cplx a, cplx b) {
    return std::abs(a - guess) < std::abs(b - guess);
  });
}

cplx Curve::dy_dx(cplx x, cplx y) const {
  return p_.derivative()(x) / (static_cast<real>(n_) * std::pow(y, n_ - 1));
}

int Curve::branch_index(cplx x, real tol) const {
  for (size_t i = 0; i < branch_.size(); ++i)
    if (std::abs(branch_[i] - x) <= tol * (1 + std::abs(x))) return static_cast<int>(i);
  return -1;
}

bool Curve::is_branch(cplx x, real tol) const { return branch_index(x, tol) >= 0; }

real Curve::residual(cplx x, cplx y) const { return std::abs(F_(x, y)); }

real Curve::min_branch_separation() const {
  real m = 1e300L;
  for (size_t i = 0; i < branch_.size(); ++i)
    for (size_t j = i + 1; j < branch_.size(); ++j) m = std::min(m, std::abs(branch_[i] - branch_[j]));
  return m;
}

std::vector<CurvePoint> Curve::points_over(cplx x) const {
  std::vector<CurvePoint> out;
  int b = branch_index(x, 1e-7L);
  if (b >= 0) {
    out.push_back({false, 0, branch_[b], 0, ""});
    return out;
  }
  for (cplx y : fiber(x)) out.push_back({false, 0, x, y, ""});
  return out;
}

std::vector<CurvePoint> Curve::infinity_points() const {
  std::vector<CurvePoint> out;
  for (int k = 0; k < infinity_count(); ++k) out.push_back({true, k, 0, 0, "inf" + std::to_string(k)});
  return out;
}

int Curve::ramification(const CurvePoint& pt) const {
  if (pt.infinite) return n_ / infinity_count();
  return is_branch(pt.x, 1e-7L) ? n_ : 1;
}

LocalChart Curve::chart(const CurvePoint& pt, int terms) const {
  LocalChart ch;
  int d = p_.degree();
  if (pt.infinite) {
    int g0 = infinity_count(), e = n_ / g0;
    ch.ramification = e;
    ch.x = Series::monomial(-e, terms);
    Series pt_series;
    pt_series.a.assign(terms, 0);
    for (int k = 0; k <= d; ++k) {
      int pos = e * (d - k);
      if (pos < terms) pt_series.a[pos] += p_.c[k];
    }
    cplx lead = principal_root(p_.c[d], n_) * root_of_unity(pt.branch, n_);
    Series root = series_root(pt_series, n_, lead);
    ch.y = Series::monomial(-d / g0, terms) * root;
    return ch;
  }
  int b = branch_index(pt.x, 1e-7L);
  if (b >= 0) {
    cplx x0 = branch_[b];
    ch.ramification = n_;
    ch.x = Series::monomial(0, terms);
    ch.x.a[0] = x0;
    if (n_ < terms) ch.x.a[n_] = 1;
    Poly sh = p_.shifted(x0);
    // q(t) = sh(t) / t; y = u * q(u^n)^(1/n)
    Series q;
    q.a.assign(terms, 0);
    for (int k = 1; k < static_cast<int>(sh.c.size()); ++k) {
      int pos = n_ * (k - 1);
      if (pos < terms) q.a[pos] = sh.c[k];
    }
    ch.y = Series::monomial(1, terms) * series_root(q, n_, principal_root(q.a[0], n_));
    return ch;
  }
  ch.ramification = 1;
  ch.x = Series::monomial(0, terms);
  ch.x.a[0] = pt.x;
  if (terms > 1) ch.x.a[1] = 1;
  Series ps = poly_series(p_.shifted(pt.x), terms);
  ch.y = series_root(ps, n_, pt.y);
  return ch;
}

bool Curve::same_point(const CurvePoint& a, const CurvePoint& b, real tol) const {
  if (a.infinite || b.infinite) return a.infinite && b.infinite && a.branch == b.branch;
  return std::abs(a.x - b.x) <= tol * (1 + std::abs(a.x)) &&
         std::abs(a.y - b.y) <= tol * (1 + std::abs(a.y));
}

// ---------------------------------------------------------------- functions

cplx RationalFunction::df_dx(const Curve& c, cplx x, cplx y) const {
  cplx yp = c.dy_dx(x, y);
  cplx n0 = num(x, y), d0 = den(x, y);
  cplx n1 = num.dx()(x, y) + num.dy()(x, y) * yp;
  cplx d1 = den.dx()(x, y) + den.dy()(x, y) * yp;
  return scale * (n1 * d0 - n0 * d1) / (d0 * d0);
}

cplx RationalFunction::dlog_dx(const Curve& c, cplx x, cplx y) const {
  cplx n0 = num(x, y), d0 = den(x, y);
  cplx n1 = num.dx()(x, y), d1 = den.dx()(x, y);
  if (depends_on_y()) {
    cplx yp = c.dy_dx(x, y);
    n1 += num.dy()(x, y) * yp;
    d1 += den.dy()(x, y) * yp;
  }
  return n1 / n0 - d1 / d0;
}

std::vector<Monomial> holomorphic_basis(const Curve& c) {
  std::vector<Monomial> out;
  if (c.kind() == "hyperelliptic") {
    for (int j = 0; j < c.genus(); ++j) out.push_back({j, -1});
  } else if (c.kind() == "fermat") {
    int N = c.n();
    for (int r = 1; r < N; ++r)
      for (int s = 1; r + s <= N - 1; ++s) out.push_back({r - 1, s - N});
  } else {
    throw unsupported_input("no holomorphic basis for curve kind " + c.kind());
  }
  if (static_cast<int>(out.size()) != c.genus())
    throw invariant_violation("holomorphic basis size differs from genus");
  return out;
}

namespace {

// Leading exponent of a chart series after rescaling the local parameter to
// the chart's radius of convergence, so that coefficient growth near other
// branch points does not swamp the low-order terms.
int scaled_order(const Curve& c, const CurvePoint& pt, const Series& s, real tol) {
  real r = 0;
  if (pt.infinite) {
    real far = 1;
    for (cplx e : c.branch_points()) far = std::max(far, std::abs(e));
    r = 1 / (2 * far);
  } else {
    r = std::numeric_limits<real>::infinity();
    for (cplx e : c.branch_points())
      if (std::abs(e - pt.x) > 1e-7L) r = std::min(r, std::abs(e - pt.x) / 2);
    if (!std::isfinite(r)) r = 1;
  }
  real rho = std::pow(r, 1.0L / c.ramification(pt));
  Series t = s;
  real w = 1;
  for (auto& a : t.a) {
    a *= w;
    w *= rho;
  }
  return t.order(tol);
}

}  // namespace

int form_order(const Curve& c, const Monomial& m, const CurvePoint& pt) {
  int terms = 24;
  LocalChart ch = c.chart(pt, terms);
  Series v = series_pow(ch.x, m.a) * series_pow(ch.y, m.b) * ch.x.derivative();
  return scaled_order(c, pt, v, 1e-9L);
}

// ---------------------------------------------------------------- divisors

namespace {

void add_entry(const Curve& c, std::vector<DivisorEntry>& out, const CurvePoint& pt, int ord) {
  for (auto& e : out)
    if (c.same_point(e.point, pt, 1e-6L)) {
      e.order += ord;
      return;
    }
  out.push_back({pt, ord});
}

}  // namespace

std::vector<DivisorEntry> divisor_of(const Curve& c, const BiPoly& g) {
  if (g.is_zero()) throw domain_error("divisor of the zero function");
  int n = c.n(), d = c.p().degree();
  int D = n * std::max(0, g.deg_x()) + std::max(0, g.deg_y()) * d;
  std::vector<DivisorEntry> out;
  if (D > 0) {
    int M = D + 1;
    std::vector<cplx> vals(M);
    for (int j = 0; j < M; ++j) {
      cplx x = root_of_unity(j, M);
      cplx v = 1;
      for (cplx y : c.fiber(x)) v *= g(x, y);
      vals[j] = v;
    }
    std::vector<cplx> coef(M);
    real mx = 0;
    for (int k = 0; k < M; ++k) {
      cplx s = 0;
      for (int j = 0; j < M; ++j) s += vals[j] * root_of_unity(-static_cast<long>(j) * k, M);
      coef[k] = s / static_cast<real>(M);
      mx = std::max(mx, std::abs(coef[k]));
    }
    for (auto& v : coef)
      if (std::abs(v) < 1e-12L * mx) v = 0;
    Poly norm(coef);
    if (norm.c.empty()) throw domain_error("function vanishes identically on the curve");
    // multiple roots split numerically; the cluster mean is well conditioned
    std::vector<std::vector<cplx>> clusters;
    for (cplx r : roots(norm)) {
      bool placed = false;
      for (auto& cl : clusters)
        if (std::abs(cl.front() - r) < 1e-3L * (1 + std::abs(r))) {
          cl.push_back(r);
          placed = true;
          break;
        }
      if (!placed) clusters.push_back({r});
    }
    std::vector<cplx> xs;
    for (auto& cl : clusters) {
      cplx m = std::accumulate(cl.begin(), cl.end(), cplx(0)) / static_cast<real>(cl.size());
      int b = c.branch_index(m, 1e-6L);
      xs.push_back(b >= 0 ? c.branch_points()[b] : m);
    }
    for (cplx x0 : xs)
      for (auto& pt : c.points_over(x0)) {
        LocalChart ch = c.chart(pt, D + 6);
        int ord = scaled_order(c, pt, compose(g, ch.x, ch.y), 1e-9L);
        if (ord == INT_MAX) throw domain_error("order computation failed at a zero");
        if (ord != 0) add_entry(c, out, pt, ord);
      }
  }
  for (auto& pt : c.infinity_points()) {
    LocalChart ch = c.chart(pt, D + 8);
    int ord = scaled_order(c, pt, compose(g, ch.x, ch.y), 1e-9L);
    if (ord != 0) add_entry(c, out, pt, ord);
  }
  int total = 0;
  for (auto& e : out) total += e.order;
  if (total != 0) throw invariant_violation("divisor of a polynomial has nonzero degree");
  return out;
}

std::vector<DivisorEntry> divisor_of(const Curve& c, const RationalFunction& f) {
  auto out = divisor_of(c, f.num);
  for (auto& e : divisor_of(c, f.den)) add_entry(c, out, e.point, -e.order);
  out.erase(std::remove_if(out.begin(), out.end(), [](const DivisorEntry& e) { return e.order == 0; }),
            out.end());
  return out;
}

DivisorCheck verify_divisor(const Curve& c, const RationalFunction& f, const CurvePoint& Q,
                            const CurvePoint& R) {
  auto div = divisor_of(c, f);
  if (div.empty()) throw domain_error("function has no zeros or poles; N is undefined");
  DivisorCheck out;
  out.support = div;
  int oq = 0, orr = 0;
  for (auto& e : div) {
    auto describe = [&]() {
      if (e.point.infinite) return std::string("point at infinity #") + std::to_string(e.point.branch);
      return "(" + std::to_string(static_cast<double>(e.point.x.real())) + "+" +
             std::to_string(static_cast<double>(e.point.x.imag())) + "i, " +
             std::to_string(static_cast<double>(e.point.y.real())) + "+" +
             std::to_string(static_cast<double>(e.point.y.imag())) + "i)";
    };
    if (c.same_point(e.point, Q, 1e-6L)) oq = e.order;
    else if (c.same_point(e.point, R, 1e-6L)) orr = e.order;
    else
      throw domain_error("divisor has support outside {Q, R}: order " + std::to_string(e.order) +
                         " at " + describe());
  }
  if (oq <= 0) throw domain_error("Q is not a zero of f");
  if (orr != -oq)
    throw domain_error("unequal orders: " + std::to_string(oq) + " at Q, " + std::to_string(orr) +
                       " at R");
  out.N = oq;
  out.zero = Q;
  out.pole = R;
  return out;
}

CurveModel make_model(const Curve& c, CurvePoint P, CurvePoint Q, CurvePoint R,
                      RationalFunction f, bool normalize) {
  for (CurvePoint* pt : {&P, &Q, &R}) {
    if (pt->infinite) continue;
    if (c.residual(pt->x, pt->y) > 1e-9L * (1 + std::abs(c.p()(pt->x))))
      throw domain_error("point " + pt->label + " is not on the curve");
  }
  if (c.same_point(P, Q) || c.same_point(P, R) || c.same_point(Q, R))
    throw domain_error("P, Q and R must be pairwise distinct");
  CurveModel m{c, P, Q, R, f, 0, normalize};
  auto check = verify_divisor(c, f, Q, R);
  m.N = check.N;
  if (!P.infinite) m.f_at_P = f(P.x, P.y);
  if (normalize) {
    if (P.infinite) throw unsupported_input("normalisation at a point at infinity");
    cplx v = m.f_at_P;
    if (v == cplx(0) || !std::isfinite(std::abs(v))) throw domain_error("f vanishes or blows up at P");
    m.f.scale = f.scale / v;
  }
  return m;
}

// ---------------------------------------------------------------- parsing

namespace {

struct ExprParser {
  std::string s;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char ch) {
    skip();
    if (i < s.size() && s[i] == ch) {
      ++i;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw Error("parse-error", msg + " at position " + std::to_string(i) + " in '" + s + "'");
  }
  static bool constant_value(const BiPoly& b, cplx& v) {
    for (size_t a = 0; a < b.c.size(); ++a)
      for (size_t k = 0; k < b.c[a].size(); ++k)
        if ((a > 0 || k > 0) && b.c[a][k] != cplx(0)) return false;
    v = b.get(0, 0);
    return true;
  }

  BiPoly expr() {
    skip();
    BiPoly acc;
    acc.c = {{0}};
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    BiPoly t = term();
    acc = neg ? acc - t : acc + t;
    for (;;) {
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else break;
    }
    return acc;
  }
  BiPoly term() {
    BiPoly acc = power();
    for (;;) {
      skip();
      if (eat('*')) {
        acc = acc * power();
      } else if (eat('/')) {
        BiPoly d = power();
        cplx v;
        if (!constant_value(d, v) || v == cplx(0)) fail("division by a non-constant or zero");
        acc = acc.scaled(cplx(1) / v);
      } else if (i < s.size() && (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '(')) {
        acc = acc * power();  // implicit product, e.g. 2x
      } else {
        break;
      }
    }
    return acc;
  }
  BiPoly power() {
    BiPoly b = atom();
    if (eat('^')) {
      skip();
      size_t st = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (st == i) fail("expected integer exponent");
      int e = std::stoi(s.substr(st, i - st));
      BiPoly r = BiPoly::constant(1);
      for (int k = 0; k < e; ++k) r = r * b;
      return r;
    }
    return b;
  }
  BiPoly atom() {
    skip();
    if (i >= s.size()) fail("unexpected end");
    char ch = s[i];
    if (ch == '(') {
      ++i;
      BiPoly e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      size_t st = i;
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E') && i + 1 < s.size() &&
          (std::isdigit(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '-' || s[i + 1] == '+')) {
        i += 2;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      real v = std::stold(s.substr(st, i - st));
      if (i < s.size() && s[i] == 'i' && (i + 1 >= s.size() || !std::isalpha(static_cast<unsigned char>(s[i + 1])))) {
        ++i;
        return BiPoly::constant(cplx(0, v));
      }
      return BiPoly::constant(v);
    }
    if (s.compare(i, 5, "zeta(") == 0) {
      i += 5;
      BiPoly e = expr();
      if (!eat(')')) fail("expected ')' after zeta argument");
      cplx v;
      if (!constant_value(e, v)) fail("zeta needs a constant argument");
      return BiPoly::constant(std::exp(cplx(0, 2 * kPi) * v));
    }
    if (s.compare(i, 2, "pi") == 0) {
      i += 2;
      return BiPoly::constant(kPi);
    }
    if (ch == 'x') {
      ++i;
      BiPoly b;
      b.at(1, 0) = 1;
      return b;
    }
    if (ch == 'y') {
      ++i;
      BiPoly b;
      b.at(0, 1) = 1;
      return b;
    }
    if (ch == 'i') {
      ++i;
      return BiPoly::constant(cplx(0, 1));
    }
    fail(std::string("unexpected character '") + ch + "'");
  }
};

}  // namespace

BiPoly parse_bipoly(const std::string& s) {
  ExprParser p{s};
  BiPoly b = p.expr();
  p.skip();
  if (p.i != s.size()) p.fail("trailing input");
  return b;
}

cplx parse_complex(const std::string& s) {
  BiPoly b = parse_bipoly(s);
  for (size_t a = 0; a < b.c.size(); ++a)
    for (size_t k = 0; k < b.c[a].size(); ++k)
      if ((a > 0 || k > 0) && b.c[a][k] != cplx(0))
        throw Error("parse-error", "expected a number, got an expression in x, y: '" + s + "'");
  return b.get(0, 0);
}

}  // namespace regulab
