#pragma once
// Superelliptic models y^n = p(x) (hyperelliptic n = 2, Fermat y^N = 1 - x^N),
// marked points, rational functions and holomorphic differentials.
#include <optional>
#include <string>
#include <vector>

#include "regulab/poly.hpp"

namespace regulab {

struct CurvePoint {
  bool infinite = false;
  int branch = 0;  // index among the points at infinity
  cplx x = 0, y = 0;
  std::string label;
};

// Local parametrisation x(u), y(u) of a neighbourhood of a point.
struct LocalChart {
  Series x, y;
  int ramification = 1;  // e with x - x0 ~ u^e (or x ~ u^-e at infinity)
};

class Curve {
 public:
  static Curve hyperelliptic(const Poly& p);
  static Curve fermat(int N);
  static Curve superelliptic(int n, const Poly& p, std::string kind);

  const std::string& kind() const { return kind_; }
  int n() const { return n_; }
  const Poly& p() const { return p_; }
  const BiPoly& F() const { return F_; }  // y^n - p(x)
  int genus() const { return genus_; }
  const std::vector<cplx>& branch_points() const { return branch_; }
  int infinity_count() const;

  std::vector<cplx> fiber(cplx x) const;
  // the n-th root of p(x) closest to guess
  cplx nearest_y(cplx x, cplx guess) const;
  cplx dy_dx(cplx x, cplx y) const;
  bool is_branch(cplx x, real tol = 1e-9L) const;
  int branch_index(cplx x, real tol = 1e-9L) const;
  real residual(cplx x, cplx y) const;
  real min_branch_separation() const;

  std::vector<CurvePoint> points_over(cplx x) const;
  std::vector<CurvePoint> infinity_points() const;
  LocalChart chart(const CurvePoint& pt, int terms) const;
  bool same_point(const CurvePoint& a, const CurvePoint& b, real tol = 1e-7L) const;
  int ramification(const CurvePoint& pt) const;

 private:
  std::string kind_;
  int n_ = 2;
  Poly p_;
  BiPoly F_;
  int genus_ = 0;
  std::vector<cplx> branch_;
};

// f = scale * num / den
struct RationalFunction {
  BiPoly num, den;
  cplx scale = 1;
  cplx operator()(cplx x, cplx y) const { return scale * num(x, y) / den(x, y); }
  // (df/f)/dx along the curve
  cplx dlog_dx(const Curve& c, cplx x, cplx y) const;
  cplx df_dx(const Curve& c, cplx x, cplx y) const;
  bool depends_on_y() const { return num.deg_y() > 0 || den.deg_y() > 0; }
};

// x^a y^b dx
struct Monomial {
  int a = 0, b = 0;
};

std::vector<Monomial> holomorphic_basis(const Curve& c);
inline cplx eval_monomial(const Monomial& m, cplx x, cplx y) {
  return std::pow(x, m.a) * std::pow(y, m.b);
}

struct DivisorEntry {
  CurvePoint point;
  int order = 0;
};

std::vector<DivisorEntry> divisor_of(const Curve& c, const BiPoly& g);
std::vector<DivisorEntry> divisor_of(const Curve& c, const RationalFunction& f);

struct DivisorCheck {
  int N = 0;
  CurvePoint zero, pole;
  std::vector<DivisorEntry> support;
};
DivisorCheck verify_divisor(const Curve& c, const RationalFunction& f, const CurvePoint& Q,
                            const CurvePoint& R);

// ord of the differential x^a y^b dx at a point (>= 0 means regular)
int form_order(const Curve& c, const Monomial& m, const CurvePoint& pt);

// Curve plus marked points and the function with divisor N Q - N R.
struct CurveModel {
  Curve curve;
  CurvePoint P, Q, R;
  RationalFunction f;
  int N = 0;
  bool normalized = true;  // f(P) = 1
  cplx f_at_P = 1;         // value of the given f at P, before any rescaling
};

// Verifies div f = N Q - N R and, when normalize is set, rescales f so that
// f(P) = 1. Points given only by x pick y on the principal sheet unless y is
// supplied.
CurveModel make_model(const Curve& c, CurvePoint P, CurvePoint Q, CurvePoint R,
                      RationalFunction f, bool normalize = true);

// Parse "a/b", decimals, "x+yi", "zeta(k/n)" and sums thereof.
cplx parse_complex(const std::string& s);
// Polynomial expression in x, y with the same number syntax.
BiPoly parse_bipoly(const std::string& s);

}  // namespace regulab
