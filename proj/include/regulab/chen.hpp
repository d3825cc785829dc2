#pragma once
// Differential forms on the curve and Chen iterated integrals along panels.
// Convention: the first form is integrated first, i.e.
//   int w1 w2 = int_{0<=t1<=t2<=1} f1(t1) f2(t2) dt1 dt2.
#include <vector>

#include "regulab/path.hpp"

namespace regulab {

// coef * x^a y^b dx, or coef * conj(x^a y^b dx) when anti is set
struct FormTerm {
  cplx coef = 1;
  int a = 0, b = 0;
  bool anti = false;
};

struct Form {
  std::vector<FormTerm> terms;
  cplx dlog = 0;      // multiple of df/f
  BiPoly exact;       // plus dG for the polynomial G = exact

  static Form monomial(int a, int b, cplx coef = 1);
  static Form dlog_f(cplx coef = 1);
  static Form differential(const BiPoly& G);
  Form operator+(const Form& o) const;
  Form scaled(cplx s) const;
  Form conjugate() const;  // conj of the holomorphic/antiholomorphic terms only
  // G * w for the holomorphic terms (throws on anti, dlog or exact parts)
  Form times(const BiPoly& G) const;
};

// Everything needed to pull a form back to a panel.
struct FormContext {
  const Curve* curve = nullptr;
  const RationalFunction* f = nullptr;
};

NodeValues pullback(const FormContext& ctx, const Form& w, const Panel& p);

struct IntegralResult {
  cplx value = 0;
  real error = 0;
  int panels = 0;
};

// length 1..3
IntegralResult iterated_integral(const FormContext& ctx, const std::vector<Form>& forms,
                                 const SurfacePath& path);
inline IntegralResult line_integral(const FormContext& ctx, const Form& w,
                                    const SurfacePath& path) {
  return iterated_integral(ctx, {w}, path);
}

// Running primitive of w along the path, per panel at the nodes, starting at 0.
struct RunningPrimitive {
  std::vector<NodeValues> nodes;
  std::vector<cplx> panel_end;
  cplx total = 0;
};
RunningPrimitive running_primitive(const FormContext& ctx, const Form& w, const SurfacePath& path);

// Integral of G * w minus the boundary term, with G given by its node values
// along the path and its endpoint values:
//   left:  int dG w = int G w - G(start) int w
//   right: int w dG = G(end) int w - int G w
enum class Side { Left, Right };
IntegralResult exact_form_reduction(Side side, const std::vector<NodeValues>& G, cplx G_start,
                                    cplx G_end, const FormContext& ctx, const Form& w,
                                    const SurfacePath& path);
// Same with G a polynomial in x, y.
IntegralResult exact_form_reduction(Side side, const BiPoly& G, const FormContext& ctx,
                                    const Form& w, const SurfacePath& path);

// Continuous branch of log f along the path, equal to start_value at the
// start; built from the running primitive of df/f and cross-checked against
// the pointwise logarithm.
struct LogBranch {
  std::vector<NodeValues> nodes;
  cplx start = 0, end = 0;
  real consistency = 0;  // max |exp(log f) / f - 1|
};
LogBranch log_f_branch(const FormContext& ctx, const SurfacePath& path, cplx start_value = 0);
// Requires zero winding of f along the closed path.
LogBranch closed_log_f_branch(const FormContext& ctx, const SurfacePath& path,
                              cplx start_value = 0, real tol = 1e-6L);

// (1 / 2 pi i) int df/f
real winding_number(const FormContext& ctx, const SurfacePath& path, real* defect = nullptr);

}  // namespace regulab
