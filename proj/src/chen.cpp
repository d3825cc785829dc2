#include "regulab/chen.hpp"

#include <cmath>

namespace regulab {

Form Form::monomial(int a, int b, cplx coef) {
  Form w;
  w.terms.push_back({coef, a, b, false});
  return w;
}

Form Form::dlog_f(cplx coef) {
  Form w;
  w.dlog = coef;
  return w;
}

Form Form::differential(const BiPoly& G) {
  Form w;
  w.exact = G;
  return w;
}

Form Form::operator+(const Form& o) const {
  Form w = *this;
  w.terms.insert(w.terms.end(), o.terms.begin(), o.terms.end());
  w.dlog += o.dlog;
  w.exact = w.exact + o.exact;
  return w;
}

Form Form::scaled(cplx s) const {
  Form w = *this;
  for (auto& t : w.terms) t.coef *= s;
  w.dlog *= s;
  w.exact = w.exact.scaled(s);
  return w;
}

Form Form::conjugate() const {
  if (dlog != cplx(0) || !exact.is_zero())
    throw unsupported_input("conjugate is defined for monomial forms only");
  Form w = *this;
  for (auto& t : w.terms) {
    t.coef = std::conj(t.coef);
    t.anti = !t.anti;
  }
  return w;
}

Form Form::times(const BiPoly& G) const {
  if (dlog != cplx(0) || !exact.is_zero())
    throw unsupported_input("polynomial multiples are defined for monomial forms only");
  Form w;
  for (auto& t : terms) {
    if (t.anti) throw unsupported_input("polynomial multiple of an antiholomorphic term");
    for (int i = 0; i <= G.deg_x(); ++i)
      for (int j = 0; j <= G.deg_y(); ++j) {
        cplx g = G.get(i, j);
        if (g != cplx(0)) w.terms.push_back({t.coef * g, t.a + i, t.b + j, false});
      }
  }
  return w;
}

NodeValues pullback(const FormContext& ctx, const Form& w, const Panel& p) {
  NodeValues out{};
  const Curve& c = *ctx.curve;
  bool has_exact = !w.exact.is_zero();
  BiPoly Gx, Gy;
  if (has_exact) {
    Gx = w.exact.dx();
    Gy = w.exact.dy();
  }
  for (int k = 0; k < kNodes; ++k) {
    cplx x = p.x[k], y = p.y[k], dx = p.dx[k];
    cplx acc = 0;
    for (auto& t : w.terms) {
      cplx m = std::pow(x, t.a) * std::pow(y, t.b) * dx;
      acc += t.anti ? t.coef * std::conj(m) : t.coef * m;
    }
    if (w.dlog != cplx(0)) {
      if (!ctx.f) throw unsupported_input("df/f requested without a function");
      acc += w.dlog * ctx.f->dlog_dx(c, x, y) * dx;
    }
    if (has_exact) acc += (Gx(x, y) + Gy(x, y) * c.dy_dx(x, y)) * dx;
    out[k] = acc;
  }
  return out;
}

namespace {

NodeValues mul(const NodeValues& a, const NodeValues& b) {
  NodeValues r;
  for (int k = 0; k < kNodes; ++k) r[k] = a[k] * b[k];
  return r;
}

real panel_error(const NodeValues& v) {
  real mag = 0;
  const auto& r = panel_rule();
  for (int k = 0; k < kNodes; ++k) mag += r.w[k] * std::abs(v[k]);
  real t = legendre_tail(v);
  return std::isfinite(t) ? t * mag : INFINITY;
}

}  // namespace

IntegralResult iterated_integral(const FormContext& ctx, const std::vector<Form>& forms,
                                 const SurfacePath& path) {
  if (forms.empty() || forms.size() > 3) throw shape_error("iterated integrals of length 1..3");
  IntegralResult res;
  res.panels = static_cast<int>(path.panels.size());
  cplx run1 = 0, run2 = 0;
  for (auto& p : path.panels) {
    NodeValues v1 = pullback(ctx, forms[0], p);
    res.error += panel_error(v1);
    if (forms.size() == 1) {
      res.value += panel_sum(v1);
      continue;
    }
    NodeValues v2 = pullback(ctx, forms[1], p);
    NodeValues F1 = panel_primitive(v1, run1);
    NodeValues g2 = mul(v2, F1);
    res.error += panel_error(g2);
    if (forms.size() == 2) {
      res.value += panel_sum(g2);
    } else {
      NodeValues v3 = pullback(ctx, forms[2], p);
      NodeValues F12 = panel_primitive(g2, run2);
      NodeValues g3 = mul(v3, F12);
      res.error += panel_error(g3);
      res.value += panel_sum(g3);
      run2 += panel_sum(g2);
    }
    run1 += panel_sum(v1);
  }
  return res;
}

RunningPrimitive running_primitive(const FormContext& ctx, const Form& w, const SurfacePath& path) {
  RunningPrimitive rp;
  cplx run = 0;
  for (auto& p : path.panels) {
    NodeValues v = pullback(ctx, w, p);
    rp.nodes.push_back(panel_primitive(v, run));
    run += panel_sum(v);
    rp.panel_end.push_back(run);
  }
  rp.total = run;
  return rp;
}

IntegralResult exact_form_reduction(Side side, const std::vector<NodeValues>& G, cplx G_start,
                                    cplx G_end, const FormContext& ctx, const Form& w,
                                    const SurfacePath& path) {
  if (G.size() != path.panels.size()) throw shape_error("function samples do not match the path");
  IntegralResult res;
  res.panels = static_cast<int>(path.panels.size());
  cplx plain = 0, weighted = 0;
  for (size_t i = 0; i < G.size(); ++i) {
    NodeValues v = pullback(ctx, w, path.panels[i]);
    NodeValues gv = mul(G[i], v);
    plain += panel_sum(v);
    weighted += panel_sum(gv);
    res.error += panel_error(v) * std::abs(G_start) + panel_error(gv);
  }
  res.value = side == Side::Left ? weighted - G_start * plain : G_end * plain - weighted;
  return res;
}

IntegralResult exact_form_reduction(Side side, const BiPoly& G, const FormContext& ctx,
                                    const Form& w, const SurfacePath& path) {
  std::vector<NodeValues> samples;
  for (auto& p : path.panels) {
    NodeValues v;
    for (int k = 0; k < kNodes; ++k) v[k] = G(p.x[k], p.y[k]);
    samples.push_back(v);
  }
  return exact_form_reduction(side, samples, G(path.x0, path.y0), G(path.x1, path.y1), ctx, w,
                              path);
}

LogBranch log_f_branch(const FormContext& ctx, const SurfacePath& path, cplx start_value) {
  if (!ctx.f) throw unsupported_input("log branch requested without a function");
  LogBranch lb;
  auto rp = running_primitive(ctx, Form::dlog_f(), path);
  cplx f0 = (*ctx.f)(path.x0, path.y0);
  cplx shift = std::log(f0) - start_value;
  for (size_t i = 0; i < rp.nodes.size(); ++i) {
    NodeValues v;
    for (int k = 0; k < kNodes; ++k) {
      v[k] = start_value + rp.nodes[i][k];
      cplx fv = (*ctx.f)(path.panels[i].x[k], path.panels[i].y[k]);
      lb.consistency = std::max(lb.consistency, std::abs(std::exp(v[k] + shift) / fv - cplx(1)));
    }
    lb.nodes.push_back(v);
  }
  lb.start = start_value;
  lb.end = start_value + rp.total;
  return lb;
}

LogBranch closed_log_f_branch(const FormContext& ctx, const SurfacePath& path, cplx start_value,
                              real tol) {
  if (!path.closed()) throw domain_error("log branch closure needs a closed path");
  auto lb = log_f_branch(ctx, path, start_value);
  real w = std::abs(lb.end - lb.start) / (2 * kPi);
  if (w > tol)
    throw domain_error("f winds " + std::to_string(static_cast<double>(w)) +
                       " times along the loop; the logarithm does not close");
  return lb;
}

real winding_number(const FormContext& ctx, const SurfacePath& path, real* defect) {
  cplx v = line_integral(ctx, Form::dlog_f(), path).value / kTwoPiI;
  if (defect) *defect = std::abs(v - std::round(v.real()));
  return v.real();
}

}  // namespace regulab
