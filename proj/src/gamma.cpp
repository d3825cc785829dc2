#include "regulab/gamma.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace regulab {

namespace {

cplx principal_root(cplx z, int n) {
  if (z == cplx(0)) return 0;
  return std::exp(std::log(z) / static_cast<real>(n));
}

// drop leading coefficients that vanish relative to the series scale
Series strip(const Series& s, real tol) {
  int ord = s.order(tol);
  if (ord == INT_MAX) throw domain_error("function vanishes identically in a chart");
  Series r;
  r.val = ord;
  r.a.assign(s.a.begin() + (ord - s.val), s.a.end());
  return r;
}

cplx eval(const Series& s, cplx u) {
  cplx acc = 0;
  for (int k = s.size() - 1; k >= 0; --k) acc = acc * u + s.a[k];
  return acc * std::pow(u, s.val);
}

real radius_estimate(const Series& s) {
  real r = 1e6L, big = s.scale();
  for (int k = s.size() / 2; k < s.size(); ++k) {
    real m = std::abs(s.a[k]);
    if (m <= 1e-30L * big || k == 0) continue;
    r = std::min(r, std::pow(m / std::abs(s.a[0]), -1.0L / k));
  }
  return r;
}

struct GammaPoint {
  cplx x, y, dxdt, u;
};

struct Tracer {
  const CurveModel& m;
  const EndpointChart& cq;
  const EndpointChart& cr;
  const GammaOptions& opt;
  const TraceOptions& topt;
  real ta, tb;  // chart switch parameters
  BiPoly nx, ny, dx_, dy_, Fx, Fy;

  Tracer(const CurveModel& model, const EndpointChart& q, const EndpointChart& r, const GammaOptions& o,
         const TraceOptions& to, real a, real b)
      : m(model), cq(q), cr(r), opt(o), topt(to), ta(a), tb(b) {
    nx = m.f.num.dx();
    ny = m.f.num.dy();
    dx_ = m.f.den.dx();
    dy_ = m.f.den.dy();
    Fx = m.curve.F().dx();
    Fy = m.curve.F().dy();
  }

  int N() const { return m.N; }
  real w(real t) const { return std::pow(t / (1 - t), N()); }
  real dw(real t) const { return N() * std::pow(t, N() - 1) / std::pow(1 - t, N() + 1); }
  real nu(real t) const { return std::pow((1 - t) / t, N()); }
  real dnu(real t) const { return -N() * std::pow(1 - t, N() - 1) / std::pow(t, N() + 1); }

  // region 0: chart at Q, 1: middle, 2: chart at R
  int region(real t) const { return t <= ta ? 0 : (t < tb ? 1 : 2); }

  bool chart_point(int reg, real t, cplx u_guess, GammaPoint& out) const {
    const EndpointChart& e = reg == 0 ? cq : cr;
    real target = reg == 0 ? w(t) : nu(t);
    cplx u = u_guess;
    if (!e.solve(target, u)) return false;
    out.u = u;
    out.x = e.x_at(u);
    out.y = e.y_at(u);
    real dtarget = reg == 0 ? dw(t) : dnu(t);
    out.dxdt = e.dx_du(u) * dtarget / e.dG_du(u);
    return true;
  }

  cplx tangent_scale(cplx x, cplx y, real t, cplx& fx_Fy_minus) const {
    cplx n0 = m.f.num(x, y), d0 = m.f.den(x, y);
    cplx fx = m.f.scale * (nx(x, y) * d0 - n0 * dx_(x, y)) / (d0 * d0);
    cplx fy = m.f.scale * (ny(x, y) * d0 - n0 * dy_(x, y)) / (d0 * d0);
    fx_Fy_minus = fx * Fy(x, y) - fy * Fx(x, y);
    return dw(t) / fx_Fy_minus;
  }

  void middle_derivative(cplx x, cplx y, real t, cplx& dx, cplx& dy) const {
    cplx det;
    cplx s = tangent_scale(x, y, t, det);
    dx = s * Fy(x, y);
    dy = -s * Fx(x, y);
  }

  // Newton on {F = 0, E = 0}
  bool middle_newton(real t, cplx& x, cplx& y) const {
    bool inverted = t >= 0.5L;
    real wt = inverted ? nu(t) : w(t);
    for (int it = 0; it < 50; ++it) {
      cplx F = m.curve.F()(x, y);
      cplx n0 = m.f.num(x, y), d0 = m.f.den(x, y);
      cplx E, Ex, Ey;
      if (!inverted) {
        E = m.f.scale * n0 - wt * d0;
        Ex = m.f.scale * nx(x, y) - wt * dx_(x, y);
        Ey = m.f.scale * ny(x, y) - wt * dy_(x, y);
      } else {
        E = m.f.scale * n0 * wt - d0;
        Ex = m.f.scale * nx(x, y) * wt - dx_(x, y);
        Ey = m.f.scale * ny(x, y) * wt - dy_(x, y);
      }
      cplx a = Fx(x, y), b = Fy(x, y);
      cplx det = a * Ey - b * Ex;
      if (det == cplx(0)) return false;
      cplx ddx = (F * Ey - b * E) / det;
      cplx ddy = (a * E - F * Ex) / det;
      x -= ddx;
      y -= ddy;
      if (std::abs(ddx) + std::abs(ddy) <= 1e-18L * (1 + std::abs(x) + std::abs(y))) return true;
    }
    return m.curve.residual(x, y) < 1e-14L * (1 + std::abs(y));
  }

  // advance a middle-region state from t0 to t1 with sub-steps
  bool middle_advance(real t0, real t1, cplx& x, cplx& y, int depth = 0) const {
    cplx dx, dy;
    middle_derivative(x, y, t0, dx, dy);
    real h = t1 - t0;
    cplx px = x + h * dx, py = y + h * dy;
    cplx nx0 = px, ny0 = py;
    bool ok = middle_newton(t1, nx0, ny0);
    real moved = std::abs(h) * (std::abs(dx) + std::abs(dy));
    real corr = std::abs(nx0 - px) + std::abs(ny0 - py);
    if (ok && corr <= 0.05L * moved + 1e-14L) {
      x = nx0;
      y = ny0;
      return true;
    }
    if (depth > 30) return false;
    real tm = (t0 + t1) / 2;
    return middle_advance(t0, tm, x, y, depth + 1) && middle_advance(tm, t1, x, y, depth + 1);
  }

  // state after reaching t; prev is the state at t_prev
  bool advance(real t_prev, const GammaPoint& prev, real t, GammaPoint& out) const {
    int r0 = region(t_prev), r1 = region(t);
    if (r1 == 0) {
      cplx guess = prev.u;
      // at t_prev = 0 the state's u holds the unit chart direction
      guess *= t_prev > 0 ? std::pow(w(t) / w(t_prev), 1.0L / N()) : t / (1 - t);
      return chart_point(0, t, guess, out);
    }
    if (r1 == 2) {
      cplx guess;
      if (r0 == 2) {
        guess = prev.u;
        if (t < 1 && t_prev < 1) guess *= std::pow(nu(t) / nu(t_prev), 1.0L / N());
      } else {
        // enter the R chart: choose the root whose chart image matches
        GammaPoint mid = prev;
        cplx x = mid.x, y = mid.y;
        if (!middle_advance(t_prev, t, x, y)) return false;
        cplx u0 = principal_root(nu(t) / cr.lead, N());
        real best = 1e300L;
        bool found = false;
        for (int k = 0; k < N(); ++k) {
          GammaPoint cand;
          if (!chart_point(2, t, u0 * root_of_unity(k, N()), cand)) continue;
          real d = std::abs(cand.x - x) + std::abs(cand.y - y);
          if (d < best) {
            best = d;
            out = cand;
            found = true;
          }
        }
        return found && best < 1e-8L * (1 + std::abs(x) + std::abs(y));
      }
      return chart_point(2, t, guess, out);
    }
    cplx x = prev.x, y = prev.y;
    if (!middle_advance(t_prev, t, x, y)) return false;
    out.x = x;
    out.y = y;
    out.u = 0;
    cplx dy;
    middle_derivative(x, y, t, out.dxdt, dy);
    return true;
  }

  bool build(real t0, real t1, const GammaPoint& start, Panel& p, GammaPoint& end) const {
    const auto& r = panel_rule();
    GammaPoint prev = start;
    real tp = t0;
    const int n = m.curve.n();
    NodeValues ydx, hol, dxv;
    std::vector<NodeValues> obst(topt.obstacles.size());
    for (int k = 0; k < kNodes; ++k) {
      real t = t0 + (t1 - t0) * r.s[k];
      GammaPoint cur;
      if (!advance(tp, prev, t, cur)) return false;
      p.x[k] = cur.x;
      p.y[k] = cur.y;
      p.dx[k] = cur.dxdt * (t1 - t0);
      dxv[k] = p.dx[k];
      ydx[k] = cur.y * p.dx[k];
      hol[k] = p.dx[k] / std::pow(cur.y, n - 1);
      for (size_t o = 0; o < topt.obstacles.size(); ++o)
        obst[o][k] = p.dx[k] / (cur.x - topt.obstacles[o]);
      prev = cur;
      tp = t;
    }
    if (t1 >= 1) {
      end = {m.R.x, m.R.y, 0, 0};
    } else if (!advance(tp, prev, t1, end)) {
      return false;
    }
    if (legendre_tail(dxv) > opt.tail_tol || legendre_tail(ydx) > opt.tail_tol ||
        legendre_tail(hol) > opt.tail_tol)
      return false;
    for (auto& v : obst)
      if (legendre_tail(v) > opt.tail_tol) return false;
    p.xa = start.x;
    p.ya = start.y;
    p.xb = end.x;
    p.yb = end.y;
    return true;
  }

  void run(real t0, real t1, const GammaPoint& start, GammaComponent& comp, GammaPoint& end,
           int depth) const {
    Panel p;
    if (build(t0, t1, start, p, end)) {
      comp.path.panels.push_back(p);
      comp.spans.emplace_back(t0, t1);
      return;
    }
    if (depth >= opt.max_depth)
      throw Error("tracing-error", "gamma not resolved near t = " +
                                       std::to_string(static_cast<double>(t0)) + ", x = " +
                                       std::to_string(static_cast<double>(start.x.real())) + "+" +
                                       std::to_string(static_cast<double>(start.x.imag())) + "i");
    real tm = (t0 + t1) / 2;
    GammaPoint mid;
    run(t0, tm, start, comp, mid, depth + 1);
    run(tm, t1, mid, comp, end, depth + 1);
  }
};

// t at which the chart variable reaches umax (leading-order estimate)
real switch_parameter(const EndpointChart& e, int N, bool at_R) {
  real wv = std::abs(e.lead) * std::pow(e.umax, N);  // |G| at |u| = umax
  real r = std::pow(wv, 1.0L / N);
  // at Q: w = (t/(1-t))^N = wv; at R: 1/w = wv
  return at_R ? 1 / (1 + r) : r / (1 + r);
}

}  // namespace

cplx EndpointChart::x_at(cplx u) const { return eval(x, u); }
cplx EndpointChart::y_at(cplx u) const { return eval(y, u); }
cplx EndpointChart::dx_du(cplx u) const { return eval(dx, u); }
cplx EndpointChart::dG_du(cplx u) const { return eval(dG, u); }
real EndpointChart::trusted_level() const { return std::abs(lead) * std::pow(umax, N) / 2; }

bool EndpointChart::solve(cplx target, cplx& u) const {
  for (int it = 0; it < 60; ++it) {
    cplx r = eval(G, u) - target;
    cplx d = eval(dG, u);
    if (d == cplx(0)) return false;
    cplx step = r / d;
    u -= step;
    if (std::abs(step) <= 1e-18L * (std::abs(u) + 1e-300L)) return true;
  }
  return std::abs(eval(G, u) - target) <= 1e-15L * std::abs(target);
}

EndpointChart endpoint_chart(const CurveModel& m, bool at_R, int terms, real fraction) {
  const Curve& c = m.curve;
  LocalChart ch = c.chart(at_R ? m.R : m.Q, terms);
  Series num = strip(compose(m.f.num, ch.x, ch.y), 1e-12L);
  Series den = strip(compose(m.f.den, ch.x, ch.y), 1e-12L);
  Series g = (num * series_inverse(den)).scaled(m.f.scale);
  if (at_R) g = series_inverse(g);
  g = strip(g, 1e-12L);
  if (g.val != m.N) throw invariant_violation("f does not have order N at the endpoint chart");
  EndpointChart e;
  e.x = ch.x;
  e.y = ch.y;
  e.G = g;
  e.dG = g.derivative();
  e.dx = ch.x.derivative();
  e.lead = g.a[0];
  e.N = m.N;
  real rho = std::min({radius_estimate(ch.x), radius_estimate(ch.y), radius_estimate(g)});
  e.umax = fraction * rho;
  return e;
}

cplx GammaComponent::coefficient(const FormContext& ctx, const Form& w, real t) const {
  auto it = std::upper_bound(spans.begin(), spans.end(), t,
                             [](real v, const std::pair<real, real>& s) { return v < s.first; });
  size_t idx = it == spans.begin() ? 0 : static_cast<size_t>(it - spans.begin()) - 1;
  idx = std::min(idx, spans.size() - 1);
  const auto& sp = spans[idx];
  NodeValues v = pullback(ctx, w, path.panels[idx]);
  return panel_interpolate(v, (t - sp.first) / (sp.second - sp.first)) / (sp.second - sp.first);
}

LevelSetGamma trace_gamma(const CurveModel& model, const GammaOptions& opt) {
  if (model.Q.infinite || model.R.infinite) throw unsupported_input("Q and R must be affine");
  EndpointChart cq = endpoint_chart(model, false, opt.series_terms, opt.chart_fraction);
  EndpointChart cr = endpoint_chart(model, true, opt.series_terms, opt.chart_fraction);
  const int N = model.N;
  real ta = switch_parameter(cq, N, false), tb = switch_parameter(cr, N, true);
  if (!(ta < tb)) {
    ta = std::min(ta, 0.4L);
    tb = std::max(tb, 0.6L);
  }
  TraceOptions topt;
  topt.tail_tol = opt.tail_tol;
  for (cplx b : model.curve.branch_points())
    if (std::abs(b - model.Q.x) > 1e-9L && std::abs(b - model.R.x) > 1e-9L)
      topt.obstacles.push_back(b);

  Tracer tr(model, cq, cr, opt, topt, ta, tb);
  LevelSetGamma out;
  cplx dir0 = principal_root(cplx(1) / cq.lead, N);
  std::vector<cplx> dirs;
  for (int k = 0; k < N; ++k) dirs.push_back(dir0 * root_of_unity(k, N));
  std::sort(dirs.begin(), dirs.end(), [](cplx a, cplx b) {
    auto key = [](cplx z) {
      real a = std::arg(z);
      return a < 0 ? a + 2 * kPi : a;
    };
    return key(a) < key(b);
  });
  // break points so no panel straddles a region change
  std::vector<real> breaks{0, ta, tb, 1};
  for (cplx d : dirs) {
    GammaComponent comp;
    comp.start_direction = d;
    GammaPoint cur{model.Q.x, model.Q.y, 0, 0};
    // u ~ d t near Q: seed the first chart Newton through the state's u
    cur.u = d * 1e-30L;
    for (size_t b = 0; b + 1 < breaks.size(); ++b) {
      GammaPoint start = cur;
      if (b == 0) {
        // chart Newton guesses scale u by (w(t)/w(t_prev))^(1/N); at t_prev = 0
        // fall back to the leading-order root directly
        start.u = d;
      }
      GammaPoint end;
      tr.run(breaks[b], breaks[b + 1], start, comp, end, 0);
      cur = end;
    }
    comp.path.x0 = model.Q.x;
    comp.path.y0 = model.Q.y;
    comp.path.x1 = model.R.x;
    comp.path.y1 = model.R.y;
    out.components.push_back(std::move(comp));
  }

  // diagnostics
  out.min_real_f = 1;
  out.min_separation = 1e300L;
  for (auto& comp : out.components) {
    for (auto& p : comp.path.panels)
      for (int k = 0; k < kNodes; ++k) {
        cplx v = model.f(p.x[k], p.y[k]);
        out.max_arg_f = std::max(out.max_arg_f, std::abs(std::arg(v)));
        out.min_real_f = std::min(out.min_real_f, v.real() / std::abs(v));
      }
    auto& first = comp.path.panels.front();
    auto& last = comp.path.panels.back();
    out.endpoint_error = std::max({out.endpoint_error, std::abs(first.xa - model.Q.x),
                                   std::abs(first.ya - model.Q.y), std::abs(last.xb - model.R.x),
                                   std::abs(last.yb - model.R.y)});
  }
  for (size_t a = 0; a < out.components.size(); ++a)
    for (size_t b = a + 1; b < out.components.size(); ++b) {
      auto pa = out.components[a].path.polyline(8), pb = out.components[b].path.polyline(8);
      for (size_t i = 1; i + 1 < pa.size(); ++i) {
        // skip points close to the shared endpoints
        if (std::abs(pa[i].first - model.Q.x) < 0.05L || std::abs(pa[i].first - model.R.x) < 0.05L)
          continue;
        for (size_t j = 1; j + 1 < pb.size(); ++j)
          out.min_separation =
              std::min(out.min_separation, std::abs(pa[i].first - pb[j].first) +
                                               std::abs(pa[i].second - pb[j].second));
      }
    }
  return out;
}

}  // namespace regulab
