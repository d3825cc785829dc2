#include "regulab/path.hpp"

#include <algorithm>
#include <functional>

namespace regulab {

Panel Panel::reversed() const {
  Panel p;
  for (int k = 0; k < kNodes; ++k) {
    p.x[k] = x[kNodes - 1 - k];
    p.y[k] = y[kNodes - 1 - k];
    p.dx[k] = -dx[kNodes - 1 - k];
  }
  p.xa = xb;
  p.ya = yb;
  p.xb = xa;
  p.yb = ya;
  return p;
}

bool SurfacePath::closed(real tol) const {
  return std::abs(x1 - x0) <= tol * (1 + std::abs(x0)) &&
         std::abs(y1 - y0) <= tol * (1 + std::abs(y0));
}

SurfacePath SurfacePath::reversed() const {
  SurfacePath r;
  for (auto it = panels.rbegin(); it != panels.rend(); ++it) r.panels.push_back(it->reversed());
  r.x0 = x1;
  r.y0 = y1;
  r.x1 = x0;
  r.y1 = y0;
  return r;
}

void SurfacePath::append(const SurfacePath& other, real tol) {
  if (other.empty()) return;
  if (empty()) {
    *this = other;
    return;
  }
  if (std::abs(other.x0 - x1) > tol * (1 + std::abs(x1)) ||
      std::abs(other.y0 - y1) > tol * (1 + std::abs(y1)))
    throw invariant_violation("path pieces do not join");
  panels.insert(panels.end(), other.panels.begin(), other.panels.end());
  x1 = other.x1;
  y1 = other.y1;
}

std::vector<std::pair<cplx, cplx>> SurfacePath::polyline(int per_panel) const {
  std::vector<std::pair<cplx, cplx>> out;
  if (empty()) return out;
  out.emplace_back(x0, y0);
  for (auto& p : panels) {
    for (int k = 1; k < per_panel; ++k) {
      real s = static_cast<real>(k) / per_panel;
      out.emplace_back(panel_interpolate(p.x, s), panel_interpolate(p.y, s));
    }
    out.emplace_back(p.xb, p.yb);
  }
  return out;
}

SurfacePath concat(const std::vector<SurfacePath>& parts) {
  SurfacePath out;
  for (auto& p : parts) out.append(p);
  return out;
}

// ---------------------------------------------------------------- pieces

BasePiece BasePiece::reversed() const {
  BasePiece r = *this;
  switch (kind) {
    case Line:
      std::swap(r.a, r.b);
      break;
    case Arc:
      std::swap(r.theta0, r.theta1);
      break;
    case ToBranch:
      r.kind = FromBranch;
      break;
    case FromBranch:
      r.kind = ToBranch;
      break;
  }
  return r;
}

cplx BasePiece::start() const {
  switch (kind) {
    case Arc:
      return center + std::polar(radius, theta0);
    case FromBranch:
      return b;
    default:
      return a;
  }
}

cplx BasePiece::end() const {
  switch (kind) {
    case Arc:
      return center + std::polar(radius, theta1);
    case ToBranch:
      return b;
    default:
      return kind == Line ? b : a;
  }
}

BaseLoop reversed(const BaseLoop& l) {
  BaseLoop r;
  for (auto it = l.rbegin(); it != l.rend(); ++it) r.push_back(it->reversed());
  return r;
}

BaseLoop operator+(const BaseLoop& a, const BaseLoop& b) {
  BaseLoop r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

BaseLoop power(const BaseLoop& l, int k) {
  BaseLoop unit = k < 0 ? reversed(l) : l, r;
  for (int i = 0; i < std::abs(k); ++i) r = r + unit;
  return r;
}

namespace {

cplx principal_root(cplx z, int n) {
  if (z == cplx(0)) return 0;
  return std::exp(std::log(z) / static_cast<real>(n));
}

// y = h(t) * rho(t) with rho^n = target(t); rho is tracked continuously.
struct Param {
  std::function<cplx(real)> x, dxdt, h, target;
};

Param make_param(const Curve& c, const BasePiece& p) {
  Param q;
  const int n = c.n();
  const Poly& poly = c.p();
  switch (p.kind) {
    case BasePiece::Line: {
      cplx a = p.a, d = p.b - p.a;
      q.x = [=](real t) { return a + d * t; };
      q.dxdt = [=](real) { return d; };
      q.h = [](real) { return cplx(1); };
      q.target = [=](real t) { return poly(a + d * t); };
      break;
    }
    case BasePiece::Arc: {
      cplx c0 = p.center;
      real r = p.radius, t0 = p.theta0, dt = p.theta1 - p.theta0;
      q.x = [=](real t) { return c0 + std::polar(r, t0 + dt * t); };
      q.dxdt = [=](real t) { return kI * dt * std::polar(r, t0 + dt * t); };
      q.h = [](real) { return cplx(1); };
      q.target = [=](real t) { return poly(c0 + std::polar(r, t0 + dt * t)); };
      break;
    }
    case BasePiece::ToBranch:
    case BasePiece::FromBranch: {
      cplx e = p.b;
      cplx v0 = principal_root(p.a - e, n);
      // q(w) = p(e + w) / w
      Poly sh = poly.shifted(e);
      Poly quo(std::vector<cplx>(sh.c.begin() + 1, sh.c.end()));
      bool to = p.kind == BasePiece::ToBranch;
      auto v = [=](real t) { return v0 * (to ? 1 - t : t); };
      real sign = to ? -1 : 1;
      q.x = [=](real t) { return e + std::pow(v(t), n); };
      q.dxdt = [=](real t) { return sign * static_cast<real>(n) * std::pow(v(t), n - 1) * v0; };
      q.h = v;
      q.target = [=](real t) { return quo(std::pow(v(t), n)); };
      break;
    }
  }
  return q;
}

struct Tracer {
  const Curve& c;
  const Param& q;
  const TraceOptions& opt;
  std::vector<Panel> out;

  // rho at t continued from rho_prev; false if the step is too large
  bool step(real t, cplx rho_prev, cplx& rho) const {
    cplx target = q.target(t);
    cplx ratio = target / std::pow(rho_prev, c.n());
    if (!(std::abs(ratio - cplx(1)) < 0.5L)) return false;
    rho = rho_prev * principal_root(ratio, c.n());
    return true;
  }

  bool build(real ta, real tb, cplx rho_a, Panel& p, cplx& rho_b) const {
    const auto& r = panel_rule();
    NodeValues rho;
    cplx prev = rho_a;
    for (int k = 0; k < kNodes; ++k) {
      if (!step(ta + (tb - ta) * r.s[k], prev, rho[k])) return false;
      prev = rho[k];
    }
    if (!step(tb, prev, rho_b)) return false;
    NodeValues ydx, hol;
    std::vector<NodeValues> obst(opt.obstacles.size());
    for (int k = 0; k < kNodes; ++k) {
      real t = ta + (tb - ta) * r.s[k];
      p.x[k] = q.x(t);
      p.y[k] = q.h(t) * rho[k];
      p.dx[k] = q.dxdt(t) * (tb - ta);
      ydx[k] = p.y[k] * p.dx[k];
      hol[k] = p.dx[k] / std::pow(p.y[k], c.n() - 1);
      for (size_t o = 0; o < opt.obstacles.size(); ++o)
        obst[o][k] = p.dx[k] / (p.x[k] - opt.obstacles[o]);
    }
    if (legendre_tail(ydx) > opt.tail_tol || legendre_tail(hol) > opt.tail_tol) return false;
    for (auto& v : obst)
      if (legendre_tail(v) > opt.tail_tol) return false;
    p.xa = q.x(ta);
    p.ya = q.h(ta) * rho_a;
    p.xb = q.x(tb);
    p.yb = q.h(tb) * rho_b;
    return true;
  }

  cplx run(real ta, real tb, cplx rho_a, int depth) {
    Panel p;
    cplx rho_b;
    if (build(ta, tb, rho_a, p, rho_b)) {
      out.push_back(p);
      return rho_b;
    }
    if (depth >= opt.max_depth)
      throw convergence_error("path panel not resolved near x = " +
                              std::to_string(static_cast<double>(q.x(ta).real())) + "+" +
                              std::to_string(static_cast<double>(q.x(ta).imag())) + "i");
    real tm = (ta + tb) / 2;
    cplx rho_m = run(ta, tm, rho_a, depth + 1);
    return run(tm, tb, rho_m, depth + 1);
  }
};

}  // namespace

SurfacePath trace_piece(const Curve& c, const BasePiece& piece, cplx y0, const TraceOptions& opt,
                        cplx y_end_hint) {
  if (piece.kind == BasePiece::FromBranch) {
    BasePiece to = piece.reversed();
    return trace_piece(c, to, c.nearest_y(to.a, y_end_hint), opt).reversed();
  }
  Param q = make_param(c, piece);
  TraceOptions local = opt;
  if (piece.kind == BasePiece::ToBranch)
    std::erase_if(local.obstacles, [&](cplx o) { return std::abs(o - piece.b) < 1e-12L; });
  cplx rho0 = y0 / q.h(0);
  if (std::abs(std::pow(rho0, c.n()) - q.target(0)) > 1e-8L * (1 + std::abs(q.target(0))))
    throw invariant_violation("starting point is not on the curve");
  Tracer tr{c, q, local, {}};
  cplx rho1 = tr.run(0, 1, rho0, 0);
  SurfacePath path;
  path.panels = std::move(tr.out);
  path.x0 = q.x(0);
  path.y0 = y0;
  path.x1 = q.x(1);
  path.y1 = q.h(1) * rho1;
  if (piece.kind == BasePiece::ToBranch) path.x1 = piece.b;
  return path;
}

SurfacePath trace(const Curve& c, const BaseLoop& pieces, cplx y0, const TraceOptions& opt) {
  SurfacePath path;
  cplx y = y0;
  for (size_t i = 0; i < pieces.size(); ++i) {
    const auto& pc = pieces[i];
    SurfacePath part;
    if (pc.kind == BasePiece::FromBranch) {
      part = trace_piece(c, pc, 0, opt, i == 0 ? y0 : y);
    } else {
      part = trace_piece(c, pc, y, opt);
    }
    if (!path.empty()) part.x0 = path.x1;
    path.append(part);
    y = path.y1;
  }
  return path;
}

BaseLoop detoured_line(cplx a, cplx b, const std::vector<Disc>& discs) {
  cplx d = b - a;
  real len2 = std::norm(d);
  struct Hit {
    real t0, t1;
    const Disc* disc;
  };
  std::vector<Hit> hits;
  for (auto& disc : discs) {
    if (std::abs(a - disc.center) <= disc.radius || std::abs(b - disc.center) <= disc.radius)
      continue;
    // |a + t d - c|^2 = r^2
    cplx w = a - disc.center;
    real B = 2 * (w.real() * d.real() + w.imag() * d.imag());
    real C = std::norm(w) - disc.radius * disc.radius;
    real disc2 = B * B - 4 * len2 * C;
    if (disc2 <= 0) continue;
    real sq = std::sqrt(disc2);
    real t0 = (-B - sq) / (2 * len2), t1 = (-B + sq) / (2 * len2);
    if (t1 <= 0 || t0 >= 1) continue;
    hits.push_back({t0, t1, &disc});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.t0 < y.t0; });
  BaseLoop out;
  cplx cur = a;
  for (auto& h : hits) {
    cplx in = a + d * h.t0, outp = a + d * h.t1;
    if (std::abs(in - cur) > 0) out.push_back({BasePiece::Line, cur, in});
    BasePiece arc;
    arc.kind = BasePiece::Arc;
    arc.center = h.disc->center;
    arc.radius = h.disc->radius;
    arc.theta0 = std::arg(in - arc.center);
    real th1 = std::arg(outp - arc.center);
    while (th1 >= arc.theta0) th1 -= 2 * kPi;
    while (arc.theta0 - th1 > 2 * kPi) th1 += 2 * kPi;
    arc.theta1 = th1;
    out.push_back(arc);
    cur = arc.end();
  }
  out.push_back({BasePiece::Line, cur, b});
  return out;
}

BaseLoop lasso(cplx base, const Disc& target, const std::vector<Disc>& others, int turns) {
  cplx dir = (base - target.center) / std::abs(base - target.center);
  cplx entry = target.center + target.radius * dir;
  BaseLoop out = detoured_line(base, entry, others);
  BasePiece circle;
  circle.kind = BasePiece::Arc;
  circle.center = target.center;
  circle.radius = target.radius;
  circle.theta0 = std::arg(dir);
  circle.theta1 = circle.theta0 + 2 * kPi * turns;
  // close the arc exactly on the line end
  BaseLoop loop = out;
  loop.push_back(circle);
  BaseLoop back = reversed(out);
  return loop + back;
}

cplx continue_sheet(const Curve& c, const BaseLoop& loop, cplx y0) {
  TraceOptions opt;
  opt.tail_tol = 1e-10L;
  return trace(c, loop, y0, opt).y1;
}

}  // namespace regulab
