#include "regulab/surface.hpp"

#include <algorithm>
#include <cmath>

namespace regulab {

namespace {

Poly x_slice(const BiPoly& p, int j) {
  std::vector<cplx> c;
  for (int i = 0; i <= p.deg_x(); ++i) c.push_back(p.get(i, j));
  return Poly(c);
}

Poly power(const Poly& p, int k) {
  Poly r({1});
  for (int i = 0; i < k; ++i) r = r * p;
  return r;
}

// sum of |c_ij x^i y^j|, the scale of rounding errors in evaluating p
real abs_eval(const BiPoly& p, cplx x, cplx y) {
  real acc = 0;
  for (int i = 0; i <= p.deg_x(); ++i)
    for (int j = 0; j <= p.deg_y(); ++j)
      acc += std::abs(p.get(i, j)) * std::pow(std::abs(x), i) * std::pow(std::abs(y), j);
  return acc;
}

cplx holomorphic_coefficient(const Form& w, cplx x, cplx y) {
  cplx acc = 0;
  for (auto& t : w.terms) {
    if (t.anti) throw domain_error("surface integrand expects holomorphic forms");
    acc += t.coef * std::pow(x, t.a) * std::pow(y, t.b);
  }
  return acc;
}

Error count_error(size_t found, int N) {
  return Error("numerical-error", "found " + std::to_string(found) +
                                      " preimages of a level value, expected " +
                                      std::to_string(N));
}

}  // namespace

LevelFibers::LevelFibers(const CurveModel& model)
    : m_(model), cq_(endpoint_chart(model, false)), cr_(endpoint_chart(model, true)) {
  nx_ = model.f.num.dx();
  ny_ = model.f.num.dy();
  dx_ = model.f.den.dx();
  dy_ = model.f.den.dy();
  Fx_ = model.curve.F().dx();
  Fy_ = model.curve.F().dy();
}

std::vector<FiberPoint> LevelFibers::operator()(cplx w) const {
  if (std::abs(w) < cq_.trusted_level()) return from_chart(cq_, w, false);
  if (1 / std::abs(w) < cr_.trusted_level()) return from_chart(cr_, cplx(1) / w, true);
  return from_elimination(w);
}

std::vector<FiberPoint> LevelFibers::from_chart(const EndpointChart& e, cplx target,
                                                bool at_R) const {
  const int N = e.N;
  cplx u0 = std::exp(std::log(target / e.lead) / static_cast<real>(N));
  std::vector<FiberPoint> out;
  std::vector<cplx> us;
  for (int k = 0; k < N; ++k) {
    cplx u = u0 * root_of_unity(k, N);
    if (!e.solve(target, u)) continue;
    bool dup = false;
    for (cplx v : us)
      if (std::abs(v - u) < 1e-6L * std::abs(u0)) dup = true;
    if (dup) continue;
    us.push_back(u);
    // df/du = G' at Q; with f = 1/G at R, df/du = -G' / G^2
    cplx dG = e.dG_du(u);
    cplx df_du = at_R ? -dG / (target * target) : dG;
    out.push_back({e.x_at(u), e.y_at(u), e.dx_du(u) / df_du});
  }
  if (static_cast<int>(out.size()) != N) throw count_error(out.size(), N);
  return out;
}

std::vector<FiberPoint> LevelFibers::from_elimination(cplx w) const {
  const Curve& c = m_.curve;
  const RationalFunction& f = m_.f;
  // E = a num - b den, scaled so the coefficients stay bounded in w
  cplx a = f.scale, b = w;
  if (std::abs(w) > 1) {
    a = f.scale / w;
    b = 1;
  }
  BiPoly E = f.num.scaled(a) - f.den.scaled(b);
  std::vector<std::pair<cplx, cplx>> cand;
  if (E.deg_y() <= 0) {
    for (cplx x : roots(x_slice(E, 0)))
      for (cplx y : c.fiber(x)) cand.emplace_back(x, y);
  } else if (E.deg_y() == 1) {
    Poly A = x_slice(E, 0), B = x_slice(E, 1);
    // (-A)^n - p B^n = 0 after substituting y = -A / B
    Poly lhs = power(Poly({-1}) * A, c.n()) - c.p() * power(B, c.n());
    for (cplx x : roots(lhs)) {
      cplx bx = B(x);
      if (bx == cplx(0)) continue;
      cand.emplace_back(x, -A(x) / bx);
    }
  } else {
    throw unsupported_input("level sets need f depending on y at most linearly");
  }
  std::vector<FiberPoint> out;
  for (auto [x, y] : cand) {
    if (!(std::abs(E(x, y)) <= 1e-12L * abs_eval(E, x, y))) continue;
    if (!(c.residual(x, y) <= 1e-12L * (1 + std::pow(std::abs(y), c.n())))) continue;
    bool dup = false;
    for (auto& q : out)
      if (std::abs(q.x - x) + std::abs(q.y - y) < 1e-10L * (1 + std::abs(x))) dup = true;
    if (dup) continue;
    cplx n0 = f.num(x, y), d0 = f.den(x, y);
    cplx fx = f.scale * (nx_(x, y) * d0 - n0 * dx_(x, y)) / (d0 * d0);
    cplx fy = f.scale * (ny_(x, y) * d0 - n0 * dy_(x, y)) / (d0 * d0);
    cplx Fa = Fx_(x, y), Fb = Fy_(x, y);
    // df = (fx Fy - fy Fx) / Fy dx along the curve
    out.push_back({x, y, Fb / (fx * Fb - fy * Fa)});
  }
  if (static_cast<int>(out.size()) != m_.N) throw count_error(out.size(), m_.N);
  return out;
}

std::vector<FiberPoint> preimages(const CurveModel& model, cplx w) {
  return LevelFibers(model)(w);
}

SurfaceIntegrals surface_integrals(const CurveModel& model, const PeriodFrame& frame,
                                   const SurfaceOptions& opt) {
  const int g = frame.g, N = model.N;
  LevelFibers fibers(model);
  const int dim = 2 * g * g;
  auto integrand = [&](real s, real tau, cplx* out) {
    std::fill(out, out + dim, cplx(0));
    std::vector<cplx> H(g);
    // conj(df) ^ df = 2i |f|^2 ds dtau
    cplx area = cplx(0, 2) * std::exp(2 * s);
    cplx lg(s, tau + 2 * kPi * opt.branch_lift);
    for (auto& p : fibers(std::exp(cplx(s, tau)))) {
      for (int k = 0; k < g; ++k)
        H[k] = holomorphic_coefficient(frame.dz[k], p.x, p.y) * p.dx_df;
      for (int k = 0; k < g; ++k)
        for (int m = 0; m < g; ++m) {
          cplx v = std::conj(H[k]) * H[m] * area;
          out[k * g + m] += v;
          out[g * g + k * g + m] += v * lg;
        }
    }
  };
  real S = opt.extent * N;
  auto res = adaptive_cubature(integrand, dim, -S, S, 0, 2 * kPi, opt.abs_tol, opt.rel_tol,
                               opt.max_evals, 16, 4);
  SurfaceIntegrals si;
  si.gram = CMat(g, g);
  si.surf = CMat(g, g);
  for (int k = 0; k < g; ++k)
    for (int m = 0; m < g; ++m) {
      si.gram(k, m) = res.value[k * g + m];
      si.surf(k, m) = res.value[g * g + k * g + m];
    }
  si.error = res.error;
  si.evaluations = res.evaluations;
  si.converged = res.converged;
  for (int k = 0; k < g; ++k)
    for (int m = 0; m < g; ++m) {
      CVec phi = CVec::Zero(2 * g);
      phi(g + k) = 1;
      cplx expect = frame.wedge(phi, frame.dz_coords(m));
      si.gram_check = std::max(si.gram_check, std::abs(si.gram(k, m) - expect));
    }
  return si;
}

}  // namespace regulab
