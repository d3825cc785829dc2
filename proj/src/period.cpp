#include "regulab/period.hpp"

#include <cmath>

namespace regulab {

Form PeriodFrame::form(const CVec& coeffs) const {
  Form w;
  for (int k = 0; k < g; ++k) {
    if (coeffs(k) != cplx(0)) w = w + dz[k].scaled(coeffs(k));
    if (coeffs(g + k) != cplx(0)) w = w + dz[k].conjugate().scaled(coeffs(g + k));
  }
  return w;
}

CVec PeriodFrame::dz_coords(int i) const {
  CVec v = CVec::Zero(2 * g);
  v(i) = 1;
  return v;
}

CVec PeriodFrame::dx_coords(int j) const { return dx_coeffs.row(j).transpose(); }

CVec PeriodFrame::periods_of(const CVec& coeffs) const {
  CVec out = CVec::Zero(2 * g);
  for (int i = 0; i < 2 * g; ++i)
    for (int k = 0; k < g; ++k)
      out(i) += coeffs(k) * periods(k, i) + coeffs(g + k) * std::conj(periods(k, i));
  return out;
}

cplx PeriodFrame::wedge(const CVec& phi, const CVec& psi) const {
  CVec a = periods_of(phi), b = periods_of(psi);
  cplx acc = 0;
  for (int k = 0; k < g; ++k) acc += a(k) * b(k + g) - a(k + g) * b(k);
  return acc;
}

std::vector<CVec> PeriodFrame::lattice(cplx scale) const {
  std::vector<CVec> out;
  for (int i = 0; i < 2 * g; ++i) out.push_back(periods.col(i) * scale);
  return out;
}

PeriodFrame compute_period_frame(const CurveModel& model, const LoopSystem& ls) {
  const Curve& c = model.curve;
  PeriodFrame fr;
  fr.g = c.genus();
  fr.N = model.N;
  const int g = fr.g;
  if (g == 0) throw unsupported_input("genus-zero curve has no periods");
  fr.raw_basis = holomorphic_basis(c);
  FormContext ctx{&c, &model.f};
  fr.raw_periods = CMat(g, 2 * g);
  CMat raw_alpha(g, 2 * g);
  for (int j = 0; j < g; ++j) {
    Form w = Form::monomial(fr.raw_basis[j].a, fr.raw_basis[j].b);
    for (int i = 0; i < 2 * g; ++i) {
      fr.raw_periods(j, i) = line_integral(ctx, w, ls.alpha_prime[i]).value;
      raw_alpha(j, i) = line_integral(ctx, w, ls.alpha[i]).value;
    }
  }
  CMat left = fr.raw_periods.leftCols(g);
  Eigen::FullPivLU<CMat> lu(left);
  if (!lu.isInvertible()) throw Error("degenerate-curve", "period matrix is singular");
  fr.M = lu.inverse();
  fr.periods = fr.M * fr.raw_periods;
  fr.A = fr.periods.rightCols(g);
  fr.alpha_periods = fr.M * raw_alpha;
  for (int j = 0; j < g; ++j) {
    Form w;
    for (int k = 0; k < g; ++k)
      w = w + Form::monomial(fr.raw_basis[k].a, fr.raw_basis[k].b, fr.M(j, k));
    fr.dz.push_back(w);
  }
  CMat full(2 * g, 2 * g);
  full.topRows(g) = fr.periods;
  full.bottomRows(g) = fr.periods.conjugate();
  Eigen::FullPivLU<CMat> flu(full);
  if (!flu.isInvertible()) throw Error("degenerate-curve", "full period matrix is singular");
  fr.dx_coeffs = flu.inverse();
  for (int j = 0; j < 2 * g; ++j) fr.dx.push_back(fr.form(fr.dx_coords(j)));
  for (int i = 0; i < 2 * g; ++i) {
    fr.c.push_back(i < g ? 1 : -1);
    fr.sigma.push_back(i < g ? i + g : i - g);
  }

  fr.symmetry_error = (fr.A - fr.A.transpose()).cwiseAbs().maxCoeff();
  RMat imA = fr.A.imag();
  RMat sym = (imA + imA.transpose()) / 2;
  Eigen::SelfAdjointEigenSolver<RMat> es(sym);
  fr.min_imag_eigen = es.eigenvalues().minCoeff();
  for (int i = 0; i < 2 * g; ++i)
    for (int j = 0; j < 2 * g; ++j) {
      cplx v = line_integral(ctx, fr.dx[j], ls.alpha_prime[i]).value;
      fr.duality_error = std::max(fr.duality_error, std::abs(v - cplx(i == j ? 1 : 0)));
      cplx va = line_integral(ctx, fr.dx[j], ls.alpha[i]).value;
      fr.alpha_dx_error =
          std::max(fr.alpha_dx_error, std::abs(va - cplx(i == j ? fr.N : 0)));
    }
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      fr.alpha_duality_error = std::max(
          fr.alpha_duality_error, std::abs(fr.alpha_periods(j, i) - cplx(i == j ? fr.N : 0)));
  return fr;
}

JacobianValue reduce_mod_lattice(const CVec& v, const std::vector<CVec>& lattice, long box) {
  JacobianValue jv;
  jv.vector = v;
  const int n = static_cast<int>(v.size()), r = static_cast<int>(lattice.size());
  if (r == 0) {
    jv.reduced = v;
    jv.residual = v.norm();
    return jv;
  }
  RMat L(2 * n, r);
  RVec b(2 * n);
  for (int i = 0; i < n; ++i) {
    b(i) = v(i).real();
    b(n + i) = v(i).imag();
    for (int k = 0; k < r; ++k) {
      L(i, k) = lattice[k](i).real();
      L(n + i, k) = lattice[k](i).imag();
    }
  }
  Eigen::ColPivHouseholderQR<RMat> qr(L);
  if (qr.rank() < r) throw domain_error("lattice generators are not independent over the reals");
  RVec x = qr.solve(b);
  std::vector<long> base(r);
  for (int k = 0; k < r; ++k) {
    if (!std::isfinite(static_cast<double>(x(k))) || std::fabs(x(k)) > box + 0.5L)
      throw Error("inconclusive-reduction", "lattice coefficient outside the search box");
    base[k] = std::lround(x(k));
  }
  auto residual_of = [&](const std::vector<long>& co) {
    RVec d = b;
    for (int k = 0; k < r; ++k) d -= static_cast<real>(co[k]) * L.col(k);
    return d.norm();
  };
  std::vector<long> best = base;
  real best_res = residual_of(base);
  // neighbour search; exhaustive over {-1,0,1}^r for small r
  if (r <= 8) {
    long total = 1;
    for (int k = 0; k < r; ++k) total *= 3;
    std::vector<long> co(r);
    for (long idx = 0; idx < total; ++idx) {
      long t = idx;
      for (int k = 0; k < r; ++k) {
        co[k] = base[k] + (t % 3) - 1;
        t /= 3;
      }
      real res = residual_of(co);
      if (res < best_res) {
        best_res = res;
        best = co;
      }
    }
  } else {
    for (int k = 0; k < r; ++k)
      for (long dlt : {-1L, 1L}) {
        auto co = base;
        co[k] += dlt;
        real res = residual_of(co);
        if (res < best_res) {
          best_res = res;
          best = co;
        }
      }
  }
  jv.coefficients = best;
  jv.reduced = v;
  for (int k = 0; k < r; ++k) jv.reduced -= static_cast<real>(best[k]) * lattice[k];
  jv.residual = jv.reduced.norm();
  return jv;
}

SurfacePath path_from_base(const CurveModel& model, const LoopSystem& ls, const CurvePoint& pt) {
  const Curve& c = model.curve;
  if (pt.infinite) throw unsupported_input("paths to points at infinity are not supported");
  int disc = -1;
  for (size_t k = 0; k < ls.discs.size(); ++k)
    if (std::abs(ls.discs[k].center - pt.x) < 1e-7L) disc = static_cast<int>(k);
  std::vector<Disc> others;
  for (size_t k = 0; k < ls.discs.size(); ++k)
    if (static_cast<int>(k) != disc) others.push_back(ls.discs[k]);
  BaseLoop approach;
  cplx entry = pt.x;
  if (disc >= 0) {
    cplx dir = ls.base_x - pt.x;
    entry = pt.x + ls.discs[disc].radius * dir / std::abs(dir);
  }
  approach = detoured_line(ls.base_x, entry, others);
  if (c.is_branch(pt.x, 1e-7L)) {
    approach.push_back({BasePiece::ToBranch, entry, pt.x});
    return trace(c, approach, ls.base_y, ls.trace_opt);
  }
  if (disc >= 0) approach.push_back({BasePiece::Line, entry, pt.x});
  TraceOptions opt = ls.trace_opt;
  opt.obstacles.clear();
  for (auto& d : ls.discs)
    if (std::abs(d.center - pt.x) > 1e-7L) opt.obstacles.push_back(d.center);
  for (int s = 0; s < c.n(); ++s) {
    BaseLoop pre = on_sheet(ls, s, {});
    pre.resize(pre.size() / 2);
    auto p = trace(c, pre + approach, ls.base_y, opt);
    if (std::abs(p.y1 - pt.y) < 1e-6L * (1 + std::abs(pt.y))) return p;
  }
  throw invariant_violation("no sheet of the base fibre reaches the point");
}

JacobianValue abel_jacobi(const CurveModel& model, const LoopSystem& ls, const PeriodFrame& fr,
                          const std::vector<DivisorTerm>& divisor) {
  long deg = 0;
  for (auto& t : divisor) deg += t.multiplicity;
  if (deg != 0) throw domain_error("Abel-Jacobi map needs a degree-zero divisor");
  CVec v = CVec::Zero(fr.g);
  FormContext ctx{&model.curve, &model.f};
  for (auto& t : divisor) {
    if (t.multiplicity == 0) continue;
    SurfacePath p = path_from_base(model, ls, t.point);
    for (int i = 0; i < fr.g; ++i)
      v(i) += static_cast<real>(t.multiplicity) * line_integral(ctx, fr.dz[i], p).value;
  }
  return reduce_mod_lattice(v, fr.lattice());
}

}  // namespace regulab
