#include "regulab/carlson.hpp"

#include <cmath>

namespace regulab {

namespace {

cplx dlog_then(const CurveModel& model, const LoopSystem& ls, const Form& w, int loop) {
  FormContext ctx{&model.curve, &model.f};
  const SurfacePath& a = ls.alpha.at(loop);
  real defect = 0;
  real wn = winding_number(ctx, a, &defect);
  if (std::abs(wn) > 1e-6L)
    throw domain_error("f winds along alpha_" + std::to_string(loop + 1));
  return iterated_integral(ctx, {Form::dlog_f(), w}, a).value;
}

}  // namespace

GValue evaluate_G(const CurveModel& model, const LoopSystem& ls, const PeriodFrame& frame, int k,
                  int j) {
  GValue gv;
  gv.value = static_cast<real>(2 * frame.g + 1) * dlog_then(model, ls, frame.dx.at(k), j);
  return gv;
}

cplx evaluate_F_on_zeta(const CurveModel& model, const LoopSystem& ls, const PeriodFrame& frame,
                        int i, int j) {
  real pre = 2.0L * (2 * frame.g + 1) * model.N * frame.c.at(j);
  return pre * dlog_then(model, ls, frame.dz.at(i), frame.sigma.at(j));
}

CarlsonEvaluation build_epsilon4(const CurveModel& model, const LoopSystem& ls,
                                 const PeriodFrame& frame) {
  const int g = frame.g;
  CarlsonEvaluation ce;
  ce.g = g;
  ce.N = model.N;
  ce.entries = CMat(g, 2 * g);
  // each loop integral is shared by all i; compute per (i, loop) once
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < 2 * g; ++j) ce.entries(i, j) = evaluate_F_on_zeta(model, ls, frame, i, j);
  for (int j = 0; j < g; ++j) {
    CVec z = CVec::Zero(2 * g);
    z(frame.sigma[j]) += static_cast<real>(frame.c[frame.sigma[j]]);
    for (int i = 0; i < g; ++i) z(i) += frame.A(j, i) * static_cast<real>(frame.c[i]);
    ce.zeta.push_back(z);
  }
  const cplx tpi(0, 2 * kPi);
  for (int l = 0; l < 2 * g; ++l) {
    ce.lattice_full.push_back(tpi * frame.periods.col(l));
    ce.lattice_alpha.push_back(tpi * frame.alpha_periods.col(l));
  }
  return ce;
}

CMat regulator_table(const MotivicCycle& z, const std::vector<int>& columns) {
  const PeriodFrame& fr = *z.frame;
  CMat R(fr.g, columns.size());
  for (int i = 0; i < fr.g; ++i)
    for (size_t c = 0; c < columns.size(); ++c)
      R(i, c) = regulator_pair(z, fr.dx_coords(columns[c]), fr.dz_coords(i)).value;
  return R;
}

KappaResidual kappa_residual(const CarlsonEvaluation& ce, const CMat& carlson,
                             const CMat& regulator, long kappa) {
  KappaResidual kr;
  kr.kappa = kappa;
  for (int c = 0; c < carlson.cols(); ++c) {
    CVec d = carlson.col(c) - static_cast<real>(kappa) * regulator.col(c);
    real scale = std::max(carlson.col(c).norm(), static_cast<real>(1e-300L));
    kr.residual_full =
        std::max(kr.residual_full, reduce_mod_lattice(d, ce.lattice_full, 1000000).residual / scale);
    kr.residual_alpha = std::max(
        kr.residual_alpha, reduce_mod_lattice(d, ce.lattice_alpha, 1000000).residual / scale);
  }
  return kr;
}

MainTheoremComparison compare_main_theorem(const CarlsonEvaluation& ce, const MotivicCycle& z,
                                           long kappa_range) {
  MainTheoremComparison mc;
  const int g = ce.g;
  for (int j = g; j < 2 * g; ++j) mc.columns.push_back(j);
  mc.carlson = CMat(g, mc.columns.size());
  for (size_t c = 0; c < mc.columns.size(); ++c) mc.carlson.col(c) = ce.entries.col(mc.columns[c]);
  mc.regulator = regulator_table(z, mc.columns);
  mc.stated = static_cast<long>(2 * g + 1) * ce.N;
  mc.at_stated = kappa_residual(ce, mc.carlson, mc.regulator, mc.stated);
  mc.at_double = kappa_residual(ce, mc.carlson, mc.regulator, 2 * mc.stated);
  bool first = true;
  for (long k = -kappa_range; k <= kappa_range; ++k) {
    if (k == 0) continue;
    KappaResidual kr = kappa_residual(ce, mc.carlson, mc.regulator, k);
    mc.scan.push_back(kr);
    if (first || kr.residual_full < mc.fitted.residual_full) mc.fitted = kr;
    first = false;
  }
  return mc;
}

}  // namespace regulab
