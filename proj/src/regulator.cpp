#include "regulab/regulator.hpp"

#include <algorithm>
#include <cmath>

namespace regulab {

namespace {

FormContext context(const MotivicCycle& z) { return {&z.model->curve, &z.model->f}; }

// Pullback coefficient of a form along one component as a function of t,
// stored as Legendre coefficients per panel.
struct ComponentForm {
  const GammaComponent* comp = nullptr;
  std::vector<NodeValues> coeffs;

  ComponentForm(const FormContext& ctx, const GammaComponent& c, const Form& w) : comp(&c) {
    for (size_t k = 0; k < c.path.panels.size(); ++k) {
      NodeValues v = pullback(ctx, w, c.path.panels[k]);
      real width = c.spans[k].second - c.spans[k].first;
      for (auto& z : v) z /= width;
      coeffs.push_back(legendre_coeffs(v));
    }
  }

  cplx operator()(real t) const {
    const auto& sp = comp->spans;
    auto it = std::upper_bound(sp.begin(), sp.end(), t,
                               [](real v, const std::pair<real, real>& s) { return v < s.first; });
    size_t k = it == sp.begin() ? 0 : static_cast<size_t>(it - sp.begin()) - 1;
    k = std::min(k, sp.size() - 1);
    return legendre_series(coeffs[k], (t - sp[k].first) / (sp[k].second - sp[k].first));
  }
};

}  // namespace

MotivicCycle build_cycle(const CurveModel& model, const PeriodFrame& frame,
                         const GammaOptions& gopt, const SurfaceOptions& sopt) {
  return build_cycle(model, frame, trace_gamma(model, gopt), sopt);
}

MotivicCycle build_cycle(const CurveModel& model, const PeriodFrame& frame, LevelSetGamma gamma,
                         const SurfaceOptions& sopt) {
  MotivicCycle z;
  z.model = &model;
  z.frame = &frame;
  z.gamma = std::move(gamma);
  if (static_cast<int>(z.gamma.components.size()) != model.N)
    throw invariant_violation("level set does not have N components");
  z.surface = surface_integrals(model, frame, sopt);
  return z;
}

real gamma_period_defect(const MotivicCycle& z) {
  FormContext ctx = context(z);
  real worst = 0;
  for (int i = 0; i < z.frame->g; ++i) {
    cplx s = 0;
    for (auto& c : z.gamma.components) s += line_integral(ctx, z.frame->dz[i], c.path).value;
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

cplx boundary_term(const MotivicCycle& z, int component, const CVec& phi, const CVec& psi) {
  FormContext ctx = context(z);
  Form a = z.frame->form(phi), b = z.frame->form(psi);
  const auto& path = z.gamma.components.at(component).path;
  return iterated_integral(ctx, {a, b}, path).value - iterated_integral(ctx, {b, a}, path).value;
}

RegulatorEntry regulator_pair(const MotivicCycle& z, const CVec& phi, const CVec& psi) {
  const int g = z.frame->g;
  for (int k = 0; k < g; ++k)
    if (psi(g + k) != cplx(0)) throw domain_error("second form of a regulator pair must be holomorphic");
  RegulatorEntry e;
  // only conj(dz_k) ^ dz_m survives
  for (int k = 0; k < g; ++k)
    for (int m = 0; m < g; ++m) e.surface += phi(g + k) * psi(m) * z.surface.surf(k, m);
  for (size_t c = 0; c < z.gamma.components.size(); ++c)
    e.boundary += boundary_term(z, static_cast<int>(c), phi, psi);
  e.value = 2.0L * e.surface + cplx(0, 2 * kPi) * e.boundary;
  real scale = 0;
  for (int k = 0; k < g; ++k) scale += std::abs(phi(g + k));
  e.error = 2 * scale * z.surface.error;
  return e;
}

DiscResult disc_integral(const MotivicCycle& z, int component, const CVec& phi, const CVec& psi,
                         real tol, long max_evals) {
  FormContext ctx = context(z);
  const auto& comp = z.gamma.components.at(component);
  ComponentForm P(ctx, comp, z.frame->form(phi)), S(ctx, comp, z.frame->form(psi));
  auto integrand = [&](real s, real t, cplx* out) {
    real den = 1 - s * (1 - t);
    real b = t * (1 - s) / den;
    real b_s = -t * t / (den * den);
    out[0] = -b_s * (P(b) * S(t) - P(t) * S(b));
  };
  auto res = adaptive_cubature(integrand, 1, 0, 1, 0, 1, tol, tol, max_evals, 4, 4);
  DiscResult d;
  d.value = res.value[0];
  d.error = res.error;
  d.evaluations = res.evaluations;
  d.converged = res.converged;
  return d;
}

cplx decomposable_regulator(cplx a, const CVec& phi, const CVec& psi, const PeriodFrame& frame) {
  if (a == cplx(0)) throw domain_error("decomposable cycle needs a nonzero constant");
  return std::log(a) * frame.wedge(phi, psi);
}

}  // namespace regulab
