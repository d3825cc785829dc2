#pragma once
// Regulator side: the cycle built from f with divisor N(Q - R), its pairing
// with 2-forms phi ^ psi (psi holomorphic), disc integrals over the
// difference-map discs, and decomposable cycles.
#include "regulab/gamma.hpp"
#include "regulab/surface.hpp"

namespace regulab {

struct MotivicCycle {
  const CurveModel* model = nullptr;
  const PeriodFrame* frame = nullptr;
  LevelSetGamma gamma;
  SurfaceIntegrals surface;
};

MotivicCycle build_cycle(const CurveModel& model, const PeriodFrame& frame,
                         const GammaOptions& gopt = {}, const SurfaceOptions& sopt = {});
MotivicCycle build_cycle(const CurveModel& model, const PeriodFrame& frame, LevelSetGamma gamma,
                         const SurfaceOptions& sopt = {});

// max_i |sum over components of the integral of dz_i along gamma|
real gamma_period_defect(const MotivicCycle& z);

struct RegulatorEntry {
  cplx value = 0;     // 2 surface + 2 pi i boundary
  cplx surface = 0;   // integral over C minus gamma of log(f) phi ^ psi
  cplx boundary = 0;  // sum over components of int (phi psi - psi phi)
  real error = 0;
};

// phi, psi in frame coordinates (dz, conj dz); psi must be holomorphic.
RegulatorEntry regulator_pair(const MotivicCycle& z, const CVec& phi, const CVec& psi);

// Iterated boundary term on one component: int phi psi - int psi phi.
cplx boundary_term(const MotivicCycle& z, int component, const CVec& phi, const CVec& psi);

struct DiscResult {
  cplx value = 0;
  real error = 0;
  long evaluations = 0;
  bool converged = false;
};

// Integral of phi ^ psi over the disc swept by gamma(t) - gamma(b(s, t)),
// b = t (1 - s) / (1 - s (1 - t)), over the unit square.
DiscResult disc_integral(const MotivicCycle& z, int component, const CVec& phi, const CVec& psi,
                         real tol = 1e-9L, long max_evals = 4000000);

// log(a) times the integral over C of phi ^ psi
cplx decomposable_regulator(cplx a, const CVec& phi, const CVec& psi, const PeriodFrame& frame);

}  // namespace regulab
