#pragma once
// Extension side: loop iterated integrals of df/f against frame forms along
// the V-loops alpha_i, the entry table of the Carlson representative, and the
// comparison with the regulator side modulo period lattices.
#include "regulab/regulator.hpp"

namespace regulab {

struct GValue {
  cplx value = 0;          // (2g+1) int_{alpha_j} (df/f) dx_k
  bool incomplete = true;  // the W-term is not evaluated
};

// Computable part of G(dx_k)(alpha_j). Throws a domain error if f winds
// along alpha_j.
GValue evaluate_G(const CurveModel& model, const LoopSystem& ls, const PeriodFrame& frame, int k,
                  int j);

// 2 (2g+1) N c(j) int_{alpha_sigma(j)} (df/f) dz_i
cplx evaluate_F_on_zeta(const CurveModel& model, const LoopSystem& ls, const PeriodFrame& frame,
                        int i, int j);

struct CarlsonEvaluation {
  int g = 0, N = 0;
  CMat entries;                 // g x 2g, (i, j) -> evaluate_F_on_zeta(i, j)
  std::vector<CVec> zeta;       // zeta_j over alpha_1..2g, j < g
  std::vector<CVec> lattice_full;   // 2 pi i times the alpha' periods of dz
  std::vector<CVec> lattice_alpha;  // 2 pi i times the alpha periods of dz
};

CarlsonEvaluation build_epsilon4(const CurveModel& model, const LoopSystem& ls,
                                 const PeriodFrame& frame);

struct KappaResidual {
  long kappa = 0;
  real residual_full = 0;   // max over columns of |reduced| / |carlson column|
  real residual_alpha = 0;
};

struct MainTheoremComparison {
  std::vector<int> columns;  // j indices compared (dx_j with j >= g)
  CMat carlson, regulator;   // g x |columns|
  long stated = 0;           // (2g+1) N
  KappaResidual at_stated, at_double, fitted;
  std::vector<KappaResidual> scan;
};

// Regulator entries R(i, j) = regulator_pair(dx_j, dz_i) for the given columns.
CMat regulator_table(const MotivicCycle& z, const std::vector<int>& columns);

KappaResidual kappa_residual(const CarlsonEvaluation& ce, const CMat& carlson,
                             const CMat& regulator, long kappa);

MainTheoremComparison compare_main_theorem(const CarlsonEvaluation& ce, const MotivicCycle& z,
                                           long kappa_range = 60);

}  // namespace regulab
