#pragma once
// Surface integrals over C minus gamma, computed in the f-plane: every value
// w = exp(s + i tau), tau in (0, 2 pi), has N preimages and log f = s + i tau
// on the complement of gamma.
#include "regulab/gamma.hpp"
#include "regulab/period.hpp"

namespace regulab {

struct FiberPoint {
  cplx x, y;
  cplx dx_df;  // derivative of x along the curve with respect to f
};

// The N affine points with f = w. Near Q and R the endpoint series charts are
// used, elsewhere polynomial elimination. Throws a numerical error if the
// count is off.
class LevelFibers {
 public:
  explicit LevelFibers(const CurveModel& model);
  std::vector<FiberPoint> operator()(cplx w) const;

 private:
  std::vector<FiberPoint> from_chart(const EndpointChart& e, cplx target, bool at_R) const;
  std::vector<FiberPoint> from_elimination(cplx w) const;
  const CurveModel& m_;
  EndpointChart cq_, cr_;
  BiPoly nx_, ny_, dx_, dy_, Fx_, Fy_;
};
std::vector<FiberPoint> preimages(const CurveModel& model, cplx w);

struct SurfaceOptions {
  real extent = 20;  // |s| <= extent * N; the integrand decays like exp(-2|s|/N)
  real abs_tol = 1e-10L;
  real rel_tol = 1e-9L;
  long max_evals = 20000000;
  int branch_lift = 0;  // log f = s + i (tau + 2 pi lift)
};

struct SurfaceIntegrals {
  CMat gram;  // (k, m): integral of conj(dz_k) ^ dz_m
  CMat surf;  // (k, m): integral over C minus gamma of log(f) conj(dz_k) ^ dz_m
  real error = 0;
  long evaluations = 0;
  bool converged = false;
  real gram_check = 0;  // max deviation of gram from the bilinear relations
};

SurfaceIntegrals surface_integrals(const CurveModel& model, const PeriodFrame& frame,
                                   const SurfaceOptions& opt = {});

}  // namespace regulab
