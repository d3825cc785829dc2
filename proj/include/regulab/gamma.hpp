#pragma once
// The level set gamma = f^{-1}([0, inf]) as N paths from Q to R, parametrised
// by t in [0,1] with f = (t / (1 - t))^N.
#include <vector>

#include "regulab/chen.hpp"

namespace regulab {

struct GammaOptions {
  int series_terms = 60;
  real chart_fraction = 0.3L;  // chart used for |u| below this fraction of its radius
  real tail_tol = 1e-14L;
  int max_depth = 40;
};

// Series chart at Q (G = f) or at R (G = 1/f) with G ~ lead u^N.
struct EndpointChart {
  Series x, y, G, dG, dx;
  real umax = 0;  // chart trusted for |u| below this
  cplx lead = 0;
  int N = 0;
  cplx x_at(cplx u) const;
  cplx y_at(cplx u) const;
  cplx dx_du(cplx u) const;
  cplx dG_du(cplx u) const;
  // |G| below which every solution of G = target lies in the trusted disc
  real trusted_level() const;
  // Newton for G(u) = target starting at u
  bool solve(cplx target, cplx& u) const;
};
EndpointChart endpoint_chart(const CurveModel& model, bool at_R, int terms = 60,
                             real fraction = 0.3L);

struct GammaComponent {
  SurfacePath path;
  std::vector<std::pair<real, real>> spans;  // t-interval of each panel
  cplx start_direction = 0;                  // chart direction at Q used for ordering
  // pullback coefficient of w with respect to t at parameter t
  cplx coefficient(const FormContext& ctx, const Form& w, real t) const;
};

struct LevelSetGamma {
  std::vector<GammaComponent> components;
  real max_arg_f = 0;       // max |arg f| over all nodes
  real min_real_f = 0;      // min Re f / |f|
  real endpoint_error = 0;  // distance of the ends from Q and R
  real min_separation = 0;  // smallest distance between components away from the ends
};

LevelSetGamma trace_gamma(const CurveModel& model, const GammaOptions& opt = {});

}  // namespace regulab
