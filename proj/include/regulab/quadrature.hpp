#pragma once
// Fixed panel rule (20-point Gauss-Legendre on [0,1]) with running primitives,
// and an adaptive tensor Gauss-Kronrod cubature for vector integrands.
#include <array>
#include <functional>
#include <vector>

#include "regulab/types.hpp"

namespace regulab {

inline constexpr int kNodes = 20;

struct PanelRule {
  std::array<real, kNodes> s{}, w{};
  // cum[k][j]: integral over [0, s_k] of the j-th Lagrange basis polynomial
  std::array<std::array<real, kNodes>, kNodes> cum{};
  // leg[m][k] = (2m+1)/2 * w_k * P_m(2 s_k - 1) * 2, so coefficients = leg * values
  std::array<std::array<real, kNodes>, kNodes> leg{};
};

const PanelRule& panel_rule();

using NodeValues = std::array<cplx, kNodes>;

cplx panel_sum(const NodeValues& v);
// running primitive at the nodes, starting from start
NodeValues panel_primitive(const NodeValues& v, cplx start = 0);
// Legendre coefficients of the interpolant
NodeValues legendre_coeffs(const NodeValues& v);
// Relative size of the two highest Legendre coefficients; ~eps for resolved data.
real legendre_tail(const NodeValues& v);
// Interpolant at s in [0,1]
cplx panel_interpolate(const NodeValues& v, real s);
// Sum of c[m] P_m(2s - 1) for precomputed Legendre coefficients
cplx legendre_series(const NodeValues& c, real s);

struct CubatureResult {
  std::vector<cplx> value;
  real error = 0;
  long evaluations = 0;
  int cells = 0;
  bool converged = false;
};

// f(u, v, out) writes dim values. Cells are split into four until the summed
// Kronrod-Gauss error is below max(abs_tol, rel_tol * |value|). Non-finite
// samples force a split and are treated as having infinite error.
using VectorIntegrand = std::function<void(real, real, cplx*)>;
CubatureResult adaptive_cubature(const VectorIntegrand& f, int dim, real u0, real u1, real v0,
                                 real v1, real abs_tol, real rel_tol, long max_evals,
                                 int initial_u = 1, int initial_v = 1);

}  // namespace regulab
