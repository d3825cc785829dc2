#pragma once
// Period frame: normalised holomorphic forms dz_i, harmonic duals dx_i as
// combinations of dz and conj(dz), Riemann relations, Abel-Jacobi images and
// reduction modulo period lattices.
#include <Eigen/Dense>
#include <vector>

#include "regulab/loops.hpp"

namespace regulab {

using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using CVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
using RMat = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;
using RVec = Eigen::Matrix<real, Eigen::Dynamic, 1>;

struct PeriodFrame {
  int g = 0, N = 0;
  std::vector<Monomial> raw_basis;
  CMat raw_periods;     // g x 2g, integrals of the raw basis over alpha'_i
  CMat M;               // dz = M raw
  CMat periods;         // g x 2g, integrals of dz over alpha'_i = (I | A)
  CMat A;               // g x g, A(j, i) = integral of dz_j over alpha'_{i+g}
  CMat alpha_periods;   // g x 2g, integrals of dz over alpha_i
  CMat dx_coeffs;       // 2g x 2g: dx_j = sum_k X(j,k) dz_k + X(j,g+k) conj dz_k
  std::vector<Form> dz, dx;
  std::vector<int> c, sigma;  // c(i) = +1 for i < g else -1; sigma(i) = i + c(i) g

  real symmetry_error = 0;     // |A - A^T|
  real min_imag_eigen = 0;     // smallest eigenvalue of Im A
  real duality_error = 0;      // max |int_{alpha'_i} dx_j - delta_ij|
  real alpha_duality_error = 0;  // max |int_{alpha_i} dz_j - N delta_ij|, i < g
  real alpha_dx_error = 0;     // max |int_{alpha_i} dx_j - N delta_ij|

  // frame coordinates (length 2g over dz, conj dz) -> form
  Form form(const CVec& coeffs) const;
  CVec dz_coords(int i) const;
  CVec dx_coords(int j) const;
  // periods over alpha'_1..2g of a frame combination
  CVec periods_of(const CVec& coeffs) const;
  // integral over C of phi ^ psi via the bilinear relations
  cplx wedge(const CVec& phi, const CVec& psi) const;
  // lattice of dz periods (2g generators in C^g), optionally scaled
  std::vector<CVec> lattice(cplx scale = 1) const;
};

PeriodFrame compute_period_frame(const CurveModel& model, const LoopSystem& ls);

struct JacobianValue {
  CVec vector, reduced;
  std::vector<long> coefficients;
  real residual = 0;  // |reduced|
};

// Nearest lattice point by least squares, rounding and a {-1,0,1} neighbour
// search. Throws an inconclusive-reduction error if a coefficient exceeds box.
JacobianValue reduce_mod_lattice(const CVec& v, const std::vector<CVec>& lattice, long box = 50);

// Path on the surface from the base point to pt (affine).
SurfacePath path_from_base(const CurveModel& model, const LoopSystem& ls, const CurvePoint& pt);

struct DivisorTerm {
  CurvePoint point;
  long multiplicity = 0;
};
JacobianValue abel_jacobi(const CurveModel& model, const LoopSystem& ls, const PeriodFrame& fr,
                          const std::vector<DivisorTerm>& divisor);

}  // namespace regulab
