#pragma once
// Loops based at P: lasso generators, a symplectic basis alpha'_i found from
// combinatorial intersection numbers, the puncture loop beta_Q, winding
// numbers m_i and the loops alpha_i = alpha'_i^N beta_Q^{-m_i}.
#include <string>
#include <vector>

#include "regulab/chen.hpp"

namespace regulab {

using IntMatrix = std::vector<std::vector<long>>;

struct LoopOptions {
  real radius_factor = 0.3L;  // lasso radius as a fraction of the nearest obstacle gap
  real shift = 0.01L;         // translation for intersection counting, in units of the smallest radius
  real tail_tol = 1e-14L;
};

struct LoopSystem {
  int genus = 0, N = 0;
  cplx base_x = 0, base_y = 0;
  std::vector<Disc> discs;  // branch points first, then unramified x_Q, x_R
  TraceOptions trace_opt;

  std::vector<BaseLoop> candidates;
  std::vector<std::string> candidate_names;
  std::vector<SurfacePath> candidate_paths;
  IntMatrix candidate_intersections;
  IntMatrix basis;  // candidates x 2g integer coefficients of alpha'_i

  std::vector<BaseLoop> alpha_prime_base, alpha_base;
  BaseLoop beta_base;
  std::vector<SurfacePath> alpha_prime, alpha;
  SurfacePath beta_Q;
  IntMatrix intersection;  // of alpha', must be the standard J
  std::vector<long> m;
  std::vector<real> winding_defect;  // |winding - round(winding)| along alpha'_i
  real beta_winding = 0;
  std::vector<real> alpha_winding;  // along alpha_i, should be 0
};

LoopSystem build_loop_system(const CurveModel& model, const LoopOptions& opt = {});

// Signed count of crossings on the same sheet, with the second loop
// translated by `shift` in the base plane.
long intersection_number(const Curve& c, const SurfacePath& a, const SurfacePath& b, cplx shift);

struct SymplecticBasis {
  IntMatrix coeffs;  // columns are the new vectors; pairs (i, i+g) with B = +1
  int genus = 0;
  std::vector<long> elementary_divisors;
};
// Integer reduction of an alternating form to the standard shape.
SymplecticBasis symplectic_reduce(const IntMatrix& B);

IntMatrix standard_symplectic(int g);

// Loop that starts at the base point, moves to sheet s by lassos around the
// first branch point and then runs inner; the result returns to sheet 0.
BaseLoop on_sheet(const LoopSystem& ls, int s, const BaseLoop& inner);

}  // namespace regulab
