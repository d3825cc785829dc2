#pragma once
// Sheet-tracked paths on y^n = p(x). A path is a list of panels, each holding
// the 20 Gauss nodes of its own parameter interval with x, y and dx/ds.
#include <string>
#include <vector>

#include "regulab/curve.hpp"
#include "regulab/quadrature.hpp"

namespace regulab {

struct Panel {
  NodeValues x{}, y{}, dx{};  // dx = dx/ds on the panel variable s in [0, 1]
  cplx xa = 0, ya = 0, xb = 0, yb = 0;
  Panel reversed() const;
};

struct SurfacePath {
  std::vector<Panel> panels;
  cplx x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  bool empty() const { return panels.empty(); }
  bool closed(real tol = 1e-9L) const;
  SurfacePath reversed() const;
  // appends other, which must start where this path ends
  void append(const SurfacePath& other, real tol = 1e-8L);
  // dense samples of (x, y) for plotting and intersection tests
  std::vector<std::pair<cplx, cplx>> polyline(int per_panel = 24) const;
};

SurfacePath concat(const std::vector<SurfacePath>& parts);

// Base-plane pieces. A ToBranch piece ends at a branch point e and uses the
// local parameter v with x = e + v^n so that y stays regular.
struct BasePiece {
  enum Kind { Line, Arc, ToBranch, FromBranch } kind = Line;
  cplx a = 0, b = 0;         // Line: a -> b; ToBranch: a -> branch point b; FromBranch: b -> a
  cplx center = 0;           // Arc
  real radius = 0, theta0 = 0, theta1 = 0;
  BasePiece reversed() const;
  cplx start() const;
  cplx end() const;
};

using BaseLoop = std::vector<BasePiece>;
BaseLoop reversed(const BaseLoop& l);
BaseLoop operator+(const BaseLoop& a, const BaseLoop& b);
BaseLoop power(const BaseLoop& l, int k);  // negative k uses the reverse

struct TraceOptions {
  std::vector<cplx> obstacles;  // points whose 1/(x - o) dx must be resolved
  real tail_tol = 1e-14L;
  int max_depth = 40;
};

// Traces the pieces in order starting above start() at height y0. A leading
// FromBranch piece starts where all sheets meet, so there y0 instead names the
// fibre point the piece should end at.
SurfacePath trace(const Curve& c, const BaseLoop& pieces, cplx y0, const TraceOptions& opt);
SurfacePath trace_piece(const Curve& c, const BasePiece& piece, cplx y0, const TraceOptions& opt,
                        cplx y_end_hint = 0);

// Straight path from a to b with clockwise circular detours around each
// obstacle disc the segment enters (so the obstacle stays on the right).
struct Disc {
  cplx center;
  real radius;
};
BaseLoop detoured_line(cplx a, cplx b, const std::vector<Disc>& discs);

// Lasso: detoured line to the disc around centre, `turns` counterclockwise
// turns, and the same line back.
BaseLoop lasso(cplx base, const Disc& target, const std::vector<Disc>& others, int turns = 1);

// Continues y around the given base loop from y0 (monodromy probe).
cplx continue_sheet(const Curve& c, const BaseLoop& loop, cplx y0);

}  // namespace regulab
