#pragma once
// Shared models and random samples for the unit and acceptance tests.
#include <random>
#include <string>

#include "regulab/chen.hpp"
#include "regulab/config.hpp"
#include "regulab/loops.hpp"

namespace regulab::testing {

inline std::string config_path(const std::string& name) {
  return std::string(REGULAB_SOURCE_DIR) + "/configs/" + name;
}

inline CurveModel load_model(const std::string& name) {
  return model_from_config(load_config(config_path(name)).raw);
}

inline const CurveModel& genus2() {
  static const CurveModel m = load_model("genus2.toml");
  return m;
}

inline const CurveModel& fermat3() {
  static const CurveModel m = load_model("fermat3.toml");
  return m;
}

inline FormContext context(const CurveModel& m) { return {&m.curve, &m.f}; }

inline cplx random_complex(std::mt19937_64& rng, real scale = 1) {
  std::uniform_real_distribution<double> d(-1, 1);
  return cplx(scale * d(rng), scale * d(rng));
}

// Open path through `hops` random base points, detouring around the branch
// points and the x-coordinates of Q and R, starting on a random sheet.
inline SurfacePath random_path(std::mt19937_64& rng, const CurveModel& m, int hops = 3,
                               real box = 1.6L) {
  const Curve& c = m.curve;
  std::vector<Disc> discs;
  TraceOptions opt;
  for (cplx e : c.branch_points()) {
    discs.push_back({e, 0.12L});
    opt.obstacles.push_back(e);
  }
  for (cplx x : {m.Q.x, m.R.x}) {
    if (!c.is_branch(x)) {
      discs.push_back({x, 0.12L});
      opt.obstacles.push_back(x);
    }
  }
  auto clear = [&](cplx z) {
    for (auto& d : discs)
      if (std::abs(z - d.center) < 1.5L * d.radius) return false;
    return true;
  };
  auto draw = [&] {
    for (;;) {
      cplx z = random_complex(rng, box);
      if (clear(z)) return z;
    }
  };
  cplx a = draw();
  BaseLoop pieces;
  for (int k = 0; k < hops; ++k) {
    cplx b = draw();
    pieces = pieces + detoured_line(a, b, discs);
    a = b;
  }
  auto fib = c.fiber(pieces.front().start());
  std::uniform_int_distribution<int> sheet(0, static_cast<int>(fib.size()) - 1);
  return trace(c, pieces, fib[sheet(rng)], opt);
}

// Random holomorphic plus antiholomorphic plus smooth monomial terms, with an
// optional multiple of df/f.
inline Form random_form(std::mt19937_64& rng, const CurveModel& m, bool with_dlog = true) {
  std::uniform_int_distribution<int> pick(0, 2);
  Form w;
  int b_hol = m.curve.n() == 2 ? -1 : 1 - m.curve.n();
  for (int k = 0; k < 3; ++k) {
    FormTerm t;
    t.coef = random_complex(rng);
    t.a = pick(rng);
    t.b = (k == 1) ? pick(rng) : b_hol;
    t.anti = (k == 2);
    w.terms.push_back(t);
  }
  if (with_dlog) w.dlog = random_complex(rng, 0.5L);
  return w;
}

inline BiPoly random_bipoly(std::mt19937_64& rng, int dx = 2, int dy = 1) {
  BiPoly G;
  for (int i = 0; i <= dx; ++i)
    for (int j = 0; j <= dy; ++j) G.at(i, j) = random_complex(rng);
  return G;
}

// Panels [0, k) and [k, end) of a path as two paths.
inline std::pair<SurfacePath, SurfacePath> split(const SurfacePath& p, size_t k) {
  SurfacePath a, b;
  a.panels.assign(p.panels.begin(), p.panels.begin() + k);
  b.panels.assign(p.panels.begin() + k, p.panels.end());
  for (SurfacePath* q : {&a, &b}) {
    q->x0 = q->panels.front().xa;
    q->y0 = q->panels.front().ya;
    q->x1 = q->panels.back().xb;
    q->y1 = q->panels.back().yb;
  }
  return {a, b};
}

}  // namespace regulab::testing
