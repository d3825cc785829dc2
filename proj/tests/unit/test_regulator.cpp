#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "regulab/regulator.hpp"
#include "support/fixtures.hpp"

using namespace regulab;
using namespace regulab::testing;

namespace {

struct Setup {
  const CurveModel* model;
  LoopSystem ls;
  PeriodFrame fr;
  MotivicCycle z;
};

const Setup& setup(const CurveModel& m) {
  static std::vector<std::unique_ptr<Setup>> cache;
  for (auto& s : cache)
    if (s->model == &m) return *s;
  auto s = std::make_unique<Setup>();
  s->model = &m;
  s->ls = build_loop_system(m);
  s->fr = compute_period_frame(m, s->ls);
  s->z = build_cycle(m, s->fr);
  cache.push_back(std::move(s));
  return *cache.back();
}

// Rounding x and y to long double moves f by about this much; near Q and R
// the numerator or denominator cancels and f itself is ill conditioned.
real evaluation_noise(const RationalFunction& f, cplx x, cplx y) {
  cplx n = f.num(x, y), d = f.den(x, y);
  cplx fx = f.scale * (f.num.dx()(x, y) * d - n * f.den.dx()(x, y)) / (d * d);
  cplx fy = f.scale * (f.num.dy()(x, y) * d - n * f.den.dy()(x, y)) / (d * d);
  real eps = std::numeric_limits<real>::epsilon();
  return eps * (std::abs(fx) * (1 + std::abs(x)) + std::abs(fy) * (1 + std::abs(y)));
}

}  // namespace

TEST_CASE("preimages of level values") {
  std::mt19937_64 rng(41);
  for (const CurveModel* m : {&genus2(), &fermat3()}) {
    LevelFibers fib(*m);
    std::uniform_real_distribution<double> ls(-40, 40), arg(0, 2 * kPi);
    for (int k = 0; k < 30; ++k) {
      cplx w = std::polar(std::exp(static_cast<real>(ls(rng))), static_cast<real>(arg(rng)));
      auto pts = fib(w);
      REQUIRE(static_cast<int>(pts.size()) == m->N);
      for (auto& p : pts) {
        CHECK(m->curve.residual(p.x, p.y) < 1e-10L * (1 + std::pow(std::abs(p.x), 5)));
        real noise = evaluation_noise(m->f, p.x, p.y);
        CHECK(std::abs(m->f(p.x, p.y) - w) < 1e-9L * std::abs(w) + 10 * noise);
      }
      // distinct points
      for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
          CHECK(std::abs(pts[i].x - pts[j].x) + std::abs(pts[i].y - pts[j].y) > 1e-12L);
    }
    // dx/df against a difference quotient at moderate w
    for (int k = 0; k < 10; ++k) {
      cplx w = std::polar(std::exp(static_cast<real>(ls(rng)) / 20), static_cast<real>(arg(rng)));
      cplx h = 1e-7L * std::abs(w);
      auto a = fib(w), b = fib(w + h);
      for (auto& p : a) {
        cplx best = b.front().x;
        for (auto& q : b)
          if (std::abs(q.x - p.x) < std::abs(best - p.x)) best = q.x;
        cplx fd = (best - p.x) / h;
        CHECK(std::abs(fd - p.dx_df) < 1e-5L * (1 + std::abs(fd)));
      }
    }
  }
}

TEST_CASE("endpoint charts") {
  for (const CurveModel* m : {&genus2(), &fermat3()}) {
    for (bool at_R : {false, true}) {
      auto ch = endpoint_chart(*m, at_R);
      CHECK(ch.N == m->N);
      CHECK(ch.trusted_level() > 0);
      for (real r : {0.1L, 0.5L}) {
        cplx u = std::polar(r * ch.umax, 0.7L);
        cplx x = ch.x_at(u), y = ch.y_at(u);
        cplx G = at_R ? cplx(1) / m->f(x, y) : m->f(x, y);
        cplx Gs = cplx(0);
        for (int k = 0; k < ch.G.size(); ++k) Gs += ch.G.a[k] * std::pow(u, ch.G.val + k);
        CHECK(std::abs(G - Gs) < 1e-12L * std::abs(G));
        CHECK(std::abs(G / (ch.lead * std::pow(u, ch.N)) - cplx(1)) < 0.5L);
        cplx target = 0.5L * Gs, u2 = u;
        REQUIRE(ch.solve(target, u2));
        cplx x2 = ch.x_at(u2), y2 = ch.y_at(u2);
        cplx G2 = at_R ? cplx(1) / m->f(x2, y2) : m->f(x2, y2);
        CHECK(std::abs(G2 / target - cplx(1)) < 1e-10L);
      }
    }
  }
}

TEST_CASE("level set gamma") {
  for (const CurveModel* m : {&genus2(), &fermat3()}) {
    const auto& s = setup(*m);
    const auto& g = s.z.gamma;
    CHECK(static_cast<int>(g.components.size()) == m->N);
    CHECK(g.max_arg_f < 1e-8L);
    CHECK(g.min_real_f > 0.99L);
    CHECK(g.endpoint_error < 1e-10L);
    CHECK(g.min_separation > 1e-3L);
    for (auto& c : g.components) {
      CHECK(std::abs(c.path.x0 - m->Q.x) + std::abs(c.path.y0 - m->Q.y) < 1e-10L);
      CHECK(std::abs(c.path.x1 - m->R.x) + std::abs(c.path.y1 - m->R.y) < 1e-10L);
      // f = (t / (1 - t))^N along the parametrisation
      for (size_t k = 0; k < c.path.panels.size(); ++k) {
        auto [t0, t1] = c.spans[k];
        if (t0 < 1e-3L || t1 > 1 - 1e-3L) continue;
        cplx fe = m->f(c.path.panels[k].xb, c.path.panels[k].yb);
        real expect = std::pow(t1 / (1 - t1), m->N);
        CHECK(std::abs(fe / expect - cplx(1)) < 1e-9L);
      }
    }
    // dz integrates to zero along gamma because N Q - N R is principal
    CHECK(gamma_period_defect(s.z) < 1e-8L);
  }
}

TEST_CASE("surface Gram matrix matches the bilinear relations") {
  for (const CurveModel* m : {&genus2(), &fermat3()}) {
    const auto& s = setup(*m);
    CHECK(s.z.surface.converged);
    CHECK(s.z.surface.gram_check < 1e-8L);
    for (int k = 0; k < s.fr.g; ++k)
      for (int j = 0; j < s.fr.g; ++j) {
        CVec anti = CVec::Zero(2 * s.fr.g);
        anti(s.fr.g + k) = 1;
        cplx oracle = s.fr.wedge(anti, s.fr.dz_coords(j));
        CHECK(std::abs(s.z.surface.gram(k, j) - oracle) < 1e-8L * (1 + std::abs(oracle)));
      }
  }
}

TEST_CASE("regulator pairing identities") {
  const auto& s = setup(genus2());
  const auto& fr = s.fr;
  const auto& z = s.z;
  // holomorphic phi: phi ^ psi vanishes, only the boundary survives
  for (int k = 0; k < fr.g; ++k)
    for (int m = 0; m < fr.g; ++m) {
      auto e = regulator_pair(z, fr.dz_coords(k), fr.dz_coords(m));
      CHECK(std::abs(e.surface) < 1e-12L);
      CHECK(std::abs(e.value - kTwoPiI * e.boundary) < 1e-12L);
    }
  // boundary term is antisymmetric
  for (int c = 0; c < fr.N; ++c)
    CHECK(std::abs(boundary_term(z, c, fr.dz_coords(0), fr.dz_coords(1)) +
                   boundary_term(z, c, fr.dz_coords(1), fr.dz_coords(0))) < 1e-12L);
  // linearity in phi
  CVec a = fr.dx_coords(0), b = fr.dx_coords(3);
  cplx lam(0.4L, -1.3L);
  auto ra = regulator_pair(z, a, fr.dz_coords(1)), rb = regulator_pair(z, b, fr.dz_coords(1));
  auto rab = regulator_pair(z, CVec(lam * a + b), fr.dz_coords(1));
  CHECK(std::abs(rab.value - (lam * ra.value + rb.value)) < 1e-10L * (1 + std::abs(rab.value)));
  // psi must be holomorphic
  CHECK_THROWS_AS(regulator_pair(z, fr.dz_coords(0), fr.dx_coords(0)), Error);
}

TEST_CASE("disc identity") {
  const auto& s = setup(genus2());
  const auto& fr = s.fr;
  for (auto [j, i] : std::vector<std::pair<int, int>>{{0, 1}, {2, 0}}) {
    for (int c = 0; c < fr.N; ++c) {
      auto d = disc_integral(s.z, c, fr.dx_coords(j), fr.dz_coords(i));
      cplx b = boundary_term(s.z, c, fr.dx_coords(j), fr.dz_coords(i));
      CHECK(d.converged);
      CHECK(std::abs(d.value - b) < 1e-8L * (1 + std::abs(b)));
    }
  }
}

TEST_CASE("branch of the logarithm moves the regulator by a lattice element") {
  const auto& s = setup(genus2());
  const auto& fr = s.fr;
  SurfaceOptions lifted;
  lifted.branch_lift = 1;
  MotivicCycle z1 = build_cycle(genus2(), fr, s.z.gamma, lifted);
  for (int j = 0; j < 2 * fr.g; ++j)
    for (int i = 0; i < fr.g; ++i) {
      CVec phi = fr.dx_coords(j), psi = fr.dz_coords(i);
      cplx d = regulator_pair(z1, phi, psi).value - regulator_pair(s.z, phi, psi).value;
      // log f shifts by 2 pi i on C minus gamma
      cplx expect = 2.0L * kTwoPiI * fr.wedge(phi, psi);
      CHECK(std::abs(d - expect) < 1e-8L);
    }
}

TEST_CASE("decomposable cycles") {
  const auto& fr = setup(genus2()).fr;
  for (int j = 0; j < 2 * fr.g; ++j)
    for (int i = 0; i < fr.g; ++i) {
      CVec phi = fr.dx_coords(j), psi = fr.dz_coords(i);
      CHECK(std::abs(decomposable_regulator(1, phi, psi, fr)) < 1e-15L);
      cplx a(2.5L, 1);
      CHECK(std::abs(decomposable_regulator(a, phi, psi, fr) - std::log(a) * fr.wedge(phi, psi)) <
            1e-14L);
      CHECK(std::abs(decomposable_regulator(a, fr.dz_coords(j % fr.g), psi, fr)) < 1e-14L);
    }
  CHECK_THROWS_AS(decomposable_regulator(0, fr.dx_coords(0), fr.dz_coords(0), fr), Error);
}
