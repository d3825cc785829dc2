#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "regulab/quadrature.hpp"
#include "support/fixtures.hpp"

using namespace regulab;
using namespace regulab::testing;

namespace {

TraceOptions obstacles(const Curve& c) {
  TraceOptions o;
  o.obstacles = c.branch_points();
  return o;
}

std::vector<Disc> discs(const Curve& c, real r = 0.15L) {
  std::vector<Disc> d;
  for (cplx e : c.branch_points()) d.push_back({e, r});
  return d;
}

}  // namespace

TEST_CASE("panel rule integrates polynomials exactly") {
  const auto& rule = panel_rule();
  NodeValues v{};
  for (int k = 0; k < kNodes; ++k) v[k] = std::pow(cplx(rule.s[k]), 7) * cplx(1, 2);
  CHECK(std::abs(panel_sum(v) - cplx(1, 2) / 8.0L) < 1e-18L);
  auto prim = panel_primitive(v, 3);
  for (int k = 0; k < kNodes; ++k)
    CHECK(std::abs(prim[k] - (3.0L + cplx(1, 2) * std::pow(rule.s[k], 8) / 8.0L)) < 1e-17L);
  CHECK(std::abs(panel_interpolate(v, 0.37L) - std::pow(cplx(0.37L), 7) * cplx(1, 2)) < 1e-16L);
  CHECK(legendre_tail(v) < 1e-15L);
  CHECK(std::abs(legendre_series(legendre_coeffs(v), 0.81L) - panel_interpolate(v, 0.81L)) < 1e-16L);
}

TEST_CASE("adaptive cubature against closed forms") {
  auto smooth = [](real u, real v, cplx* out) { out[0] = std::exp(u + v); };
  auto r = adaptive_cubature(smooth, 1, 0, 1, 0, 1, 1e-14L, 1e-13L, 100000);
  CHECK(r.converged);
  CHECK(std::abs(r.value[0] - (std::exp(1.0L) - 1) * (std::exp(1.0L) - 1)) < 1e-12L);

  // 1/r over the unit square: 2 log(1 + sqrt 2)
  auto sing = [](real u, real v, cplx* out) { out[0] = 1 / std::sqrt(u * u + v * v); };
  auto s = adaptive_cubature(sing, 1, 0, 1, 0, 1, 1e-11L, 1e-11L, 2000000);
  CHECK(s.converged);
  CHECK(std::abs(s.value[0] - 2 * std::log(1 + std::sqrt(2.0L))) < 1e-9L);

  // vector integrand with an oscillating component
  auto vec = [](real u, real v, cplx* out) {
    out[0] = u * v;
    out[1] = std::exp(cplx(0, 6 * u));
  };
  auto w = adaptive_cubature(vec, 2, 0, 1, 0, 2, 1e-13L, 1e-12L, 200000, 2, 2);
  CHECK(std::abs(w.value[0] - cplx(1)) < 1e-12L);
  CHECK(std::abs(w.value[1] - 2.0L * (std::exp(cplx(0, 6)) - 1.0L) / cplx(0, 6)) < 1e-12L);
}

TEST_CASE("lasso around a branch point changes sheet") {
  const Curve& c = genus2().curve;
  cplx base(0.1L, 0.2L);
  auto d = discs(c);
  for (size_t k = 0; k < d.size(); ++k) {
    std::vector<Disc> others = d;
    others.erase(others.begin() + k);
    cplx y0 = c.fiber(base)[0];
    auto once = trace(c, lasso(base, d[k], others, 1), y0, obstacles(c));
    CHECK(std::abs(once.y1 + y0) < 1e-12L);
    auto twice = trace(c, lasso(base, d[k], others, 2), y0, obstacles(c));
    CHECK(twice.closed());
    CHECK(std::abs(continue_sheet(c, lasso(base, d[k], others, 1), y0) + y0) < 1e-12L);
  }
  // Fermat: three turns return
  const Curve& f = fermat3().curve;
  auto fd = discs(f);
  cplx y0 = f.fiber(base)[1];
  std::vector<Disc> others(fd.begin() + 1, fd.end());
  auto l1 = trace(f, lasso(base, fd[0], others, 1), y0, obstacles(f));
  CHECK(std::abs(l1.y1 - y0) > 0.1L);
  CHECK(trace(f, lasso(base, fd[0], others, 3), y0, obstacles(f)).closed());
}

TEST_CASE("closed loops enclosing every branch point") {
  const auto& m = genus2();
  auto ctx = context(m);
  BaseLoop circle{{BasePiece::Arc, 0, 0, 0, 2.5L, 0, 2 * kPi}};
  cplx x0 = 2.5L;
  for (cplx y0 : m.curve.fiber(x0)) {
    auto p = trace(m.curve, circle, y0, obstacles(m.curve));
    // odd degree: one turn swaps the sheets, two close up
    CHECK(std::abs(p.y1 + y0) < 1e-12L);
    auto p2 = trace(m.curve, power(circle, 2), y0, obstacles(m.curve));
    CHECK(p2.closed());
    // the loop bounds a disc around the single point at infinity, where
    // x^a dx / y has no residue
    for (int a = 0; a < 4; ++a)
      CHECK(std::abs(line_integral(ctx, Form::monomial(a, -1), p2).value) < 1e-12L);
    CHECK(std::abs(line_integral(ctx, Form::monomial(0, -1), p).value) > 0.1L);
  }
}

TEST_CASE("exact forms integrate to endpoint differences on random paths") {
  std::mt19937_64 rng(21);
  for (const CurveModel* m : {&genus2(), &fermat3()}) {
    auto ctx = context(*m);
    for (int k = 0; k < 10; ++k) {
      auto p = random_path(rng, *m, 4);
      CHECK(m->curve.residual(p.x1, p.y1) < 1e-12L);
      for (auto& pan : p.panels)
        for (int j = 0; j < kNodes; ++j) CHECK(m->curve.residual(pan.x[j], pan.y[j]) < 1e-11L);
      BiPoly G = random_bipoly(rng, 3, 2);
      cplx v = line_integral(ctx, Form::differential(G), p).value;
      CHECK(std::abs(v - (G(p.x1, p.y1) - G(p.x0, p.y0))) < 1e-11L * (1 + std::abs(v)));
      // sum of parts
      auto half = split(p, p.panels.size() / 2);
      SurfacePath joined = half.first;
      joined.append(half.second);
      CHECK(std::abs(line_integral(ctx, Form::monomial(1, 0), joined).value -
                     line_integral(ctx, Form::monomial(1, 0), p).value) < 1e-14L);
    }
  }
}

TEST_CASE("paths into a branch point stay regular") {
  const Curve& c = genus2().curve;
  cplx e = c.branch_points()[0];
  BasePiece in{BasePiece::ToBranch, cplx(0.2L, 0.1L), e};
  auto p = trace(c, {in}, c.fiber(cplx(0.2L, 0.1L))[0], obstacles(c));
  CHECK(std::abs(p.x1 - e) < 1e-14L);
  CHECK(std::abs(p.y1) < 1e-6L);
  // oracle: with x = e + (a - e) v^2 the integrand 2 (a - e) v / y is regular;
  // the path runs from v = 1 down to v = 0
  // y = v C prod_k sqrt((x - e_k)/(a - e_k)) over the other roots e_k; each
  // ratio stays off the negative axis because no root lies on the segment
  cplx a(0.2L, 0.1L), y0 = p.y0;
  std::vector<cplx> rest(c.branch_points().begin() + 1, c.branch_points().end());
  cplx C2 = a - e;
  for (cplx ek : rest) C2 *= a - ek;
  cplx C = std::sqrt(C2);
  if (std::abs(C - y0) > std::abs(C + y0)) C = -C;
  auto yv = [&](real v) {
    cplx x = e + (a - e) * v * v, y = v * C;
    for (cplx ek : rest) y *= std::sqrt((x - ek) / (a - ek));
    return y;
  };
  auto integrand = [&](real v, real, cplx* out) { out[0] = 2.0L * (a - e) * v / yv(v); };
  auto ref = adaptive_cubature(integrand, 1, 0, 1, 0, 1, 1e-15L, 1e-14L, 100000);
  FormContext ctx = context(genus2());
  cplx full = line_integral(ctx, Form::monomial(0, -1), p).value;
  CHECK(std::abs(full + ref.value[0]) < 1e-12L);
  CHECK(std::abs(p.reversed().x0 - e) < 1e-14L);
}

TEST_CASE("malformed paths are refused") {
  const Curve& c = genus2().curve;
  auto a = trace(c, detoured_line(0.1L, 0.5L, {}), c.fiber(0.1L)[0], obstacles(c));
  auto b = trace(c, detoured_line(0.7L, 0.9L, {}), c.fiber(0.7L)[0], obstacles(c));
  CHECK_THROWS_AS(a.append(b), Error);
  CHECK(SurfacePath{}.empty());
}
