#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/fixtures.hpp"

using namespace regulab;
using namespace regulab::testing;

namespace {

cplx I(const FormContext& ctx, const std::vector<Form>& w, const SurfacePath& p) {
  return iterated_integral(ctx, w, p).value;
}

bool close(cplx a, cplx b, real tol = 1e-10L) {
  return std::abs(a - b) <= tol * (1 + std::abs(a) + std::abs(b));
}

Form holomorphic_part(const Form& w) {
  Form h;
  for (auto& t : w.terms)
    if (!t.anti) h.terms.push_back(t);
  return h;
}

}  // namespace

TEST_CASE("composition of paths") {
  std::mt19937_64 rng(11);
  for (const CurveModel* m : {&genus2(), &fermat3()}) {
    auto ctx = context(*m);
    for (int trial = 0; trial < 8; ++trial) {
      auto p = random_path(rng, *m);
      REQUIRE(p.panels.size() >= 2);
      auto [a, b] = split(p, p.panels.size() / 2);
      Form w1 = random_form(rng, *m), w2 = random_form(rng, *m), w3 = random_form(rng, *m);
      cplx lhs = I(ctx, {w1, w2}, p);
      cplx rhs = I(ctx, {w1, w2}, a) + I(ctx, {w1}, a) * I(ctx, {w2}, b) + I(ctx, {w1, w2}, b);
      CHECK(close(lhs, rhs));
      cplx lhs3 = I(ctx, {w1, w2, w3}, p);
      cplx rhs3 = I(ctx, {w1, w2, w3}, a) + I(ctx, {w1, w2}, a) * I(ctx, {w3}, b) +
                  I(ctx, {w1}, a) * I(ctx, {w2, w3}, b) + I(ctx, {w1, w2, w3}, b);
      CHECK(close(lhs3, rhs3));
    }
  }
}

TEST_CASE("shuffle relations") {
  std::mt19937_64 rng(12);
  for (const CurveModel* m : {&genus2(), &fermat3()}) {
    auto ctx = context(*m);
    for (int trial = 0; trial < 8; ++trial) {
      auto p = random_path(rng, *m);
      Form w1 = random_form(rng, *m), w2 = random_form(rng, *m), w3 = random_form(rng, *m);
      CHECK(close(I(ctx, {w1, w2}, p) + I(ctx, {w2, w1}, p), I(ctx, {w1}, p) * I(ctx, {w2}, p)));
      // (w1) sh (w2 w3) = w1w2w3 + w2w1w3 + w2w3w1
      cplx sh = I(ctx, {w1, w2, w3}, p) + I(ctx, {w2, w1, w3}, p) + I(ctx, {w2, w3, w1}, p);
      CHECK(close(sh, I(ctx, {w1}, p) * I(ctx, {w2, w3}, p)));
    }
  }
}

TEST_CASE("reversal swaps the order") {
  std::mt19937_64 rng(13);
  const auto& m = genus2();
  auto ctx = context(m);
  for (int trial = 0; trial < 5; ++trial) {
    auto p = random_path(rng, m);
    Form w1 = random_form(rng, m), w2 = random_form(rng, m);
    CHECK(close(I(ctx, {w1}, p.reversed()), -I(ctx, {w1}, p)));
    CHECK(close(I(ctx, {w1, w2}, p.reversed()), I(ctx, {w2, w1}, p)));
  }
}

TEST_CASE("exact first or last form reduces to a length-one integral") {
  std::mt19937_64 rng(14);
  for (const CurveModel* m : {&genus2(), &fermat3()}) {
    auto ctx = context(*m);
    for (int trial = 0; trial < 8; ++trial) {
      auto p = random_path(rng, *m);
      BiPoly G = random_bipoly(rng);
      Form w = holomorphic_part(random_form(rng, *m, false));
      Form dG = Form::differential(G);
      cplx Gs = G(p.x0, p.y0), Ge = G(p.x1, p.y1);
      cplx Gw = I(ctx, {w.times(G)}, p), lw = I(ctx, {w}, p);
      CHECK(close(I(ctx, {dG}, p), Ge - Gs));
      CHECK(close(I(ctx, {dG, w}, p), Gw - Gs * lw));
      CHECK(close(I(ctx, {w, dG}, p), Ge * lw - Gw));
      CHECK(close(exact_form_reduction(Side::Left, G, ctx, w, p).value, Gw - Gs * lw));
      CHECK(close(exact_form_reduction(Side::Right, G, ctx, w, p).value, Ge * lw - Gw));
    }
  }
}

TEST_CASE("df/f integrates to the change of log f") {
  std::mt19937_64 rng(15);
  for (const CurveModel* m : {&genus2(), &fermat3()}) {
    auto ctx = context(*m);
    for (int trial = 0; trial < 5; ++trial) {
      auto p = random_path(rng, *m);
      cplx v = I(ctx, {Form::dlog_f()}, p);
      cplx ratio = m->f(p.x1, p.y1) / m->f(p.x0, p.y0);
      CHECK(std::abs(std::exp(v) - ratio) < 1e-10L * std::abs(ratio));
      auto br = log_f_branch(ctx, p, std::log(m->f(p.x0, p.y0)));
      CHECK(br.consistency < 1e-10L);
      CHECK(close(br.end - br.start, v));
    }
  }
}

TEST_CASE("forms algebra") {
  std::mt19937_64 rng(16);
  const auto& m = genus2();
  auto ctx = context(m);
  auto p = random_path(rng, m);
  Form a = random_form(rng, m), b = random_form(rng, m);
  cplx s(0.3L, -1.7L);
  CHECK(close(I(ctx, {a + b.scaled(s)}, p), I(ctx, {a}, p) + s * I(ctx, {b}, p)));
  Form h = holomorphic_part(a);
  h.terms.push_back({cplx(0, 2), 1, -1, true});
  CHECK(close(I(ctx, {h.conjugate()}, p), std::conj(I(ctx, {h}, p))));
  CHECK_THROWS(Form::dlog_f().times(BiPoly::constant(1)));
  CHECK_THROWS(iterated_integral(ctx, {}, p));
}
