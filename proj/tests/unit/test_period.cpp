#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "regulab/period.hpp"
#include "support/fixtures.hpp"

using namespace regulab;
using namespace regulab::testing;

namespace {

struct Setup {
  const CurveModel* model;
  LoopSystem ls;
  PeriodFrame fr;
};

const Setup& setup(const CurveModel& m) {
  static std::vector<std::unique_ptr<Setup>> cache;
  for (auto& s : cache)
    if (s->model == &m) return *s;
  auto s = std::make_unique<Setup>();
  s->model = &m;
  s->ls = build_loop_system(m);
  s->fr = compute_period_frame(m, s->ls);
  cache.push_back(std::move(s));
  return *cache.back();
}

long pairing(const IntMatrix& B, const IntMatrix& C, int a, int b) {
  long s = 0;
  for (size_t i = 0; i < B.size(); ++i)
    for (size_t j = 0; j < B.size(); ++j) s += C[i][a] * B[i][j] * C[j][b];
  return s;
}

}  // namespace

TEST_CASE("loop system") {
  for (const CurveModel* m : {&genus2(), &fermat3()}) {
    const auto& ls = setup(*m).ls;
    int g = m->curve.genus();
    CHECK(ls.intersection == standard_symplectic(g));
    CHECK(std::abs(ls.beta_winding - m->N) < 1e-9L);
    for (real w : ls.alpha_winding) CHECK(std::abs(w) < 1e-8L);
    for (real d : ls.winding_defect) CHECK(d < 1e-8L);
    for (auto& p : ls.alpha) CHECK(p.closed());
    CHECK(ls.beta_Q.closed());
    // combinatorial intersections are alternating
    const auto& B = ls.candidate_intersections;
    for (size_t i = 0; i < B.size(); ++i)
      for (size_t j = 0; j < B.size(); ++j) CHECK(B[i][j] == -B[j][i]);
  }
}

TEST_CASE("symplectic reduction of random alternating forms") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> d(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + 2 * (trial % 3);
    // build from a unimodular change of the standard form so the result is known
    IntMatrix U(n, std::vector<long>(n, 0));
    for (int i = 0; i < n; ++i) {
      U[i][i] = 1;
      for (int j = i + 1; j < n; ++j) U[i][j] = d(rng);
    }
    IntMatrix J = standard_symplectic(n / 2), B(n, std::vector<long>(n, 0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) B[a][b] = pairing(J, U, a, b);
    auto sb = symplectic_reduce(B);
    REQUIRE(sb.genus == n / 2);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) CHECK(pairing(B, sb.coeffs, a, b) == J[a][b]);
  }
}

TEST_CASE("Riemann relations and duality") {
  for (const CurveModel* m : {&genus2(), &fermat3()}) {
    const auto& fr = setup(*m).fr;
    CHECK(fr.symmetry_error < 1e-10L);
    CHECK(fr.min_imag_eigen > 0.01L);
    CHECK(fr.duality_error < 1e-10L);
    CHECK(fr.alpha_duality_error < 1e-9L);
    CHECK(fr.alpha_dx_error < 1e-9L);
    // periods of dz over alpha'_i for i < g form the identity
    for (int i = 0; i < fr.g; ++i)
      for (int j = 0; j < fr.g; ++j)
        CHECK(std::abs(fr.periods(i, j) - cplx(i == j ? 1 : 0)) < 1e-12L);
    // wedge of the harmonic duals is the intersection form
    for (int i = 0; i < 2 * fr.g; ++i)
      for (int j = 0; j < 2 * fr.g; ++j) {
        cplx w = fr.wedge(fr.dx_coords(i), fr.dx_coords(j));
        real expect = (j == fr.sigma[i]) ? fr.c[i] : 0;
        CHECK(std::abs(w - expect) < 1e-9L);
      }
  }
}

TEST_CASE("automorphism x -> zeta x preserves the period lattice") {
  for (const CurveModel* m : {&genus2(), &fermat3()}) {
    const auto& fr = setup(*m).fr;
    int d = m->curve.p().degree();
    std::vector<CVec> lattice;
    for (int k = 0; k < 2 * fr.g; ++k) lattice.push_back(fr.raw_periods.col(k));
    for (int k = 0; k < 2 * fr.g; ++k) {
      CVec v(fr.g);
      for (int i = 0; i < fr.g; ++i)
        v(i) = root_of_unity(fr.raw_basis[i].a + 1, d) * fr.raw_periods(i, k);
      auto jv = reduce_mod_lattice(v, lattice);
      CHECK(jv.residual < 1e-10L);
    }
  }
}

TEST_CASE("Fermat cubic has the hexagonal period") {
  cplx tau = setup(fermat3()).fr.A(0, 0);
  for (int it = 0; it < 50; ++it) {
    tau -= std::round(tau.real());
    if (std::abs(tau) < 1 - 1e-12L) tau = -cplx(1) / tau;
    else break;
  }
  CHECK(std::abs(std::abs(tau) - 1) < 1e-10L);
  CHECK(std::abs(std::abs(tau.real()) - 0.5L) < 1e-10L);
}

TEST_CASE("lattice reduction") {
  std::mt19937_64 rng(32);
  const auto& fr = setup(genus2()).fr;
  auto L = fr.lattice();
  std::uniform_int_distribution<long> d(-9, 9);
  for (int trial = 0; trial < 20; ++trial) {
    CVec noise(fr.g);
    for (int i = 0; i < fr.g; ++i) noise(i) = random_complex(rng, 0.05L);
    CVec v = noise;
    std::vector<long> coeff(L.size());
    for (size_t k = 0; k < L.size(); ++k) {
      coeff[k] = d(rng);
      v += static_cast<real>(coeff[k]) * L[k];
    }
    auto jv = reduce_mod_lattice(v, L);
    CHECK(jv.coefficients == coeff);
    CHECK((jv.reduced - noise).norm() < 1e-12L);
  }
  CVec far = 1e5L * L[0];
  CHECK_THROWS_AS(reduce_mod_lattice(far, L, 50), Error);
}

TEST_CASE("Abel-Jacobi image of the function's divisor") {
  for (const CurveModel* m : {&genus2(), &fermat3()}) {
    const auto& s = setup(*m);
    auto tors = abel_jacobi(*m, s.ls, s.fr, {{m->Q, m->N}, {m->R, -m->N}});
    CHECK(tors.residual < 1e-9L);
    auto one = abel_jacobi(*m, s.ls, s.fr, {{m->Q, 1}, {m->R, -1}});
    CHECK(one.residual > 1e-3L);
    // additivity: twice the class equals the class of the doubled divisor
    auto two = abel_jacobi(*m, s.ls, s.fr, {{m->Q, 2}, {m->R, -2}});
    auto diff = reduce_mod_lattice(two.vector - 2.0L * one.vector, s.fr.lattice());
    CHECK(diff.residual < 1e-9L);
    CHECK_THROWS_AS(abel_jacobi(*m, s.ls, s.fr, {{m->Q, 1}}), Error);
  }
}
