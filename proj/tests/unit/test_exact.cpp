#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "regulab/exact.hpp"

using namespace regulab;

namespace {

ZMat zmat(int r, int c, std::initializer_list<long> v) {
  ZMat m(r, c);
  int k = 0;
  for (long x : v) m.a[k++] = x;
  return m;
}

ZMat random_zmat(std::mt19937_64& rng, int r, int c, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  ZMat m(r, c);
  for (auto& v : m.a) v = d(rng);
  return m;
}

bool diagonal_divides(const ZMat& D, int rank) {
  for (int i = 0; i < D.r; ++i)
    for (int j = 0; j < D.c; ++j)
      if (i != j && D(i, j) != 0) return false;
  for (int i = 0; i + 1 < rank; ++i)
    if (D(i + 1, i + 1) % D(i, i) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("parse rationals and Gaussian rationals") {
  CHECK(parse_q("3/4") == Q(3, 4));
  CHECK(parse_q("-0.25") == Q(-1, 4));
  CHECK(parse_q("7") == Q(7));
  CHECK(parse_gq("1/2+3i") == GQ(Q(1, 2), Q(3)));
  CHECK(parse_gq("-i") == GQ(Q(0), Q(-1)));
  CHECK(parse_gq("2-1/3i") == GQ(Q(2), Q(-1, 3)));
  CHECK(to_string(GQ(Q(1, 2), Q(-1))) == "1/2-i");
  CHECK_THROWS(parse_q("1/0"));
}

TEST_CASE("Smith form of a textbook matrix") {
  ZMat m = zmat(3, 3, {2, 4, 4, -6, 6, 12, 10, -4, -16});
  Smith s = smith(m);
  CHECK(s.U * m * s.V == s.D);
  CHECK(is_unimodular(s.U));
  CHECK(is_unimodular(s.V));
  CHECK(s.D(0, 0) == 2);
  CHECK(s.D(1, 1) == 6);
  CHECK(s.D(2, 2) == 12);
}

TEST_CASE("Smith form on random integer matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    int r = 1 + trial % 5, c = 1 + (trial / 5) % 5;
    ZMat m = random_zmat(rng, r, c, 9);
    Smith s = smith(m);
    REQUIRE(s.U * m * s.V == s.D);
    CHECK(is_unimodular(s.U));
    CHECK(is_unimodular(s.V));
    CHECK(diagonal_divides(s.D, s.rank));
    CHECK(s.rank == rank(to_q(m)));
  }
}

TEST_CASE("Hermite form spans the same lattice") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    ZMat m = random_zmat(rng, 3, 4, 6);
    ZMat h = hnf(m);
    CHECK(h.c == rank(to_q(m)));
    for (int j = 0; j < m.c; ++j) CHECK(integer_solve(h, m.cols({j})).has_value());
    for (int j = 0; j < h.c; ++j) CHECK(integer_solve(m, h.cols({j})).has_value());
  }
}

TEST_CASE("integer solve detects non-integral systems") {
  ZMat m = zmat(2, 2, {2, 0, 0, 3});
  CHECK(integer_solve(m, zmat(2, 1, {4, 9})).has_value());
  CHECK_FALSE(integer_solve(m, zmat(2, 1, {1, 0})).has_value());
  QMat q = to_q(m);
  QMat b(2, 1);
  b(0, 0) = Q(1, 2);
  b(1, 0) = 0;
  CHECK_FALSE(integer_solve(q, b).has_value());
}

TEST_CASE("integer kernel is saturated") {
  ZMat m = zmat(1, 3, {2, 4, 6});
  ZMat k = integer_kernel(m);
  CHECK(k.c == 2);
  CHECK(m * k == ZMat(1, 2));
  Smith s = smith(k);
  for (int i = 0; i < s.rank; ++i) CHECK(s.D(i, i) == 1);
}

TEST_CASE("field linear algebra over Q(i)") {
  Mat<GQ> m(2, 3);
  m(0, 0) = GQ(Q(1), Q(1));
  m(0, 1) = GQ(2);
  m(1, 0) = GQ(Q(2), Q(2));
  m(1, 1) = GQ(4);
  m(1, 2) = GQ(Q(0), Q(1));
  CHECK(rank(m) == 2);
  Mat<GQ> k = kernel(m);
  CHECK(k.c == 1);
  CHECK(m * k == Mat<GQ>(2, 1));
  Mat<GQ> inv = inverse(Mat<GQ>(m.cols({0, 2})));
  CHECK(Mat<GQ>(m.cols({0, 2})) * inv == Mat<GQ>::identity(2));
  Mat<GQ> ann = annihilator(k, 3);
  CHECK(ann.r == 2);
  CHECK(ann * k == Mat<GQ>(2, 1));
}

TEST_CASE("approximate field respects its tolerance") {
  Mat<ApproxC> m(2, 2);
  m(0, 0) = ApproxC(cplx(1, 0));
  m(0, 1) = ApproxC(cplx(2, 0));
  m(1, 0) = ApproxC(cplx(2, 0));
  m(1, 1) = ApproxC(cplx(4 + 1e-14L, 0));
  CHECK(rank(m) == 1);
  m(1, 1) = ApproxC(cplx(4 + 1e-6L, 0));
  CHECK(rank(m) == 2);
}

TEST_CASE("determinant and unimodular inverse") {
  ZMat u = zmat(3, 3, {1, 2, 0, 0, 1, 5, 0, 0, 1});
  CHECK(det(u) == 1);
  CHECK(u * unimodular_inverse(u) == ZMat::identity(3));
  CHECK_THROWS(unimodular_inverse(zmat(2, 2, {2, 0, 0, 1})));
}
