#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "regulab/mhs.hpp"

using namespace regulab;

namespace {

Mat<GQ> scalar_gq(const GQ& v) {
  Mat<GQ> m(1, 1);
  m(0, 0) = v;
  return m;
}

// Compare a class against a representative known from construction.
bool classes_agree(const CarlsonClass<GQ>& a, const Mat<GQ>& phi) {
  CarlsonClass<GQ> b = a;
  b.representative = phi;
  return a.equals(b);
}

ExtensionOfMHS<GQ> alternate_choices(std::mt19937_64& rng, const ExtensionOfMHS<GQ>& e) {
  std::uniform_int_distribution<int> d(-3, 3);
  ZMat K(e.sub.rank, e.quotient.rank);
  for (auto& v : K.a) v = d(rng);
  ZMat r = e.retraction + K * e.projection;
  Mat<GQ> s = e.section;
  auto f0 = f0_hom(e.quotient, e.sub);
  for (auto& phi0 : f0) s = s + convert<GQ>(e.inclusion) * phi0.scaled(GQ(Q(d(rng)), Q(1, 2)));
  return with_choices(e, r, s);
}

}  // namespace

TEST_CASE("Tate objects and weight-one blocks validate") {
  for (int n = -2; n <= 2; ++n) CHECK_NOTHROW(tate<GQ>(n).validate());
  CHECK_NOTHROW(weight_one_block<GQ>(GQ(Q(1, 3), Q(2)), 0).validate());
  CHECK_NOTHROW(weight_one_block<GQ>(GQ(Q(0), Q(1)), 1).validate());
  CHECK(tate<GQ>(1).lowest_weight() == -2);
  CHECK_THROWS_AS(weight_one_block<GQ>(GQ(Q(2)), 0).validate(), Error);
}

TEST_CASE("broken filtrations are rejected") {
  auto m = weight_one_block<GQ>(GQ(Q(0), Q(1)), 0);
  m.hodge[1] = Mat<GQ>::identity(2);
  CHECK_THROWS(m.validate());
  auto t = tate<GQ>(0);
  t.weight.clear();
  CHECK_THROWS(t.validate());
}

TEST_CASE("Kummer extension class is c modulo integers") {
  GQ c(Q(1, 3), Q(1, 5));
  auto e = kummer_extension<GQ>(c);
  auto cls = carlson_class(e);
  CHECK(cls.f0_basis.empty());
  CHECK(classes_agree(cls, scalar_gq(c)));
  CHECK(classes_agree(cls, scalar_gq(c + GQ(7))));
  CHECK_FALSE(classes_agree(cls, scalar_gq(c + GQ(Q(1, 2)))));
  CHECK_FALSE(classes_agree(cls, scalar_gq(c + GQ(Q(0), Q(1)))));
  CHECK(carlson_class(kummer_extension<GQ>(GQ(-4))).is_zero());
}

TEST_CASE("approximate mode agrees with exact mode on Kummer data") {
  auto e = kummer_extension<ApproxC>(ApproxC(cplx(0.25L, -0.5L)));
  auto cls = carlson_class(e);
  CarlsonClass<ApproxC> other = cls;
  other.representative(0, 0) = ApproxC(cplx(-2.75L, -0.5L));
  CHECK(cls.equals(other));
  other.representative(0, 0) = ApproxC(cplx(0.25L, 0.5L));
  CHECK_FALSE(cls.equals(other));
}

TEST_CASE("random extensions: class independent of retraction and section") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    auto A = random_block_sum(rng, 1 + trial % 3, 1, 2);
    auto B = random_block_sum(rng, 1 + (trial / 3) % 3, -1, 0);
    A.validate();
    B.validate();
    auto re = random_extension(rng, A, B);
    re.ext.total.validate();
    auto cls = carlson_class(re.ext);
    CHECK(classes_agree(cls, re.phi));
    auto canon = make_extension(re.ext.sub, re.ext.total, re.ext.quotient, re.ext.inclusion,
                                re.ext.projection);
    CHECK(carlson_class(canon).equals(cls));
    CHECK(carlson_class(alternate_choices(rng, re.ext)).equals(cls));
  }
}

TEST_CASE("Baer sum adds classes and negation negates") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    auto A = random_block_sum(rng, 2, 1, 2);
    auto B = random_block_sum(rng, 2, -1, 0);
    auto e1 = random_extension(rng, A, B), e2 = random_extension(rng, A, B);
    auto s = baer_sum(e1.ext, e2.ext, +1);
    s.total.validate();
    CHECK(classes_agree(carlson_class(s), e1.phi + e2.phi));
    auto d = baer_sum(e1.ext, e2.ext, -1);
    CHECK(classes_agree(carlson_class(d), e1.phi - e2.phi));
    CHECK(classes_agree(carlson_class(negate(e1.ext)), -e1.phi));
    auto z = baer_sum(e1.ext, e1.ext, -1);
    CHECK(carlson_class(z).is_zero());
  }
}

TEST_CASE("pullback and pushforward act by composition") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    auto A = random_block_sum(rng, 2, 1, 1);
    auto B = tate<GQ>(0);
    auto e = random_extension(rng, A, B);
    ZMat m(1, 1);
    m(0, 0) = 3;
    auto pb = pullback(e.ext, B, m);
    CHECK(classes_agree(carlson_class(pb), e.phi.scaled(GQ(3))));
    ZMat k = ZMat::identity(A.rank);
    k = k + k;
    auto pf = pushforward(e.ext, A, k);
    CHECK(classes_agree(carlson_class(pf), e.phi.scaled(GQ(2))));
    CHECK(classes_agree(carlson_class(multiple(e.ext, -5)), e.phi.scaled(GQ(-5))));
  }
}

TEST_CASE("non-separated extensions are refused") {
  auto A = tate<GQ>(0), B = tate<GQ>(0);
  Mat<GQ> phi(1, 1);
  auto e = graph_extension(A, B, phi);
  CHECK_THROWS_AS(carlson_class(e), Error);
}

TEST_CASE("non-exact data is reported") {
  ZMat i(2, 1), p(1, 2);
  i(0, 0) = 2;
  p(0, 1) = 1;
  CHECK_FALSE(exactness_defect(i, p, 1, 2, 1).empty());
  i(0, 0) = 1;
  CHECK(exactness_defect(i, p, 1, 2, 1).empty());
  p(0, 0) = 1;
  CHECK_FALSE(exactness_defect(i, p, 1, 2, 1).empty());
}

TEST_CASE("generalised Baer difference on rank-one blocks") {
  // A1 = Z(2), C1 = Z(1), B3 = Z(0); vertical classes c1, c2 and
  // horizontal classes phi1, phi2 : B3 -> B1.
  auto A1 = tate<GQ>(2), C1 = tate<GQ>(1), B3 = tate<GQ>(0);
  GQ c1(Q(1, 3), Q(1, 7)), c2(Q(-2, 5), Q(3, 4));
  auto v1 = graph_extension(A1, C1, scalar_gq(c1));
  auto v2 = graph_extension(A1, C1, scalar_gq(c2));
  Mat<GQ> phi1(2, 1), phi2(2, 1);
  phi1(0, 0) = GQ(Q(1, 2), Q(1));
  phi1(1, 0) = GQ(Q(2, 9), Q(-1, 3));
  phi2(0, 0) = GQ(Q(-1, 4));
  phi2(1, 0) = GQ(Q(5, 6), Q(1, 8));
  auto h1 = graph_extension(v1.total, B3, phi1);
  auto h2 = graph_extension(v2.total, B3, phi2);
  CrossDiagram<GQ> d1{v1, h1}, d2{v2, h2};
  for (auto [m, n] : std::vector<std::pair<long, long>>{{1, 1}, {2, 1}, {1, -3}}) {
    auto res = generalized_baer_difference(d1, d2, m, n);
    CHECK(res.horizontal_defect.empty());
    CHECK(res.vertical_defect.empty());
    // pushforward of the horizontal class along B1 -> C1 is the second entry
    GQ expect = GQ(m) * phi1(1, 0) - GQ(n) * phi2(1, 0);
    CHECK(classes_agree(carlson_class(res.F), scalar_gq(expect)));
    CHECK(carlson_class(res.B1).equals(carlson_class(baer_sum(v1, v2, -1))));
  }
}

TEST_CASE("mismatched diagrams name the failing arrow") {
  auto A1 = tate<GQ>(2), C1 = tate<GQ>(1), B3 = tate<GQ>(0);
  auto v = graph_extension(A1, C1, scalar_gq(GQ(Q(1, 3))));
  auto h = graph_extension(v.total, B3, Mat<GQ>(2, 1));
  CrossDiagram<GQ> d{v, h};
  CHECK_NOTHROW(d.validate());
  d.horizontal.sub = direct_sum(tate<GQ>(2), tate<GQ>(2));
  try {
    d.validate();
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("B1 -> B2") != std::string::npos);
  }
}

TEST_CASE("JSON round trip") {
  std::mt19937_64 rng(3);
  auto e = random_extension(rng, random_block_sum(rng, 2, 1, 2), random_block_sum(rng, 2, -1, 0));
  auto j = to_json(e.ext);
  auto back = extension_from_json(j);
  CHECK(same_mhs(back.total, e.ext.total));
  CHECK(carlson_class(back).equals(carlson_class(e.ext)));
  CHECK(to_json(back) == j);
}
