#include <random>

#include "regulab/mhs.hpp"

namespace regulab {

namespace {

Mat<GQ> random_matrix(std::mt19937_64& rng, int r, int c) {
  Mat<GQ> m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = random_gq(rng, 9, 7);
  return m;
}

bool has_class(const ExtensionOfMHS<GQ>& e, const Mat<GQ>& phi) {
  CarlsonClass<GQ> a = carlson_class(e);
  CarlsonClass<GQ> b = a;
  b.representative = phi;
  return a.equals(b);
}

void note(MhsSelftest& st, const std::string& s) {
  if (st.notes.size() < 8) st.notes.push_back(s);
}

}  // namespace

MhsSelftest mhs_selftest(std::uint64_t seed, int extension_cases, int diagram_cases) {
  std::mt19937_64 rng(seed);
  MhsSelftest st;
  for (int k = 0; k < extension_cases; ++k) {
    auto A = random_block_sum(rng, 2, 1, 2);
    auto B = random_block_sum(rng, 2, -1, 0);
    st.max_rank = std::max(st.max_rank, A.rank + B.rank);
    auto e1 = random_extension(rng, A, B), e2 = random_extension(rng, A, B);
    ++st.extension_cases;
    bool ok = has_class(baer_sum(e1.ext, e2.ext, +1), e1.phi + e2.phi) &&
              has_class(baer_sum(e1.ext, e2.ext, -1), e1.phi - e2.phi) &&
              carlson_class(baer_sum(e1.ext, e1.ext, -1)).is_zero();
    if (!ok) {
      ++st.additivity_failures;
      note(st, "additivity fails in case " + std::to_string(k));
    }
  }
  std::uniform_int_distribution<long> mult(-3, 3);
  for (int k = 0; k < diagram_cases; ++k) {
    auto A1 = random_block_sum(rng, 1 + k % 2, 3, 3);
    auto C1 = random_block_sum(rng, 1 + (k / 2) % 2, 1, 1);
    auto B3 = random_block_sum(rng, 1, -1, -1);
    auto v1 = graph_extension(A1, C1, random_matrix(rng, A1.rank, C1.rank));
    auto v2 = graph_extension(A1, C1, random_matrix(rng, A1.rank, C1.rank));
    Mat<GQ> h1 = random_matrix(rng, A1.rank + C1.rank, B3.rank);
    Mat<GQ> h2 = random_matrix(rng, A1.rank + C1.rank, B3.rank);
    CrossDiagram<GQ> d1{v1, graph_extension(v1.total, B3, h1)};
    CrossDiagram<GQ> d2{v2, graph_extension(v2.total, B3, h2)};
    long m = mult(rng), n = mult(rng);
    if (m == 0) m = 1;
    if (n == 0) n = -1;
    ++st.diagram_cases;
    auto res = generalized_baer_difference(d1, d2, m, n);
    if (!res.horizontal_defect.empty() || !res.vertical_defect.empty()) {
      ++st.exactness_failures;
      note(st, "diagram " + std::to_string(k) + ": " + res.horizontal_defect + " " +
                   res.vertical_defect);
    }
    // class of F is m (push of h1 to C1) - n (push of h2 to C1)
    std::vector<int> crow;
    for (int i = 0; i < C1.rank; ++i) crow.push_back(A1.rank + i);
    Mat<GQ> expect = h1.rows(crow).scaled(GQ(m)) - h2.rows(crow).scaled(GQ(n));
    if (!has_class(res.F, expect)) {
      ++st.identity_failures;
      note(st, "class identity fails in diagram " + std::to_string(k));
    }
  }
  return st;
}

}  // namespace regulab
