#pragma once
// Finite-rank mixed Hodge structures over Z, their extensions and the
// Carlson classification of separated extensions.
//
// Coordinates: lattices are Z^rank. A Tate object Z(n) is stored with the
// factor (2 pi i)^n absorbed into the lattice generator, so every Hodge
// filtration below has entries in Q(i) (exact mode) or C (approximate mode).
#include <map>
#include <random>
#include <string>

#include <json.hpp>

#include "regulab/exact.hpp"

namespace regulab {

template <class K>
struct MixedHodgeStructure {
  int rank = 0;
  std::map<int, QMat> weight;   // k -> basis of W_k at each jump
  std::map<int, Mat<K>> hodge;  // p -> basis of F^p at each jump

  QMat W(int k) const;
  Mat<K> F(int p) const;
  std::vector<int> graded_weights() const;  // k with gr^W_k != 0
  int lowest_weight() const;
  int highest_weight() const;
  void validate() const;  // throws invariant-violation
};

template <class K>
struct MhsMorphism {
  MixedHodgeStructure<K> source, target;
  ZMat matrix;
  int twist = 0;  // W_k -> W_{k-2t}, F^p -> F^{p-t}
  void validate() const;
};

template <class K>
struct ExtensionOfMHS {
  MixedHodgeStructure<K> sub, total, quotient;
  ZMat inclusion;   // total x sub
  ZMat projection;  // quotient x total
  ZMat retraction;  // sub x total, retraction * inclusion = id
  Mat<K> section;   // total x quotient, projection * section = id, filtered
  bool separated() const;
  void validate() const;
};

template <class K>
struct CarlsonClass {
  int sub_rank = 0, quotient_rank = 0;
  Mat<K> representative;         // sub x quotient
  std::vector<Mat<K>> f0_basis;  // basis of F^0 Hom(B, A)
  // Integral lattice is Hom_Z(B, A) = integer matrices.
  bool equals(const CarlsonClass& other) const;
  bool is_zero() const;
  // integer matrix chi and F^0 part realising rep - other = phi + chi, if any
  std::optional<ZMat> lattice_difference(const Mat<K>& delta) const;
};

// Builders
template <class K> MixedHodgeStructure<K> tate(int n);
// rank-2 weight (1 - 2*twist) block with F^{1-twist} spanned by (1, tau).
template <class K> MixedHodgeStructure<K> weight_one_block(const GQ& tau, int twist);
template <class K>
MixedHodgeStructure<K> direct_sum(const MixedHodgeStructure<K>& a, const MixedHodgeStructure<K>& b);
// Re-express in lattice coordinates v' = U v.
template <class K>
MixedHodgeStructure<K> change_basis(const MixedHodgeStructure<K>& m, const ZMat& U);
template <class K>
bool same_mhs(const MixedHodgeStructure<K>& a, const MixedHodgeStructure<K>& b);
// F^0 Hom(B, A) as a list of matrices (dimension over the field).
template <class K>
std::vector<Mat<K>> f0_hom(const MixedHodgeStructure<K>& B, const MixedHodgeStructure<K>& A);

// Exactness of 0 -> A -i-> H -p-> B -> 0 on lattices; empty string if exact.
std::string exactness_defect(const ZMat& i, const ZMat& p, int a, int h, int b);

// Build an extension from maps, deriving an integral retraction and the
// greedy filtered section.
template <class K>
ExtensionOfMHS<K> make_extension(const MixedHodgeStructure<K>& sub,
                                 const MixedHodgeStructure<K>& total,
                                 const MixedHodgeStructure<K>& quotient, const ZMat& inclusion,
                                 const ZMat& projection);
template <class K> Mat<K> greedy_filtered_section(const ExtensionOfMHS<K>& e);
template <class K> ExtensionOfMHS<K> with_choices(ExtensionOfMHS<K> e, const ZMat& r, const Mat<K>& s);

template <class K> CarlsonClass<K> carlson_class(const ExtensionOfMHS<K>& e);
template <class K> ExtensionOfMHS<K> negate(const ExtensionOfMHS<K>& e);
template <class K>
ExtensionOfMHS<K> baer_sum(const ExtensionOfMHS<K>& e1, const ExtensionOfMHS<K>& e2, int sign);
// m : B' -> B
template <class K>
ExtensionOfMHS<K> pullback(const ExtensionOfMHS<K>& e, const MixedHodgeStructure<K>& Bp,
                           const ZMat& m);
// m : A -> A'
template <class K>
ExtensionOfMHS<K> pushforward(const ExtensionOfMHS<K>& e, const MixedHodgeStructure<K>& Ap,
                              const ZMat& m);
template <class K> ExtensionOfMHS<K> multiple(const ExtensionOfMHS<K>& e, long k);

// Cross-shaped diagram: vertical A1 -> B1 -> C1, horizontal B1 -> B2 -> B3.
template <class K>
struct CrossDiagram {
  ExtensionOfMHS<K> vertical;    // sub A1, total B1, quotient C1
  ExtensionOfMHS<K> horizontal;  // sub B1, total B2, quotient B3
  void validate() const;
};

template <class K>
struct GeneralizedBaerResult {
  ExtensionOfMHS<K> B1;          // Baer difference of the vertical sequences
  MixedHodgeStructure<K> B2;     // H2 / D2
  ZMat b1_to_b2;                 // f
  ZMat b2_to_f;                  // eta
  ExtensionOfMHS<K> F;           // 0 -> C1 -> F -> B3 -> 0
  std::string horizontal_defect, vertical_defect;  // empty when exact
};

// m * d1 (generalised difference) n * d2.
template <class K>
GeneralizedBaerResult<K> generalized_baer_difference(const CrossDiagram<K>& d1,
                                                     const CrossDiagram<K>& d2, long m = 1,
                                                     long n = 1);

// Random separated extensions with known class (exact mode).
struct RandomExtension {
  ExtensionOfMHS<GQ> ext;
  Mat<GQ> phi;  // the class, as a representative in sub x quotient coordinates
};
MixedHodgeStructure<GQ> random_block_sum(std::mt19937_64& rng, int max_rank, int lo_twist,
                                         int hi_twist);
// Split lattice A + B with F^p = F^p A + graph(phi on F^p B); the class is phi.
ExtensionOfMHS<GQ> graph_extension(const MixedHodgeStructure<GQ>& A,
                                   const MixedHodgeStructure<GQ>& B, const Mat<GQ>& phi);
ZMat random_unimodular(std::mt19937_64& rng, int n, int steps = 6);
GQ random_gq(std::mt19937_64& rng, int num, int den);
RandomExtension random_extension(std::mt19937_64& rng, const MixedHodgeStructure<GQ>& A,
                                 const MixedHodgeStructure<GQ>& B, bool scramble = true);
// Extension of Z(0) by Z(1) with F^0 spanned by e2 + c e1 (c = z / 2 pi i).
template <class K> ExtensionOfMHS<K> kummer_extension(const K& c);

// JSON
nlohmann::json to_json(const MixedHodgeStructure<GQ>& m);
nlohmann::json to_json(const ExtensionOfMHS<GQ>& e);
MixedHodgeStructure<GQ> mhs_from_json(const nlohmann::json& j);
ExtensionOfMHS<GQ> extension_from_json(const nlohmann::json& j);

}  // namespace regulab

namespace regulab {

// Randomised exact checks: Baer additivity of classes, exactness of the
// generalised Baer difference sequences and the class identity for F.
struct MhsSelftest {
  int extension_cases = 0, additivity_failures = 0;
  int diagram_cases = 0, exactness_failures = 0, identity_failures = 0;
  int max_rank = 0;
  std::vector<std::string> notes;  // first few failure descriptions
  bool passed() const {
    return additivity_failures == 0 && exactness_failures == 0 && identity_failures == 0;
  }
};
MhsSelftest mhs_selftest(std::uint64_t seed, int extension_cases = 200, int diagram_cases = 60);

}  // namespace regulab
