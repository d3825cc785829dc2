#include "regulab/mhs.hpp"

#include <Eigen/Dense>
#include <set>

namespace regulab {

using nlohmann::json;

// ---------------------------------------------------------------- basics

template <class K>
QMat MixedHodgeStructure<K>::W(int k) const {
  auto it = weight.upper_bound(k);
  if (it == weight.begin()) return QMat(rank, 0);
  --it;
  return it->second;
}

template <class K>
Mat<K> MixedHodgeStructure<K>::F(int p) const {
  auto it = hodge.lower_bound(p);
  if (it == hodge.end()) return Mat<K>(rank, 0);
  return it->second;
}

template <class K>
std::vector<int> MixedHodgeStructure<K>::graded_weights() const {
  std::vector<int> out;
  for (auto& [k, basis] : weight)
    if (basis.c > W(k - 1).c) out.push_back(k);
  return out;
}

template <class K>
int MixedHodgeStructure<K>::lowest_weight() const {
  auto g = graded_weights();
  if (g.empty()) throw unsupported_input("zero MHS has no weights");
  return g.front();
}

template <class K>
int MixedHodgeStructure<K>::highest_weight() const {
  auto g = graded_weights();
  if (g.empty()) throw unsupported_input("zero MHS has no weights");
  return g.back();
}

namespace {

template <class K>
bool span_contains(const Mat<K>& big, const Mat<K>& small) {
  if (small.c == 0) return true;
  if (big.c == 0) return rank(small) == 0;
  return rank(hcat(big, small)) == rank(big);
}

template <class K>
bool same_span(const Mat<K>& a, const Mat<K>& b) {
  return rank(a) == rank(b) && span_contains(a, b);
}

// gr^W_k coordinates of a subspace X of W_k (X given inside W_k).
template <class K>
Mat<K> graded_image(const Mat<K>& lower, const Mat<K>& upper, const Mat<K>& X) {
  Mat<K> basis = lower;
  std::vector<int> extra;
  for (int j = 0; j < upper.c; ++j) {
    Mat<K> v = upper.col(j);
    if (!span_contains(basis, v)) {
      basis = hcat(basis, v);
      extra.push_back(j);
    }
  }
  int s = lower.c, d = static_cast<int>(extra.size());
  if (X.c == 0 || d == 0) return Mat<K>(d, 0);
  auto y = solve(basis, X);
  if (!y) throw invariant_violation("subspace not contained in W_k");
  Mat<K> out(d, X.c);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < X.c; ++j) out(i, j) = (*y)(s + i, j);
  return colbasis(out);
}

}  // namespace

template <class K>
void MixedHodgeStructure<K>::validate() const {
  if (rank == 0) return;
  const QMat* prevW = nullptr;
  for (auto& [k, basis] : weight) {
    if (basis.r != rank) throw invariant_violation("weight basis has wrong ambient rank");
    if (::regulab::rank(basis) != basis.c)
      throw invariant_violation("W_" + std::to_string(k) + " basis is dependent");
    if (prevW && !span_contains(basis, *prevW))
      throw invariant_violation("weight filtration not increasing at " + std::to_string(k));
    prevW = &basis;
  }
  if (weight.empty() || weight.rbegin()->second.c != rank)
    throw invariant_violation("weight filtration not exhaustive");
  const Mat<K>* prevF = nullptr;
  for (auto it = hodge.rbegin(); it != hodge.rend(); ++it) {
    auto& basis = it->second;
    if (basis.r != rank) throw invariant_violation("Hodge basis has wrong ambient rank");
    if (::regulab::rank(basis) != basis.c)
      throw invariant_violation("F^" + std::to_string(it->first) + " basis is dependent");
    if (prevF && !span_contains(basis, *prevF))
      throw invariant_violation("Hodge filtration not decreasing at " + std::to_string(it->first));
    prevF = &basis;
  }
  if (hodge.empty() || hodge.begin()->second.c != rank)
    throw invariant_violation("Hodge filtration not exhaustive");
  int pmin = hodge.begin()->first, pmax = hodge.rbegin()->first;
  for (int k : graded_weights()) {
    Mat<K> lower = convert<K>(W(k - 1)), upper = convert<K>(W(k));
    int d = upper.c - lower.c;
    int lo = std::min(pmin, k - pmax) - 1, hi = std::max(pmax, k - pmin) + 2;
    for (int p = lo; p <= hi; ++p) {
      Mat<K> a = graded_image(lower, upper, intersect(F(p), upper));
      Mat<K> b = graded_image(lower, upper, intersect(conj(F(k - p + 1)), upper));
      if (a.c + b.c != d || ::regulab::rank(hcat(a, b)) != d)
        throw invariant_violation("gr^W_" + std::to_string(k) + " is not pure (p = " +
                                  std::to_string(p) + ")");
    }
  }
}

template <class K>
void MhsMorphism<K>::validate() const {
  if (matrix.r != target.rank || matrix.c != source.rank)
    throw shape_error("morphism matrix does not match source/target ranks");
  QMat mq = to_q(matrix);
  Mat<K> mk = convert<K>(matrix);
  std::set<int> ks;
  for (auto& [k, _] : source.weight) ks.insert(k);
  for (int k : ks)
    if (!span_contains(target.W(k - 2 * twist), mq * source.W(k)))
      throw invariant_violation("morphism does not preserve W_" + std::to_string(k));
  std::set<int> ps;
  for (auto& [p, _] : source.hodge) ps.insert(p);
  for (int p : ps)
    if (!span_contains(target.F(p - twist), mk * source.F(p)))
      throw invariant_violation("morphism does not preserve F^" + std::to_string(p));
}

// ---------------------------------------------------------------- builders

template <class K>
MixedHodgeStructure<K> tate(int n) {
  MixedHodgeStructure<K> m;
  m.rank = 1;
  m.weight[-2 * n] = QMat::identity(1);
  m.hodge[-n] = Mat<K>::identity(1);
  return m;
}

template <class K>
MixedHodgeStructure<K> weight_one_block(const GQ& tau, int twist) {
  MixedHodgeStructure<K> m;
  m.rank = 2;
  m.weight[1 - 2 * twist] = QMat::identity(2);
  m.hodge[-twist] = Mat<K>::identity(2);
  Mat<K> line(2, 1);
  line(0, 0) = K(1);
  line(1, 0) = K(tau);
  m.hodge[1 - twist] = line;
  return m;
}

template <class K>
MixedHodgeStructure<K> direct_sum(const MixedHodgeStructure<K>& a, const MixedHodgeStructure<K>& b) {
  MixedHodgeStructure<K> m;
  m.rank = a.rank + b.rank;
  std::set<int> ks, ps;
  for (auto& [k, _] : a.weight) ks.insert(k);
  for (auto& [k, _] : b.weight) ks.insert(k);
  for (auto& [p, _] : a.hodge) ps.insert(p);
  for (auto& [p, _] : b.hodge) ps.insert(p);
  for (int k : ks) m.weight[k] = block_diag(a.W(k), b.W(k));
  for (int p : ps) m.hodge[p] = block_diag(a.F(p), b.F(p));
  return m;
}

template <class K>
MixedHodgeStructure<K> change_basis(const MixedHodgeStructure<K>& m, const ZMat& U) {
  MixedHodgeStructure<K> o = m;
  QMat uq = to_q(U);
  Mat<K> uk = convert<K>(U);
  for (auto& [k, b] : o.weight) b = uq * b;
  for (auto& [p, b] : o.hodge) b = uk * b;
  return o;
}

template <class K>
bool same_mhs(const MixedHodgeStructure<K>& a, const MixedHodgeStructure<K>& b) {
  if (a.rank != b.rank) return false;
  std::set<int> ks, ps;
  for (auto& [k, _] : a.weight) ks.insert(k);
  for (auto& [k, _] : b.weight) ks.insert(k);
  for (auto& [p, _] : a.hodge) ps.insert(p);
  for (auto& [p, _] : b.hodge) ps.insert(p);
  for (int k : ks)
    if (!same_span(a.W(k), b.W(k))) return false;
  for (int p : ps)
    if (!same_span(a.F(p), b.F(p))) return false;
  return true;
}

template <class K>
std::vector<Mat<K>> f0_hom(const MixedHodgeStructure<K>& B, const MixedHodgeStructure<K>& A) {
  int a = A.rank, b = B.rank;
  std::vector<Mat<K>> out;
  if (a == 0 || b == 0) return out;
  Mat<K> sys(0, a * b);
  if (!B.hodge.empty()) {
    int lo = B.hodge.begin()->first, hi = B.hodge.rbegin()->first;
    for (int p = lo; p <= hi; ++p) {
      Mat<K> fb = B.F(p);
      if (fb.c == 0) continue;
      Mat<K> ann = annihilator(A.F(p), a);
      if (ann.r == 0) continue;
      Mat<K> rows(ann.r * fb.c, a * b);
      for (int v = 0; v < fb.c; ++v)
        for (int r = 0; r < ann.r; ++r)
          for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j) rows(v * ann.r + r, i * b + j) = ann(r, i) * fb(j, v);
      sys = vcat(sys, rows);
    }
  }
  Mat<K> ker = sys.r == 0 ? Mat<K>::identity(a * b) : kernel(sys);
  for (int l = 0; l < ker.c; ++l) {
    Mat<K> m(a, b);
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) m(i, j) = ker(i * b + j, l);
    out.push_back(m);
  }
  return out;
}

std::string exactness_defect(const ZMat& i, const ZMat& p, int a, int h, int b) {
  if (i.r != h || i.c != a) return "inclusion has shape " + std::to_string(i.r) + "x" + std::to_string(i.c);
  if (p.r != b || p.c != h) return "projection has shape " + std::to_string(p.r) + "x" + std::to_string(p.c);
  if (h != a + b) return "ranks are not additive";
  ZMat pi = p * i;
  for (auto& v : pi.a)
    if (v != 0) return "projection o inclusion is not zero";
  if (a > 0 && rank(to_q(i)) != a) return "inclusion is not injective";
  if (b > 0) {
    Smith s = smith(p);
    if (s.rank != b) return "projection is not surjective";
    for (int k = 0; k < b; ++k)
      if (s.D(k, k) != 1) return "projection is not surjective on lattices";
  }
  ZMat ker = integer_kernel(p);
  if (ker.c != a) return "kernel of projection has wrong rank";
  if (a > 0) {
    auto x = integer_solve(i, ker);
    if (!x) return "kernel of projection is not in the image of the inclusion";
    if (!is_unimodular(*x)) return "image of inclusion has finite index in kernel";
  }
  return "";
}

// ---------------------------------------------------------------- sublattices

namespace {

struct SubLattice {
  ZMat basis, left;  // left * basis = I
};

SubLattice make_sub(const ZMat& basis) {
  Smith s = smith(basis);
  if (s.rank != basis.c) throw invariant_violation("sublattice basis is dependent");
  for (int k = 0; k < s.rank; ++k)
    if (s.D(k, k) != 1) throw invariant_violation("sublattice is not saturated");
  std::vector<int> top;
  for (int k = 0; k < basis.c; ++k) top.push_back(k);
  return {basis, s.V * s.U.rows(top)};
}

struct QuotientMap {
  ZMat q, lift;  // q * lift = I, q kills the sublattice
};

QuotientMap make_quotient(const ZMat& S, int n) {
  if (S.c == 0) return {ZMat::identity(n), ZMat::identity(n)};
  Smith s = smith(S);
  for (int k = 0; k < s.rank; ++k)
    if (s.D(k, k) != 1) throw invariant_violation("quotient lattice has torsion");
  std::vector<int> rest;
  for (int k = s.rank; k < n; ++k) rest.push_back(k);
  ZMat Uinv = unimodular_inverse(s.U);
  return {s.U.rows(rest), Uinv.cols(rest)};
}

template <class K>
MixedHodgeStructure<K> mhs_sub(const MixedHodgeStructure<K>& amb, const SubLattice& s) {
  MixedHodgeStructure<K> m;
  m.rank = s.basis.c;
  QMat bq = to_q(s.basis), lq = to_q(s.left);
  Mat<K> bk = convert<K>(s.basis), lk = convert<K>(s.left);
  for (auto& [k, w] : amb.weight) m.weight[k] = colbasis(Mat<Q>(lq * intersect(w, bq)));
  for (auto& [p, f] : amb.hodge) m.hodge[p] = colbasis(Mat<K>(lk * intersect(f, bk)));
  return m;
}

template <class K>
MixedHodgeStructure<K> mhs_quot(const MixedHodgeStructure<K>& amb, const QuotientMap& q) {
  MixedHodgeStructure<K> m;
  m.rank = q.q.r;
  QMat qq = to_q(q.q);
  Mat<K> qk = convert<K>(q.q);
  for (auto& [k, w] : amb.weight) m.weight[k] = colbasis(Mat<Q>(qq * w));
  for (auto& [p, f] : amb.hodge) m.hodge[p] = colbasis(Mat<K>(qk * f));
  return m;
}

ZMat zeros(int r, int c) { return ZMat(r, c); }

ZMat scalar(int n, long k) {
  ZMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = k;
  return m;
}

template <class K>
struct BaerData {
  ExtensionOfMHS<K> ext;
  SubLattice sub;
  QuotientMap quot;
};

// H = ker(p1 - p2) / {(i1 a, i2 a)}
template <class K>
BaerData<K> baer_difference_data(const ExtensionOfMHS<K>& e1, const ExtensionOfMHS<K>& e2) {
  if (!same_mhs(e1.sub, e2.sub) || !same_mhs(e1.quotient, e2.quotient))
    throw shape_error("Baer sum needs identical sub and quotient objects");
  e1.validate();
  e2.validate();
  int a = e1.sub.rank, b = e1.quotient.rank, h2 = e2.total.rank;
  ZMat psi = hcat(e1.projection, -e2.projection);
  BaerData<K> d;
  d.sub = make_sub(integer_kernel(psi));
  ZMat D = vcat(e1.inclusion, e2.inclusion);
  d.quot = make_quotient(d.sub.left * D, d.sub.basis.c);
  ZMat to = d.quot.q * d.sub.left;
  ZMat from = d.sub.basis * d.quot.lift;
  auto& x = d.ext;
  x.sub = e1.sub;
  x.quotient = e1.quotient;
  x.total = mhs_quot(mhs_sub(direct_sum(e1.total, e2.total), d.sub), d.quot);
  x.inclusion = to * vcat(e1.inclusion, zeros(h2, a));
  x.projection = hcat(e1.projection, zeros(b, h2)) * from;
  x.retraction = hcat(e1.retraction, -e2.retraction) * from;
  x.section = convert<K>(to) * vcat(e1.section, e2.section);
  return d;
}

}  // namespace

// ---------------------------------------------------------------- extensions

template <class K>
bool ExtensionOfMHS<K>::separated() const {
  if (sub.rank == 0 || quotient.rank == 0) return true;
  return sub.highest_weight() < quotient.lowest_weight();
}

template <class K>
void ExtensionOfMHS<K>::validate() const {
  std::string d = exactness_defect(inclusion, projection, sub.rank, total.rank, quotient.rank);
  if (!d.empty()) throw invariant_violation("extension not exact: " + d);
  ZMat ri = retraction * inclusion;
  if (!(ri == ZMat::identity(sub.rank))) throw invariant_violation("retraction o inclusion != id");
  Mat<K> ps = convert<K>(projection) * section;
  if (!(ps == Mat<K>::identity(quotient.rank)))
    throw invariant_violation("projection o section != id");
  for (auto& [p, f] : quotient.hodge)
    if (!span_contains(total.F(p), section * f))
      throw invariant_violation("section does not preserve F^" + std::to_string(p));
}

template <class K>
Mat<K> greedy_filtered_section(const ExtensionOfMHS<K>& e) {
  int b = e.quotient.rank, h = e.total.rank;
  if (b == 0) return Mat<K>(h, 0);
  Mat<K> chosen(b, 0), images(h, 0);
  Mat<K> pk = convert<K>(e.projection);
  for (auto it = e.quotient.hodge.rbegin(); it != e.quotient.hodge.rend(); ++it) {
    int p = it->first;
    const Mat<K>& fb = it->second;
    Mat<K> fh = e.total.F(p);
    for (int j = 0; j < fb.c; ++j) {
      Mat<K> v = fb.col(j);
      if (span_contains(chosen, v)) continue;
      auto y = solve(Mat<K>(pk * fh), v);
      if (!y) throw invariant_violation("projection is not strict on F^" + std::to_string(p));
      chosen = hcat(chosen, v);
      images = hcat(images, Mat<K>(fh * *y));
    }
  }
  if (chosen.c != b) throw invariant_violation("Hodge filtration of quotient not exhaustive");
  return images * inverse(chosen);
}

template <class K>
ExtensionOfMHS<K> make_extension(const MixedHodgeStructure<K>& sub,
                                 const MixedHodgeStructure<K>& total,
                                 const MixedHodgeStructure<K>& quotient, const ZMat& inclusion,
                                 const ZMat& projection) {
  std::string d = exactness_defect(inclusion, projection, sub.rank, total.rank, quotient.rank);
  if (!d.empty()) throw invariant_violation("extension not exact: " + d);
  MhsMorphism<K>{sub, total, inclusion, 0}.validate();
  MhsMorphism<K>{total, quotient, projection, 0}.validate();
  ExtensionOfMHS<K> e;
  e.sub = sub;
  e.total = total;
  e.quotient = quotient;
  e.inclusion = inclusion;
  e.projection = projection;
  if (sub.rank > 0) {
    auto rt = integer_solve(inclusion.transpose(), ZMat::identity(sub.rank));
    if (!rt) throw invariant_violation("inclusion has no integral retraction");
    e.retraction = rt->transpose();
  } else {
    e.retraction = ZMat(0, total.rank);
  }
  e.section = greedy_filtered_section(e);
  e.validate();
  return e;
}

template <class K>
ExtensionOfMHS<K> with_choices(ExtensionOfMHS<K> e, const ZMat& r, const Mat<K>& s) {
  e.retraction = r;
  e.section = s;
  e.validate();
  return e;
}

template <class K>
CarlsonClass<K> carlson_class(const ExtensionOfMHS<K>& e) {
  if (!e.separated())
    throw unsupported_input("extension is not separated (weights of sub and quotient overlap)");
  CarlsonClass<K> c;
  c.sub_rank = e.sub.rank;
  c.quotient_rank = e.quotient.rank;
  c.representative = convert<K>(e.retraction) * e.section;
  c.f0_basis = f0_hom(e.quotient, e.sub);
  return c;
}

template <class K>
std::optional<ZMat> CarlsonClass<K>::lattice_difference(const Mat<K>& delta) const {
  int a = sub_rank, b = quotient_rank, n = a * b;
  if (delta.r != a || delta.c != b) throw shape_error("class representatives differ in shape");
  if (n == 0) return ZMat(a, b);
  Mat<K> fm(n, static_cast<int>(f0_basis.size()));
  for (size_t l = 0; l < f0_basis.size(); ++l)
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) fm(i * b + j, static_cast<int>(l)) = f0_basis[l](i, j);
  Mat<K> P = annihilator(fm, n);
  Mat<K> dv(n, 1);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) dv(i * b + j, 0) = delta(i, j);
  Mat<K> pd = P * dv;
  if constexpr (std::is_same_v<K, GQ>) {
    QMat M(2 * P.r, n), v(2 * P.r, 1);
    for (int r = 0; r < P.r; ++r) {
      for (int j = 0; j < n; ++j) {
        M(r, j) = P(r, j).re;
        M(P.r + r, j) = P(r, j).im;
      }
      v(r, 0) = pd(r, 0).re;
      v(P.r + r, 0) = pd(r, 0).im;
    }
    auto chi = integer_solve(M, v);
    if (!chi) return std::nullopt;
    ZMat out(a, b);
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) out(i, j) = (*chi)(i * b + j, 0);
    return out;
  } else {
    using RM = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    RM M(2 * P.r, n), v(2 * P.r, 1);
    for (int r = 0; r < P.r; ++r) {
      for (int j = 0; j < n; ++j) {
        M(r, j) = P(r, j).v.real();
        M(P.r + r, j) = P(r, j).v.imag();
      }
      v(r, 0) = pd(r, 0).v.real();
      v(P.r + r, 0) = pd(r, 0).v.imag();
    }
    RM x = M.colPivHouseholderQr().solve(v);
    RM xr = x.array().round().matrix();
    long double res = (M * xr - v).norm();
    long double scale = 1 + v.norm();
    if (res > ApproxC::tol * scale * 100) return std::nullopt;
    ZMat out(a, b);
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) out(i, j) = static_cast<long>(xr(i * b + j, 0));
    return out;
  }
}

template <class K>
bool CarlsonClass<K>::equals(const CarlsonClass& o) const {
  if (sub_rank != o.sub_rank || quotient_rank != o.quotient_rank) return false;
  return lattice_difference(representative - o.representative).has_value();
}

template <class K>
bool CarlsonClass<K>::is_zero() const {
  return lattice_difference(representative).has_value();
}

template <class K>
ExtensionOfMHS<K> negate(const ExtensionOfMHS<K>& e) {
  ExtensionOfMHS<K> n = e;
  n.inclusion = -e.inclusion;
  n.retraction = -e.retraction;
  return n;
}

template <class K>
ExtensionOfMHS<K> baer_sum(const ExtensionOfMHS<K>& e1, const ExtensionOfMHS<K>& e2, int sign) {
  if (sign != 1 && sign != -1) throw domain_error("Baer sum sign must be +1 or -1");
  return baer_difference_data(e1, sign > 0 ? negate(e2) : e2).ext;
}

template <class K>
ExtensionOfMHS<K> pullback(const ExtensionOfMHS<K>& e, const MixedHodgeStructure<K>& Bp,
                           const ZMat& m) {
  if (m.r != e.quotient.rank || m.c != Bp.rank) throw shape_error("pullback map shape");
  MhsMorphism<K>{Bp, e.quotient, m, 0}.validate();
  int a = e.sub.rank, h = e.total.rank, bp = Bp.rank;
  SubLattice s = make_sub(integer_kernel(hcat(e.projection, -m)));
  ExtensionOfMHS<K> x;
  x.sub = e.sub;
  x.quotient = Bp;
  x.total = mhs_sub(direct_sum(e.total, Bp), s);
  x.inclusion = s.left * vcat(e.inclusion, zeros(bp, a));
  x.projection = hcat(zeros(bp, h), ZMat::identity(bp)) * s.basis;
  x.retraction = hcat(e.retraction, zeros(a, bp)) * s.basis;
  x.section = convert<K>(s.left) * vcat(Mat<K>(e.section * convert<K>(m)), Mat<K>::identity(bp));
  x.validate();
  return x;
}

template <class K>
ExtensionOfMHS<K> pushforward(const ExtensionOfMHS<K>& e, const MixedHodgeStructure<K>& Ap,
                              const ZMat& m) {
  if (m.r != Ap.rank || m.c != e.sub.rank) throw shape_error("pushforward map shape");
  MhsMorphism<K>{e.sub, Ap, m, 0}.validate();
  int ap = Ap.rank, h = e.total.rank, b = e.quotient.rank;
  QuotientMap q = make_quotient(vcat(m, ZMat(-e.inclusion)), ap + h);
  ExtensionOfMHS<K> x;
  x.sub = Ap;
  x.quotient = e.quotient;
  x.total = mhs_quot(direct_sum(Ap, e.total), q);
  x.inclusion = q.q * vcat(ZMat::identity(ap), zeros(h, ap));
  x.projection = hcat(zeros(b, ap), e.projection) * q.lift;
  x.retraction = hcat(ZMat::identity(ap), ZMat(m * e.retraction)) * q.lift;
  x.section = convert<K>(q.q) * vcat(Mat<K>(ap, b), e.section);
  x.validate();
  return x;
}

template <class K>
ExtensionOfMHS<K> multiple(const ExtensionOfMHS<K>& e, long k) {
  return pushforward(e, e.sub, scalar(e.sub.rank, k));
}

template <class K>
void CrossDiagram<K>::validate() const {
  std::string d = exactness_defect(vertical.inclusion, vertical.projection, vertical.sub.rank,
                                   vertical.total.rank, vertical.quotient.rank);
  if (!d.empty()) throw invariant_violation("vertical sequence A1 -> B1 -> C1: " + d);
  d = exactness_defect(horizontal.inclusion, horizontal.projection, horizontal.sub.rank,
                       horizontal.total.rank, horizontal.quotient.rank);
  if (!d.empty()) throw invariant_violation("horizontal sequence B1 -> B2 -> B3: " + d);
  if (!same_mhs(horizontal.sub, vertical.total))
    throw invariant_violation("arrow B1 -> B2: sub of horizontal sequence is not B1");
}

template <class K>
GeneralizedBaerResult<K> generalized_baer_difference(const CrossDiagram<K>& d1,
                                                     const CrossDiagram<K>& d2, long m, long n) {
  d1.validate();
  d2.validate();
  if (!same_mhs(d1.vertical.sub, d2.vertical.sub)) throw shape_error("diagrams differ in A1");
  if (!same_mhs(d1.vertical.quotient, d2.vertical.quotient))
    throw shape_error("diagrams differ in C1");
  if (!same_mhs(d1.horizontal.quotient, d2.horizontal.quotient))
    throw shape_error("diagrams differ in B3");
  ExtensionOfMHS<K> E1 = multiple(d1.horizontal, m), E2 = multiple(d2.horizontal, n);
  const auto& v1 = d1.vertical;
  const auto& v2 = d2.vertical;
  int c = v1.quotient.rank, b3 = E1.quotient.rank;
  int h21 = E1.total.rank, h22 = E2.total.rank;

  GeneralizedBaerResult<K> out;
  BaerData<K> bd = baer_difference_data(v1, v2);
  out.B1 = bd.ext;
  ZMat from1 = bd.sub.basis * bd.quot.lift;

  SubLattice s2 = make_sub(integer_kernel(hcat(E1.projection, -E2.projection)));
  ZMat D2 = vcat(ZMat(E1.inclusion * v1.inclusion), ZMat(E2.inclusion * v2.inclusion));
  QuotientMap q2 = make_quotient(s2.left * D2, s2.basis.c);
  out.B2 = mhs_quot(mhs_sub(direct_sum(E1.total, E2.total), s2), q2);
  ZMat to2 = q2.q * s2.left;
  ZMat from2 = s2.basis * q2.lift;

  out.b1_to_b2 = to2 * block_diag(E1.inclusion, E2.inclusion) * from1;
  QuotientMap qf = make_quotient(out.b1_to_b2, out.B2.rank);
  MixedHodgeStructure<K> Fm = mhs_quot(out.B2, qf);
  out.b2_to_f = qf.q;
  out.horizontal_defect =
      exactness_defect(out.b1_to_b2, out.b2_to_f, out.B1.total.rank, out.B2.rank, Fm.rank);

  auto lift1 = integer_solve(v1.projection, ZMat::identity(c));
  if (!lift1) throw invariant_violation("arrow B1^1 -> C1 is not surjective");
  ZMat phi_amb = vcat(ZMat(E1.inclusion * *lift1), zeros(h22, c));
  ZMat phi = qf.q * to2 * phi_amb;
  ZMat pbar = hcat(E1.projection, zeros(b3, h22)) * from2 * qf.lift;
  out.vertical_defect = exactness_defect(phi, pbar, c, Fm.rank, b3);
  if (out.vertical_defect.empty()) {
    out.F = make_extension(v1.quotient, Fm, E1.quotient, phi, pbar);
  } else {
    out.F.sub = v1.quotient;
    out.F.total = Fm;
    out.F.quotient = E1.quotient;
    out.F.inclusion = phi;
    out.F.projection = pbar;
  }
  (void)h21;
  return out;
}

template <class K>
ExtensionOfMHS<K> kummer_extension(const K& c) {
  auto A = tate<K>(1), B = tate<K>(0);
  MixedHodgeStructure<K> H;
  H.rank = 2;
  QMat w1(2, 1);
  w1(0, 0) = 1;
  H.weight[-2] = w1;
  H.weight[0] = QMat::identity(2);
  H.hodge[-1] = Mat<K>::identity(2);
  Mat<K> f0(2, 1);
  f0(0, 0) = c;
  f0(1, 0) = K(1);
  H.hodge[0] = f0;
  ZMat inc(2, 1), proj(1, 2);
  inc(0, 0) = 1;
  proj(0, 1) = 1;
  return make_extension(A, H, B, inc, proj);
}

// ---------------------------------------------------------------- random

GQ random_gq(std::mt19937_64& rng, int num, int den) {
  std::uniform_int_distribution<int> nd(-num, num), dd(1, den);
  return GQ(Q(nd(rng), dd(rng)), Q(nd(rng), dd(rng)));
}

ZMat random_unimodular(std::mt19937_64& rng, int n, int steps) {
  ZMat U = ZMat::identity(n);
  if (n < 2) return U;
  std::uniform_int_distribution<int> pick(0, n - 1), coef(-2, 2);
  for (int s = 0; s < steps; ++s) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    int c0 = coef(rng);
    for (int k = 0; k < n; ++k) U(i, k) += c0 * U(j, k);
  }
  int i = pick(rng), j = pick(rng);
  for (int k = 0; k < n; ++k) std::swap(U(i, k), U(j, k));
  return U;
}

MixedHodgeStructure<GQ> random_block_sum(std::mt19937_64& rng, int max_rank, int lo_twist,
                                         int hi_twist) {
  std::uniform_int_distribution<int> tw(lo_twist, hi_twist), coin(0, 1);
  MixedHodgeStructure<GQ> m;
  int left = max_rank;
  bool first = true;
  while (left > 0) {
    int t = tw(rng);
    MixedHodgeStructure<GQ> blk;
    if (left >= 2 && coin(rng)) {
      GQ tau = random_gq(rng, 3, 3);
      if (tau.im == 0) tau.im = 1;
      blk = weight_one_block<GQ>(tau, t);
    } else {
      blk = tate<GQ>(t);
    }
    left -= blk.rank;
    m = first ? blk : direct_sum(m, blk);
    first = false;
    if (coin(rng)) break;
  }
  return m;
}

ExtensionOfMHS<GQ> graph_extension(const MixedHodgeStructure<GQ>& A,
                                   const MixedHodgeStructure<GQ>& B, const Mat<GQ>& phi) {
  int a = A.rank, b = B.rank, h = a + b;
  if (phi.r != a || phi.c != b) throw shape_error("graph_extension: class shape");
  MixedHodgeStructure<GQ> H;
  H.rank = h;
  std::set<int> ks, ps;
  for (auto& [k, _] : A.weight) ks.insert(k);
  for (auto& [k, _] : B.weight) ks.insert(k);
  for (auto& [p, _] : A.hodge) ps.insert(p);
  for (auto& [p, _] : B.hodge) ps.insert(p);
  for (int k : ks) H.weight[k] = block_diag(A.W(k), B.W(k));
  for (int p : ps) {
    Mat<GQ> fa = A.F(p), fb = B.F(p);
    Mat<GQ> cols = hcat(vcat(fa, Mat<GQ>(b, fa.c)), vcat(Mat<GQ>(phi * fb), fb));
    H.hodge[p] = cols.c == 0 ? Mat<GQ>(h, 0) : cols;
  }
  ExtensionOfMHS<GQ> e;
  e.sub = A;
  e.total = H;
  e.quotient = B;
  e.inclusion = vcat(ZMat::identity(a), ZMat(b, a));
  e.projection = hcat(ZMat(b, a), ZMat::identity(b));
  e.retraction = hcat(ZMat::identity(a), ZMat(a, b));
  e.section = vcat(phi, Mat<GQ>::identity(b));
  e.validate();
  return e;
}

RandomExtension random_extension(std::mt19937_64& rng, const MixedHodgeStructure<GQ>& A,
                                 const MixedHodgeStructure<GQ>& B, bool scramble) {
  Mat<GQ> phi(A.rank, B.rank);
  for (auto& v : phi.a) v = random_gq(rng, 5, 4);
  ExtensionOfMHS<GQ> e = graph_extension(A, B, phi);
  if (scramble) {
    int h = e.total.rank;
    ZMat U = random_unimodular(rng, h), Ui = unimodular_inverse(U);
    e.total = change_basis(e.total, U);
    e.inclusion = U * e.inclusion;
    e.projection = e.projection * Ui;
    e.retraction = e.retraction * Ui;
    e.section = convert<GQ>(U) * e.section;
    e.validate();
  }
  return {e, phi};
}

// ---------------------------------------------------------------- json

namespace {

template <class T>
json mat_json(const Mat<T>& m) {
  json rows = json::array();
  for (int i = 0; i < m.r; ++i) {
    json row = json::array();
    for (int j = 0; j < m.c; ++j) {
      if constexpr (std::is_same_v<T, Z>) row.push_back(m(i, j).str());
      else row.push_back(to_string(m(i, j)));
    }
    rows.push_back(row);
  }
  return {{"rows", m.r}, {"cols", m.c}, {"entries", rows}};
}

template <class T>
Mat<T> mat_from(const json& j) {
  Mat<T> m(j.at("rows").get<int>(), j.at("cols").get<int>());
  for (int i = 0; i < m.r; ++i)
    for (int k = 0; k < m.c; ++k) {
      std::string s = j.at("entries").at(i).at(k).get<std::string>();
      if constexpr (std::is_same_v<T, Z>) m(i, k) = Z(s);
      else if constexpr (std::is_same_v<T, Q>) m(i, k) = parse_q(s);
      else m(i, k) = parse_gq(s);
    }
  return m;
}

}  // namespace

json to_json(const MixedHodgeStructure<GQ>& m) {
  json w = json::object(), f = json::object();
  for (auto& [k, b] : m.weight) w[std::to_string(k)] = mat_json(b);
  for (auto& [p, b] : m.hodge) f[std::to_string(p)] = mat_json(b);
  return {{"rank", m.rank}, {"weights", w}, {"hodge", f}};
}

json to_json(const ExtensionOfMHS<GQ>& e) {
  return {{"sub", to_json(e.sub)},
          {"total", to_json(e.total)},
          {"quotient", to_json(e.quotient)},
          {"inclusion", mat_json(e.inclusion)},
          {"projection", mat_json(e.projection)},
          {"retraction", mat_json(e.retraction)},
          {"section", mat_json(e.section)}};
}

MixedHodgeStructure<GQ> mhs_from_json(const json& j) {
  MixedHodgeStructure<GQ> m;
  m.rank = j.at("rank").get<int>();
  for (auto& [k, v] : j.at("weights").items()) m.weight[std::stoi(k)] = mat_from<Q>(v);
  for (auto& [p, v] : j.at("hodge").items()) m.hodge[std::stoi(p)] = mat_from<GQ>(v);
  return m;
}

ExtensionOfMHS<GQ> extension_from_json(const json& j) {
  ExtensionOfMHS<GQ> e;
  e.sub = mhs_from_json(j.at("sub"));
  e.total = mhs_from_json(j.at("total"));
  e.quotient = mhs_from_json(j.at("quotient"));
  e.inclusion = mat_from<Z>(j.at("inclusion"));
  e.projection = mat_from<Z>(j.at("projection"));
  e.retraction = mat_from<Z>(j.at("retraction"));
  e.section = mat_from<GQ>(j.at("section"));
  e.validate();
  return e;
}

// ---------------------------------------------------------------- instantiation

#define REGULAB_INSTANTIATE(K)                                                                   \
  template struct MixedHodgeStructure<K>;                                                        \
  template struct MhsMorphism<K>;                                                                \
  template struct ExtensionOfMHS<K>;                                                             \
  template struct CarlsonClass<K>;                                                               \
  template struct CrossDiagram<K>;                                                               \
  template MixedHodgeStructure<K> tate<K>(int);                                                  \
  template MixedHodgeStructure<K> weight_one_block<K>(const GQ&, int);                           \
  template MixedHodgeStructure<K> direct_sum<K>(const MixedHodgeStructure<K>&,                   \
                                                const MixedHodgeStructure<K>&);                  \
  template MixedHodgeStructure<K> change_basis<K>(const MixedHodgeStructure<K>&, const ZMat&);   \
  template bool same_mhs<K>(const MixedHodgeStructure<K>&, const MixedHodgeStructure<K>&);       \
  template std::vector<Mat<K>> f0_hom<K>(const MixedHodgeStructure<K>&,                          \
                                         const MixedHodgeStructure<K>&);                         \
  template ExtensionOfMHS<K> make_extension<K>(                                                  \
      const MixedHodgeStructure<K>&, const MixedHodgeStructure<K>&,                              \
      const MixedHodgeStructure<K>&, const ZMat&, const ZMat&);                                  \
  template Mat<K> greedy_filtered_section<K>(const ExtensionOfMHS<K>&);                          \
  template ExtensionOfMHS<K> with_choices<K>(ExtensionOfMHS<K>, const ZMat&, const Mat<K>&);     \
  template CarlsonClass<K> carlson_class<K>(const ExtensionOfMHS<K>&);                           \
  template ExtensionOfMHS<K> negate<K>(const ExtensionOfMHS<K>&);                                \
  template ExtensionOfMHS<K> baer_sum<K>(const ExtensionOfMHS<K>&, const ExtensionOfMHS<K>&,     \
                                         int);                                                   \
  template ExtensionOfMHS<K> pullback<K>(const ExtensionOfMHS<K>&,                               \
                                         const MixedHodgeStructure<K>&, const ZMat&);            \
  template ExtensionOfMHS<K> pushforward<K>(const ExtensionOfMHS<K>&,                            \
                                            const MixedHodgeStructure<K>&, const ZMat&);         \
  template ExtensionOfMHS<K> multiple<K>(const ExtensionOfMHS<K>&, long);                        \
  template GeneralizedBaerResult<K> generalized_baer_difference<K>(                              \
      const CrossDiagram<K>&, const CrossDiagram<K>&, long, long);                               \
  template ExtensionOfMHS<K> kummer_extension<K>(const K&);

REGULAB_INSTANTIATE(GQ)
REGULAB_INSTANTIATE(ApproxC)

}  // namespace regulab
