#include "regulab/loops.hpp"

#include <algorithm>
#include <cmath>

namespace regulab {

IntMatrix standard_symplectic(int g) {
  IntMatrix J(2 * g, std::vector<long>(2 * g, 0));
  for (int i = 0; i < g; ++i) {
    J[i][i + g] = 1;
    J[i + g][i] = -1;
  }
  return J;
}

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

IntMatrix congruence(const IntMatrix& B, const IntMatrix& W) {
  size_t m = B.size(), k = W.empty() ? 0 : W[0].size();
  IntMatrix out(k, std::vector<long>(k, 0));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) {
      long acc = 0;
      for (size_t a = 0; a < m; ++a) {
        if (W[a][i] == 0) continue;
        for (size_t b = 0; b < m; ++b) acc += W[a][i] * B[a][b] * W[b][j];
      }
      out[i][j] = acc;
    }
  return out;
}

void col_swap(IntMatrix& W, size_t i, size_t j) {
  for (auto& row : W) std::swap(row[i], row[j]);
}

void col_axpy(IntMatrix& W, size_t dst, long q, size_t src) {
  for (auto& row : W) row[dst] += q * row[src];
}

}  // namespace

SymplecticBasis symplectic_reduce(const IntMatrix& B) {
  size_t m = B.size();
  IntMatrix W(m, std::vector<long>(m, 0));
  for (size_t i = 0; i < m; ++i) W[i][i] = 1;
  SymplecticBasis out;
  size_t k = 0;
  std::vector<std::pair<size_t, size_t>> pairs;
  while (k + 1 < m) {
    IntMatrix Bp = congruence(B, W);
    long best = 0;
    size_t bi = 0, bj = 0;
    for (size_t i = k; i < m; ++i)
      for (size_t j = i + 1; j < m; ++j)
        if (Bp[i][j] != 0 && (best == 0 || std::labs(Bp[i][j]) < best)) {
          best = std::labs(Bp[i][j]);
          bi = i;
          bj = j;
        }
    if (best == 0) break;
    col_swap(W, k, bi);
    col_swap(W, k + 1, bj == k ? bi : bj);
    Bp = congruence(B, W);
    if (Bp[k][k + 1] < 0) {
      for (auto& row : W) row[k + 1] = -row[k + 1];
      Bp = congruence(B, W);
    }
    long d = Bp[k][k + 1];
    bool remainder = false;
    for (size_t l = k + 2; l < m; ++l) {
      long q = floor_div(Bp[k][l], d);
      col_axpy(W, l, -q, k + 1);
      long q2 = floor_div(Bp[k + 1][l], d);
      col_axpy(W, l, q2, k);
      if (Bp[k][l] - q * d != 0 || Bp[k + 1][l] - q2 * d != 0) remainder = true;
    }
    if (remainder) continue;
    out.elementary_divisors.push_back(d);
    pairs.emplace_back(k, k + 1);
    k += 2;
  }
  int g = static_cast<int>(pairs.size());
  out.genus = g;
  out.coeffs.assign(m, std::vector<long>(2 * g, 0));
  for (int i = 0; i < g; ++i)
    for (size_t r = 0; r < m; ++r) {
      out.coeffs[r][i] = W[r][pairs[i].first];
      out.coeffs[r][i + g] = W[r][pairs[i].second];
    }
  return out;
}

long intersection_number(const Curve& c, const SurfacePath& a, const SurfacePath& b, cplx shift) {
  auto pa = a.polyline(), pb = b.polyline();
  for (auto& p : pb) p.first += shift;
  auto sheet = [&](cplx x, cplx y) {
    auto f = c.fiber(x);
    size_t best = 0;
    for (size_t k = 1; k < f.size(); ++k)
      if (std::abs(f[k] - y) < std::abs(f[best] - y)) best = k;
    return best;
  };
  long total = 0;
  for (size_t i = 0; i + 1 < pa.size(); ++i) {
    cplx p0 = pa[i].first, p1 = pa[i + 1].first, d1 = p1 - p0;
    real minx = std::min(p0.real(), p1.real()), maxx = std::max(p0.real(), p1.real());
    real miny = std::min(p0.imag(), p1.imag()), maxy = std::max(p0.imag(), p1.imag());
    for (size_t j = 0; j + 1 < pb.size(); ++j) {
      cplx q0 = pb[j].first, q1 = pb[j + 1].first;
      if (std::max(q0.real(), q1.real()) < minx || std::min(q0.real(), q1.real()) > maxx ||
          std::max(q0.imag(), q1.imag()) < miny || std::min(q0.imag(), q1.imag()) > maxy)
        continue;
      cplx d2 = q1 - q0;
      real den = d1.real() * d2.imag() - d1.imag() * d2.real();
      if (den == 0) continue;
      cplx w = q0 - p0;
      real lam = (w.real() * d2.imag() - w.imag() * d2.real()) / den;
      real mu = (w.real() * d1.imag() - w.imag() * d1.real()) / den;
      // half-open segments so shared vertices count once
      if (lam < 0 || lam >= 1 || mu < 0 || mu >= 1) continue;
      cplx x = p0 + lam * d1;
      cplx ya = pa[i].second + lam * (pa[i + 1].second - pa[i].second);
      cplx yb = pb[j].second + mu * (pb[j + 1].second - pb[j].second);
      if (sheet(x, ya) != sheet(x, yb)) continue;
      total += den > 0 ? 1 : -1;
    }
  }
  return total;
}

BaseLoop on_sheet(const LoopSystem& ls, int s, const BaseLoop& inner) {
  if (s == 0) return inner;
  std::vector<Disc> others(ls.discs.begin() + 1, ls.discs.end());
  BaseLoop tau = power(lasso(ls.base_x, ls.discs[0], others), s);
  return tau + inner + reversed(tau);
}

namespace {

BaseLoop combine(const std::vector<BaseLoop>& cands, const IntMatrix& coeffs, int col) {
  BaseLoop out;
  for (size_t r = 0; r < cands.size(); ++r) out = out + power(cands[r], static_cast<int>(coeffs[r][col]));
  return out;
}

std::vector<Disc> without(const std::vector<Disc>& d, size_t i) {
  std::vector<Disc> out;
  for (size_t k = 0; k < d.size(); ++k)
    if (k != i) out.push_back(d[k]);
  return out;
}

}  // namespace

LoopSystem build_loop_system(const CurveModel& model, const LoopOptions& opt) {
  const Curve& c = model.curve;
  LoopSystem ls;
  ls.genus = c.genus();
  ls.N = model.N;
  ls.base_x = model.P.x;
  ls.base_y = model.P.y;
  if (model.P.infinite) throw unsupported_input("the base point must be affine");

  std::vector<cplx> centers = c.branch_points();
  for (const CurvePoint* pt : {&model.Q, &model.R}) {
    if (pt->infinite) throw unsupported_input("Q and R must be affine points");
    if (!c.is_branch(pt->x, 1e-7L)) centers.push_back(pt->x);
  }
  for (size_t i = 0; i < centers.size(); ++i) {
    real gap = std::abs(centers[i] - ls.base_x) / opt.radius_factor / 2;
    for (size_t j = 0; j < centers.size(); ++j)
      if (j != i) gap = std::min(gap, std::abs(centers[i] - centers[j]));
    if (gap < 1e-6L) throw domain_error("marked points too close to a branch point");
    ls.discs.push_back({centers[i], opt.radius_factor * gap});
  }
  ls.trace_opt.obstacles = centers;
  ls.trace_opt.tail_tol = opt.tail_tol;

  // lassos around the branch points
  size_t nb = c.branch_points().size();
  std::vector<BaseLoop> lassos;
  for (size_t a = 0; a < nb; ++a) lassos.push_back(lasso(ls.base_x, ls.discs[a], without(ls.discs, a)));
  for (int s = 0; s + 1 < c.n(); ++s)
    for (size_t a = 0; a < nb; ++a)
      for (size_t b = a + 1; b < nb; ++b) {
        ls.candidates.push_back(on_sheet(ls, s, lassos[a] + reversed(lassos[b])));
        ls.candidate_names.push_back("s" + std::to_string(s) + ":l" + std::to_string(a) + "/l" +
                                     std::to_string(b));
      }
  for (auto& cand : ls.candidates) {
    auto p = trace(c, cand, ls.base_y, ls.trace_opt);
    if (!p.closed(1e-8L)) throw invariant_violation("candidate loop does not close");
    ls.candidate_paths.push_back(std::move(p));
  }
  size_t m = ls.candidates.size();
  real rmin = 1e300L;
  for (auto& d : ls.discs) rmin = std::min(rmin, d.radius);
  cplx shift = std::polar(opt.shift * rmin, 0.7L);
  ls.candidate_intersections.assign(m, std::vector<long>(m, 0));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      long v = intersection_number(c, ls.candidate_paths[i], ls.candidate_paths[j], shift);
      ls.candidate_intersections[i][j] = v;
      ls.candidate_intersections[j][i] = -v;
    }
  auto sb = symplectic_reduce(ls.candidate_intersections);
  if (sb.genus != ls.genus ||
      std::any_of(sb.elementary_divisors.begin(), sb.elementary_divisors.end(),
                  [](long d) { return d != 1; })) {
    std::string msg = "symplectic basis not found: rank/2 = " + std::to_string(sb.genus) +
                      ", genus = " + std::to_string(ls.genus) + ", candidate intersections:";
    for (auto& row : ls.candidate_intersections) {
      msg += " [";
      for (long v : row) msg += " " + std::to_string(v);
      msg += " ]";
    }
    throw Error("basis-construction-error", msg);
  }
  ls.basis = sb.coeffs;
  ls.intersection = congruence(ls.candidate_intersections, ls.basis);
  if (ls.intersection != standard_symplectic(ls.genus))
    throw Error("basis-construction-error", "intersection matrix of alpha' is not standard");

  FormContext ctx{&c, &model.f};
  for (int i = 0; i < 2 * ls.genus; ++i) {
    ls.alpha_prime_base.push_back(combine(ls.candidates, ls.basis, i));
    ls.alpha_prime.push_back(trace(c, ls.alpha_prime_base.back(), ls.base_y, ls.trace_opt));
    real defect = 0;
    real w = winding_number(ctx, ls.alpha_prime.back(), &defect);
    ls.m.push_back(std::lround(w));
    ls.winding_defect.push_back(defect);
  }

  // beta_Q: a small loop around Q itself
  size_t qdisc = 0;
  for (size_t k = 0; k < ls.discs.size(); ++k)
    if (std::abs(ls.discs[k].center - model.Q.x) < 1e-7L) qdisc = k;
  auto others = without(ls.discs, qdisc);
  if (c.is_branch(model.Q.x, 1e-7L)) {
    ls.beta_base = lasso(ls.base_x, ls.discs[qdisc], others, c.n());
  } else {
    BaseLoop inner = lasso(ls.base_x, ls.discs[qdisc], others, 1);
    int found = -1;
    for (int s = 0; s < c.n() && found < 0; ++s) {
      // follow the outgoing half to the disc, then straight to x_Q
      BaseLoop probe = on_sheet(ls, s, {});
      if (s > 0) probe.resize(probe.size() / 2);
      cplx dir = ls.base_x - ls.discs[qdisc].center;
      cplx entry = ls.discs[qdisc].center + ls.discs[qdisc].radius * dir / std::abs(dir);
      BaseLoop out = detoured_line(ls.base_x, entry, others);
      probe = probe + out;
      probe.push_back({BasePiece::Line, entry, model.Q.x});
      TraceOptions loose = ls.trace_opt;
      loose.obstacles.clear();
      cplx y = trace(c, probe, ls.base_y, loose).y1;
      if (std::abs(y - model.Q.y) < 1e-6L * (1 + std::abs(y))) found = s;
    }
    if (found < 0) throw invariant_violation("no sheet of the base fibre reaches Q");
    ls.beta_base = on_sheet(ls, found, inner);
  }
  ls.beta_Q = trace(c, ls.beta_base, ls.base_y, ls.trace_opt);
  ls.beta_winding = winding_number(ctx, ls.beta_Q);

  for (int i = 0; i < 2 * ls.genus; ++i) {
    ls.alpha_base.push_back(power(ls.alpha_prime_base[i], ls.N) +
                            power(ls.beta_base, static_cast<int>(-ls.m[i])));
    ls.alpha.push_back(trace(c, ls.alpha_base.back(), ls.base_y, ls.trace_opt));
    ls.alpha_winding.push_back(winding_number(ctx, ls.alpha.back()));
  }
  return ls;
}

}  // namespace regulab
