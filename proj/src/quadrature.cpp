#include "regulab/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>

namespace regulab {

namespace {

// P_0..P_{m} at x
void legendre_values(real x, int m, real* out) {
  out[0] = 1;
  if (m >= 1) out[1] = x;
  for (int k = 2; k <= m; ++k) out[k] = ((2 * k - 1) * x * out[k - 1] - (k - 1) * out[k - 2]) / k;
}

PanelRule build_rule() {
  PanelRule r;
  using G = boost::math::quadrature::gauss<real, kNodes>;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  // boost stores the nonnegative half; expand to sorted nodes on [-1, 1]
  std::array<real, kNodes> x{}, W{};
  for (int i = 0; i < kNodes / 2; ++i) {
    x[kNodes / 2 - 1 - i] = -a[i];
    W[kNodes / 2 - 1 - i] = w[i];
    x[kNodes / 2 + i] = a[i];
    W[kNodes / 2 + i] = w[i];
  }
  std::array<std::array<real, kNodes + 1>, kNodes> P{};
  for (int k = 0; k < kNodes; ++k) {
    r.s[k] = (x[k] + 1) / 2;
    r.w[k] = W[k] / 2;
    legendre_values(x[k], kNodes, P[k].data());
  }
  for (int m = 0; m < kNodes; ++m)
    for (int k = 0; k < kNodes; ++k) r.leg[m][k] = (2 * m + 1) / 2.0L * W[k] * P[k][m];
  // integral from -1 to x_k of P_m, halved for the [0,1] variable
  for (int k = 0; k < kNodes; ++k) {
    std::array<real, kNodes> I{};
    I[0] = x[k] + 1;
    for (int m = 1; m < kNodes; ++m) I[m] = (P[k][m + 1] - P[k][m - 1]) / (2 * m + 1);
    for (int j = 0; j < kNodes; ++j) {
      real acc = 0;
      for (int m = 0; m < kNodes; ++m) acc += r.leg[m][j] * I[m];
      r.cum[k][j] = acc / 2;
    }
  }
  return r;
}

}  // namespace

const PanelRule& panel_rule() {
  static const PanelRule rule = build_rule();
  return rule;
}

cplx panel_sum(const NodeValues& v) {
  const auto& r = panel_rule();
  cplx acc = 0;
  for (int k = 0; k < kNodes; ++k) acc += r.w[k] * v[k];
  return acc;
}

NodeValues panel_primitive(const NodeValues& v, cplx start) {
  const auto& r = panel_rule();
  NodeValues out;
  for (int k = 0; k < kNodes; ++k) {
    cplx acc = start;
    for (int j = 0; j < kNodes; ++j) acc += r.cum[k][j] * v[j];
    out[k] = acc;
  }
  return out;
}

NodeValues legendre_coeffs(const NodeValues& v) {
  const auto& r = panel_rule();
  NodeValues c;
  for (int m = 0; m < kNodes; ++m) {
    cplx acc = 0;
    for (int k = 0; k < kNodes; ++k) acc += r.leg[m][k] * v[k];
    c[m] = acc;
  }
  return c;
}

real legendre_tail(const NodeValues& v) {
  auto c = legendre_coeffs(v);
  real big = 0;
  for (auto& z : c) big = std::max(big, std::abs(z));
  if (big == 0) return 0;
  if (!std::isfinite(big)) return INFINITY;
  return (std::abs(c[kNodes - 1]) + std::abs(c[kNodes - 2])) / big;
}

cplx panel_interpolate(const NodeValues& v, real s) { return legendre_series(legendre_coeffs(v), s); }

cplx legendre_series(const NodeValues& c, real s) {
  real P[kNodes + 1];
  legendre_values(2 * s - 1, kNodes - 1, P);
  cplx acc = 0;
  for (int m = 0; m < kNodes; ++m) acc += c[m] * P[m];
  return acc;
}

namespace {

struct Cell {
  real u0, u1, v0, v1;
  std::vector<cplx> value;
  real error;
  bool operator<(const Cell& o) const { return error < o.error; }
};

struct KronrodRule {
  std::array<real, 15> x{}, wk{}, wg{};
};

const KronrodRule& kronrod() {
  static const KronrodRule rule = [] {
    KronrodRule r;
    using K = boost::math::quadrature::gauss_kronrod<real, 15>;
    using G = boost::math::quadrature::gauss<real, 7>;
    const auto& a = K::abscissa();
    const auto& w = K::weights();
    const auto& gw = G::weights();
    // index 7 is the centre; the Gauss nodes are the even entries of a
    for (int i = 0; i < 8; ++i) {
      r.x[7 + i] = a[i];
      r.x[7 - i] = -a[i];
      r.wk[7 + i] = r.wk[7 - i] = w[i];
      real g = (i % 2 == 0) ? gw[i / 2] : 0;
      r.wg[7 + i] = r.wg[7 - i] = g;
    }
    return r;
  }();
  return rule;
}

Cell evaluate_cell(const VectorIntegrand& f, int dim, real u0, real u1, real v0, real v1,
                   long& evals) {
  const auto& k = kronrod();
  Cell c{u0, u1, v0, v1, std::vector<cplx>(dim), 0};
  std::vector<cplx> gauss(dim), buf(dim);
  real hu = (u1 - u0) / 2, hv = (v1 - v0) / 2;
  real cu = (u0 + u1) / 2, cv = (v0 + v1) / 2;
  bool bad = false;
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) {
      f(cu + hu * k.x[i], cv + hv * k.x[j], buf.data());
      ++evals;
      real wk = k.wk[i] * k.wk[j] * hu * hv, wg = k.wg[i] * k.wg[j] * hu * hv;
      for (int d = 0; d < dim; ++d) {
        if (!std::isfinite(buf[d].real()) || !std::isfinite(buf[d].imag())) {
          bad = true;
          continue;
        }
        c.value[d] += wk * buf[d];
        gauss[d] += wg * buf[d];
      }
    }
  real err = 0;
  for (int d = 0; d < dim; ++d) err = std::max(err, std::abs(c.value[d] - gauss[d]));
  c.error = bad ? INFINITY : err;
  return c;
}

}  // namespace

CubatureResult adaptive_cubature(const VectorIntegrand& f, int dim, real u0, real u1, real v0,
                                 real v1, real abs_tol, real rel_tol, long max_evals,
                                 int initial_u, int initial_v) {
  CubatureResult res;
  std::priority_queue<Cell> queue;
  std::vector<Cell> done;
  real min_width = 1e-13L * std::max(u1 - u0, v1 - v0);
  for (int a = 0; a < initial_u; ++a)
    for (int b = 0; b < initial_v; ++b) {
      real ua = u0 + (u1 - u0) * a / initial_u, ub = u0 + (u1 - u0) * (a + 1) / initial_u;
      real va = v0 + (v1 - v0) * b / initial_v, vb = v0 + (v1 - v0) * (b + 1) / initial_v;
      queue.push(evaluate_cell(f, dim, ua, ub, va, vb, res.evaluations));
    }
  auto totals = [&](real& err, real& mag) {
    std::vector<cplx> sum(dim);
    err = 0;
    auto add = [&](const Cell& c) {
      err += c.error;
      for (int d = 0; d < dim; ++d) sum[d] += c.value[d];
    };
    auto copy = queue;
    while (!copy.empty()) {
      add(copy.top());
      copy.pop();
    }
    for (auto& c : done) add(c);
    mag = 0;
    for (auto& z : sum) mag = std::max(mag, std::abs(z));
    return sum;
  };
  // running error total; recomputed exactly every so often to avoid drift
  real err_total = 0, mag = 0;
  totals(err_total, mag);
  long iter = 0;
  while (!queue.empty()) {
    if (iter++ % 64 == 0) totals(err_total, mag);
    if (err_total <= std::max(abs_tol, rel_tol * mag)) break;
    if (res.evaluations >= max_evals) break;
    Cell c = queue.top();
    queue.pop();
    if (c.u1 - c.u0 < min_width) {
      c.error = std::isfinite(c.error) ? c.error : 0;
      done.push_back(c);
      res.converged = false;
      totals(err_total, mag);
      continue;
    }
    err_total -= c.error;
    real um = (c.u0 + c.u1) / 2, vm = (c.v0 + c.v1) / 2;
    for (auto [a, b, cc, dd] : {std::array<real, 4>{c.u0, um, c.v0, vm}, {um, c.u1, c.v0, vm},
                                 {c.u0, um, vm, c.v1}, {um, c.u1, vm, c.v1}}) {
      Cell child = evaluate_cell(f, dim, a, b, cc, dd, res.evaluations);
      err_total += child.error;
      queue.push(std::move(child));
    }
    if (!std::isfinite(err_total)) totals(err_total, mag);
  }
  res.value = totals(res.error, mag);
  res.converged = res.error <= std::max(abs_tol, rel_tol * mag);
  res.cells = static_cast<int>(queue.size() + done.size());
  return res;
}

}  // namespace regulab
