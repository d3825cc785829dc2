#include "regulab/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace regulab {

namespace fs = std::filesystem;
using nlohmann::json;

json to_json(cplx z) { return json::array({static_cast<double>(z.real()), static_cast<double>(z.imag())}); }

json to_json(const CMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const CVec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Curve2D {
  std::string label;
  std::string stroke;  // empty: colour by sheet
  std::vector<std::pair<cplx, cplx>> pts;
};

int sheet_of(const Curve& c, cplx x, cplx y) {
  auto fib = c.fiber(x);
  int best = 0;
  for (size_t k = 1; k < fib.size(); ++k)
    if (std::abs(fib[k] - y) < std::abs(fib[best] - y)) best = static_cast<int>(k);
  return best;
}

}  // namespace

std::string render_paths_svg(const CurveModel* model, const LoopSystem* loops,
                             const LevelSetGamma* gamma) {
  std::vector<Curve2D> curves;
  if (loops) {
    for (size_t i = 0; i < loops->alpha_prime.size(); ++i)
      curves.push_back({"alpha'_" + std::to_string(i + 1), "", loops->alpha_prime[i].polyline(8)});
    if (!loops->beta_Q.panels.empty()) curves.push_back({"beta_Q", "", loops->beta_Q.polyline(8)});
  }
  if (gamma)
    for (size_t k = 0; k < gamma->components.size(); ++k)
      curves.push_back({"gamma_" + std::to_string(k + 1), "#000000",
                        gamma->components[k].path.polyline(8)});
  struct Mark {
    std::string label;
    cplx x;
    bool branch;
  };
  std::vector<Mark> marks;
  if (model) {
    for (cplx b : model->curve.branch_points()) marks.push_back({"", b, true});
    for (const CurvePoint* p : {&model->P, &model->Q, &model->R})
      if (!p->infinite) marks.push_back({p->label, p->x, false});
  }
  real x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  bool any = false;
  auto grow = [&](cplx z) {
    if (!any) {
      x0 = x1 = z.real();
      y0 = y1 = z.imag();
      any = true;
    }
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  };
  for (auto& c : curves)
    for (auto& p : c.pts) grow(p.first);
  for (auto& m : marks) grow(m.x);
  real span = std::max({x1 - x0, y1 - y0, static_cast<real>(1e-6)}) * 1.1L;
  real cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
  const double W = 800, H = 800, legend_w = 200;
  auto px = [&](cplx z) { return static_cast<double>((z.real() - cx) / span + 0.5) * W; };
  auto py = [&](cplx z) { return static_cast<double>(0.5 - (z.imag() - cy) / span) * H; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W + legend_w << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W + legend_w << " " << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (auto& c : curves) {
    if (c.pts.size() < 2) continue;
    if (!c.stroke.empty() || !model) {
      s << "<polyline fill=\"none\" stroke=\"" << (c.stroke.empty() ? kPalette[0] : c.stroke)
        << "\" stroke-width=\"1.5\" points=\"";
      for (auto& p : c.pts) s << num(px(p.first)) << "," << num(py(p.first)) << " ";
      s << "\"/>\n";
      continue;
    }
    // split into runs on one sheet
    size_t start = 0;
    int sheet = sheet_of(model->curve, c.pts[0].first, c.pts[0].second);
    for (size_t k = 1; k <= c.pts.size(); ++k) {
      int sk = k < c.pts.size() ? sheet_of(model->curve, c.pts[k].first, c.pts[k].second) : -1;
      if (sk == sheet) continue;
      size_t end = std::min(k, c.pts.size() - 1);
      s << "<polyline fill=\"none\" stroke=\"" << kPalette[sheet % 8]
        << "\" stroke-width=\"1\" points=\"";
      for (size_t q = start; q <= end; ++q)
        s << num(px(c.pts[q].first)) << "," << num(py(c.pts[q].first)) << " ";
      s << "\"/>\n";
      start = end;
      sheet = sk;
    }
  }
  for (auto& m : marks) {
    if (m.branch) {
      s << "<circle cx=\"" << num(px(m.x)) << "\" cy=\"" << num(py(m.x))
        << "\" r=\"4\" fill=\"black\"/>\n";
    } else {
      s << "<circle cx=\"" << num(px(m.x)) << "\" cy=\"" << num(py(m.x))
        << "\" r=\"5\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
      s << "<text x=\"" << num(px(m.x) + 8) << "\" y=\"" << num(py(m.x) - 8)
        << "\" font-family=\"sans-serif\" font-size=\"16\">" << m.label << "</text>\n";
    }
  }
  // legend
  double ly = 30;
  s << "<g font-family=\"sans-serif\" font-size=\"13\">\n";
  for (auto& c : curves) {
    s << "<text x=\"" << W + 10 << "\" y=\"" << ly << "\">" << c.label << "</text>\n";
    ly += 18;
  }
  if (model && loops) {
    for (int k = 0; k < model->curve.n(); ++k) {
      s << "<rect x=\"" << W + 10 << "\" y=\"" << ly - 10 << "\" width=\"12\" height=\"12\" fill=\""
        << kPalette[k % 8] << "\"/><text x=\"" << W + 28 << "\" y=\"" << ly << "\">sheet " << k
        << "</text>\n";
      ly += 18;
    }
  }
  s << "</g>\n</svg>\n";
  return s.str();
}

namespace {

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p);
  if (!f) throw Error("io-error", "cannot write " + p.string());
  f << content;
}

std::string csv_complex(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g", static_cast<double>(z.real()),
                static_cast<double>(z.imag()));
  return buf;
}

std::string matrix_csv(const CMat& m, const char* row, const char* col) {
  std::ostringstream s;
  s << row << "," << col << ",re,im\n";
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s << i + 1 << "," << j + 1 << "," << csv_complex(m(i, j)) << "\n";
  return s.str();
}

}  // namespace

std::vector<std::string> write_outputs(const RunReport& run, const std::string& dir) {
  std::vector<std::string> warnings;
  fs::path root(dir);
  fs::create_directories(root / "tables");
  fs::create_directories(root / "plots");
  json full = run.report;
  full["timing"] = run.timing;
  write_file(root / "report.json", full.dump(2) + "\n");
  const PipelineState& st = *run.state;
  if (st.frame) {
    write_file(root / "tables" / "periods.csv", matrix_csv(st.frame->periods, "form", "loop"));
    write_file(root / "tables" / "alpha_periods.csv",
               matrix_csv(st.frame->alpha_periods, "form", "loop"));
  }
  if (st.cycle) {
    write_file(root / "tables" / "surface.csv", matrix_csv(st.cycle->surface.surf, "k", "m"));
  }
  if (st.carlson)
    write_file(root / "tables" / "carlson.csv", matrix_csv(st.carlson->entries, "i", "j"));
  if (st.comparison) {
    const auto& mc = *st.comparison;
    std::ostringstream s;
    s << "i,j,carlson_re,carlson_im,regulator_re,regulator_im\n";
    for (int i = 0; i < mc.carlson.rows(); ++i)
      for (int c = 0; c < mc.carlson.cols(); ++c)
        s << i + 1 << "," << mc.columns[c] + 1 << "," << csv_complex(mc.carlson(i, c)) << ","
          << csv_complex(mc.regulator(i, c)) << "\n";
    write_file(root / "tables" / "compare.csv", s.str());
    std::ostringstream k;
    k << "kappa,residual_full,residual_alpha\n";
    for (auto& r : mc.scan)
      k << r.kappa << "," << static_cast<double>(r.residual_full) << ","
        << static_cast<double>(r.residual_alpha) << "\n";
    write_file(root / "tables" / "kappa_scan.csv", k.str());
  }
  if (st.model) {
    try {
      write_file(root / "plots" / "paths.svg",
                 render_paths_svg(&*st.model, st.loops ? &*st.loops : nullptr,
                                  st.gamma ? &*st.gamma : nullptr));
      if (st.gamma)
        write_file(root / "plots" / "gamma.svg", render_paths_svg(&*st.model, nullptr, &*st.gamma));
    } catch (const std::exception& e) {
      warnings.push_back(std::string("plot rendering failed: ") + e.what());
    }
  }
  return warnings;
}

}  // namespace regulab
