#pragma once
// Report emission: report.json, tables/*.csv and plots/*.svg.
#include <string>

#include "regulab/pipeline.hpp"

namespace regulab {

nlohmann::json to_json(cplx z);
nlohmann::json to_json(const CMat& m);
nlohmann::json to_json(const CVec& v);

// Base-plane picture of branch points, marked points, loops and gamma; any
// of the pointers may be null. Always returns a valid SVG document.
std::string render_paths_svg(const CurveModel* model, const LoopSystem* loops,
                             const LevelSetGamma* gamma);

// Writes report.json, tables and plots into dir; rendering problems are
// returned as warnings rather than thrown.
std::vector<std::string> write_outputs(const RunReport& run, const std::string& dir);

}  // namespace regulab
