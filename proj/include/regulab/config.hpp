#pragma once
// Run configuration: a TOML subset (tables, key = value with strings,
// numbers, booleans and flat arrays, # comments) read into JSON, and the
// curve model it describes.
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "regulab/curve.hpp"

namespace regulab {

// Throws Error("config-error", "line N: ...") on malformed input.
nlohmann::json parse_toml(const std::string& text);
nlohmann::json load_toml(const std::string& path);

struct Tolerances {
  real period = 1e-7L;       // duality and symmetry of periods
  real winding = 1e-8L;      // winding and log closure along alpha loops
  real gamma_arg = 1e-8L;    // |arg f| along gamma
  real gamma_period = 1e-6L; // |int_gamma dz|
  real torsion = 1e-6L;      // AJ(N(Q - R)) residual
  real disc = 1e-4L;         // disc identity, relative
  real main_theorem = 1e-3L; // relative residual after lattice reduction
  real surface = 1e-9L;      // relative tolerance of the surface cubature
};

struct RunConfig {
  std::string source;  // config path, empty for none
  nlohmann::json raw;
  std::vector<std::string> stages;
  std::string out_dir = "regulab_out";
  std::uint64_t seed = 1;
  int precision_bits = 64;
  bool precision_capped = false;  // requested more bits than long double offers
  Tolerances tol;
  bool strict = false;
  // false: report regulator values for f as given, which adds the
  // decomposable term log f(P) times the integral over C
  bool normalize_f = true;
};

RunConfig config_from_json(const nlohmann::json& j, const std::string& source = "");
RunConfig load_config(const std::string& path);

// [curve] kind = hyperelliptic | fermat | superelliptic, p, n;
// [points] P, P_sheet or P_y, Q, R as "x" or ["x", "y"];
// [function] num, den, normalize (the flag is read into RunConfig).
CurveModel model_from_config(const nlohmann::json& j);

}  // namespace regulab
