// regulab <stage|all> --config <file> [--out <dir>] [--seed <n>] [--tol <x>] [--strict] [--raw-f]
#include <CLI11.hpp>
#include <iostream>

#include "regulab/report.hpp"

using namespace regulab;

int main(int argc, char** argv) {
  CLI::App app{"regulab: periods, regulators and Carlson classes on superelliptic curves"};
  std::string stage, config_path, out_dir;
  std::uint64_t seed = 0;
  double tol = 0;
  bool strict = false, raw_f = false;
  app.add_option("stage", stage,
                 "verify | homology | periods | gamma | regulator | carlson | compare | "
                 "mhs-selftest | all")
      ->required();
  app.add_option("--config", config_path, "TOML run configuration");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for randomised suites");
  app.add_option("--tol", tol, "override the main-theorem residual threshold");
  app.add_flag("--strict", strict, "treat known deviations as failures");
  app.add_flag("--raw-f", raw_f,
               "report regulator values for f as given instead of normalised by f(P) = 1");
  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      cfg = load_config(config_path);
    } else if (stage != "mhs-selftest") {
      std::cerr << "regulab: --config is required for stage '" << stage << "'\n";
      return 1;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--tol")) cfg.tol.main_theorem = tol;
    if (strict) cfg.strict = true;
    if (raw_f) cfg.normalize_f = false;
    RunReport run = run_pipeline(cfg, {stage});
    for (auto& w : write_outputs(run, cfg.out_dir)) std::cerr << "warning: " << w << "\n";
    for (auto& r : run.stages) {
      std::cout << r.name << ": " << r.status;
      if (!r.message.empty()) std::cout << " (" << r.message << ")";
      std::cout << "\n";
    }
    if (cfg.precision_capped)
      std::cerr << "warning: precision_bits capped at 64 (long double)\n";
    std::cout << "report: " << cfg.out_dir << "/report.json\n";
    return run.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "regulab: " << e.what() << "\n";
    return 1;
  }
}
