#pragma once
// Stage orchestration for the regulab CLI: verify, homology, periods, gamma,
// regulator, carlson, compare and mhs-selftest, run in dependency order.
#include <memory>
#include <optional>

#include "regulab/carlson.hpp"
#include "regulab/config.hpp"
#include "regulab/mhs.hpp"

namespace regulab {

inline constexpr int kReportSchemaVersion = 1;

// Objects produced by the stages; held behind a pointer so addresses stay
// stable for the cycle's back references.
struct PipelineState {
  std::optional<CurveModel> model;
  std::optional<LoopSystem> loops;
  std::optional<PeriodFrame> frame;
  std::optional<LevelSetGamma> gamma;
  std::optional<MotivicCycle> cycle;
  std::optional<CarlsonEvaluation> carlson;
  std::optional<MainTheoremComparison> comparison;
  std::optional<MhsSelftest> mhs;
};

struct StageResult {
  std::string name;
  // pass | fail | known-deviation | error | skipped
  std::string status;
  std::string message;
  nlohmann::json data = nlohmann::json::object();
  nlohmann::json verdicts = nlohmann::json::object();
  double seconds = 0;
};

struct RunReport {
  nlohmann::json report;  // deterministic content
  nlohmann::json timing;  // wall times, kept apart from report
  std::vector<StageResult> stages;
  std::unique_ptr<PipelineState> state;
  int exit_code = 0;  // 0 pass, 2 numerical verdict failure, 1 operational error
};

// Requested stages plus their prerequisites, in canonical order; "all" expands
// to every curve stage.
std::vector<std::string> resolve_stages(const std::vector<std::string>& requested);

RunReport run_pipeline(const RunConfig& cfg, const std::vector<std::string>& requested);

}  // namespace regulab
