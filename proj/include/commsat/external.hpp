#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "commsat/model.hpp"

namespace commsat {

enum class ExternalStatus { Sat, Unsat, Timeout, Crash };

const char* to_string(ExternalStatus status) noexcept;

struct ExternalResult {
  ExternalStatus status = ExternalStatus::Crash;
  /// Why a run counts as a crash: "nonzero-exit", "signal", "no-result-line",
  /// "unknown-result", "model-mismatch" or "exec-failed". Empty otherwise.
  std::string crash_reason;
  double elapsed_seconds = 0.0;
  int exit_code = 0;
  std::optional<Assignment> model;  ///< set when the solver printed `v` lines that check out
  std::string output;
};

/// Parses the competition output format (`s ...` result line, `v ...` model
/// lines) and checks any model against `f`. Exit codes 0, 10 and 20 are
/// accepted as normal termination.
ExternalResult interpret_solver_output(const Formula& f, const std::string& output, int exit_code);

/// Runs `binary <cnf>` with stdout captured and enforces a wallclock limit.
/// On timeout the process group is killed and elapsed is reported as the limit.
ExternalResult run_external_solver(const std::filesystem::path& binary, const std::filesystem::path& cnf,
                                   double timeout_seconds, const std::vector<std::string>& extra_args = {});

}  // namespace commsat
