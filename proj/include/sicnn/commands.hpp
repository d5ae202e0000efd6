#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sicnn/config.hpp"

namespace sicnn {

enum class ExitCode : int { pass = 0, fail = 1, config = 2, solver = 3 };

/// Result of one driver command. `csv` and `svg` are empty when the command has nothing to write.
struct CommandOutput {
  ExitCode exit_code = ExitCode::pass;
  nlohmann::json report;
  std::string csv;
  std::string svg;
};

[[nodiscard]] std::vector<std::string> cell_names(const NetworkSpec& net);

/// Conditions, spacing scan and a sampling check of the declared M and L.
[[nodiscard]] CommandOutput run_check(const RunConfig& cfg);
/// Initial value problem from the configured sigma and phi.
[[nodiscard]] CommandOutput run_simulate(const RunConfig& cfg, bool plot);
/// Bounded solution on [ap.t0, ap.t1].
[[nodiscard]] CommandOutput run_ap(const RunConfig& cfg, bool plot);
[[nodiscard]] CommandOutput run_stability(const RunConfig& cfg, bool plot);
/// Translation-number scan over the bounded solution.
[[nodiscard]] CommandOutput run_scan(const RunConfig& cfg, bool plot);

/// Dispatch by name: check, simulate, ap, stability, scan. Certification
/// failures become exit 1 with the reason in the report; other errors propagate.
[[nodiscard]] CommandOutput run_command(const std::string& name, const RunConfig& cfg, bool plot);

} // namespace sicnn
