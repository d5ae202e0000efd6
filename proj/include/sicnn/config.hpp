#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sicnn/integrator.hpp"
#include "sicnn/model.hpp"

namespace sicnn {

struct CheckParams {
  std::size_t validate_samples = 2000;  // 0 skips the sampling check of M and L
  double validate_amplitude = 1.0;
};

struct SimulateParams {
  double t_end = 20.0;
  double stride = 0.01;
};

struct ApParams {
  double t0 = 0.0;
  double t1 = 30.0;
  double accuracy = 1e-6;
  double stride = 0.01;
};

struct StabilityParams {
  double delta = 0.01;
  double horizon = 10.0;
};

struct ScanParams {
  double eps = 0.05;
  double alpha_min = 0.0;
  double alpha_max = 100.0;
  double alpha_step = 0.05;
  double window_start = 0.0;
  double window_end = 30.0;
  int refine = 4;
  double accuracy = 1e-6;
};

/// A fully validated run configuration.
struct RunConfig {
  Model model;
  IvpSetup initial;
  SolverOptions solver;
  CheckParams check;
  SimulateParams simulate;
  ApParams ap;
  StabilityParams stability;
  ScanParams scan;
  std::uint64_t seed = 1;
  nlohmann::json document;  // the accepted document, overrides applied
};

/// Builds a RunConfig; unknown keys, wrong types and violated invariants throw ConfigError.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] RunConfig parse_config_text(const std::string& text);

/// Bundled configurations by name ("example6"); ConfigError for unknown names.
[[nodiscard]] nlohmann::json preset(const std::string& name);
[[nodiscard]] std::vector<std::string> preset_names();

/// Applies "a.b.c=value" to the document. The value is read as JSON when it
/// parses, as a plain string otherwise. Intermediate objects are created.
void apply_override(nlohmann::json& doc, const std::string& assignment);

} // namespace sicnn
