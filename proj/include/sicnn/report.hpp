#pragma once

#include <json.hpp>

#include "sicnn/activation.hpp"
#include "sicnn/analysis.hpp"
#include "sicnn/network.hpp"

namespace sicnn {

// JSON views of the reports. Non-finite numbers are written as null.

[[nodiscard]] nlohmann::json to_json(const DerivedConstants& k);
[[nodiscard]] nlohmann::json to_json(const SpacingReport& s);
[[nodiscard]] nlohmann::json to_json(const ConditionEntry& e);
[[nodiscard]] nlohmann::json to_json(const ConditionReport& r);
[[nodiscard]] nlohmann::json to_json(const BoundsReport& r);
[[nodiscard]] nlohmann::json to_json(const IntervalRecord& r);
[[nodiscard]] nlohmann::json to_json(const StabilityReport& r);
[[nodiscard]] nlohmann::json to_json(const TranslationReport& r);

/// Picard statistics over every committed interval of a trajectory.
[[nodiscard]] nlohmann::json picard_summary(const Trajectory& traj);

[[nodiscard]] std::string to_string(Relation r);

} // namespace sicnn
