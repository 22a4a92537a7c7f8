#pragma once

#include <json.hpp>

#include "robust/bounds.hpp"
#include "robust/mc.hpp"
#include "robust/rules.hpp"

namespace robust::cli {

/// Bumped whenever a field is renamed or removed.
inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const TestReport& report);
nlohmann::json to_json(const BandEstimate& estimate, std::size_t n);
nlohmann::json to_json(const SimulationConfig& cfg, const SimulationReport& report);

/// Inverses of the above. Throw std::invalid_argument on schema mismatch.
TestReport test_report_from_json(const nlohmann::json& doc);
BandEstimate band_estimate_from_json(const nlohmann::json& doc);

}  // namespace robust::cli
