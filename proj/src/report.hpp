#pragma once

#include <string>

#include "harness.hpp"

#include <json.hpp>

namespace adb {

nlohmann::json to_json(const WitnessReport& report);
nlohmann::json to_json(const ViolationStats& stats);
nlohmann::json to_json(const ClassificationResult& result);
nlohmann::json to_json(const RunReport& report);

// Lossless counterparts for the structured format.
WitnessReport witness_report_from_json(const nlohmann::json& j);
ViolationStats violation_stats_from_json(const nlohmann::json& j);
ClassificationResult classification_from_json(const nlohmann::json& j);
RunReport run_report_from_json(const nlohmann::json& j);

std::string render_human(const RunReport& report);

}  // namespace adb
