#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "fogsched/model.hpp"

namespace fogsched {

// Scenario document: top-level keys "config", "nodes", "links", "tasks",
// "gateways". "config" is null for hand-built instances.
nlohmann::json scenario_to_json(const Instance& instance);
Instance scenario_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const ScenarioConfig& config);
ScenarioConfig config_from_json(const nlohmann::json& doc);

void save_scenario(const Instance& instance, const std::filesystem::path& path);
Instance load_scenario(const std::filesystem::path& path);

// FNV-1a over the canonical serialized scenario.
std::uint64_t instance_hash(const Instance& instance);

}  // namespace fogsched
