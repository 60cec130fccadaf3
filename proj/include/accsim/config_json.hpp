#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "accsim/scenario.hpp"

namespace accsim {

/// Strict JSON mapping of ScenarioConfig. Keys mirror the struct field names;
/// missing keys keep their defaults, unknown keys are errors. Errors name the
/// offending key path (e.g. `attack.injection_probability`).
ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

nlohmann::ordered_json config_to_json(const ScenarioConfig& config);

}  // namespace accsim
