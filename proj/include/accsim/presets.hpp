#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "accsim/scenario.hpp"

namespace accsim {

struct PresetInfo {
  std::string name;
  std::string description;
};

/// Names in listing order.
const std::vector<PresetInfo>& preset_catalog();

/// Throws ConfigError for an unknown name.
ScenarioConfig preset(std::string_view name);

/// Car-following under speed spoofing: ego and lead cruise at `cruise_kmh`,
/// the attacker injects `spoof_kmh` at p = 0.75, optionally with the IDS.
ScenarioConfig spoofing_config(double cruise_kmh, double spoof_kmh, bool with_ids, std::uint64_t seed = 0);

}  // namespace accsim
