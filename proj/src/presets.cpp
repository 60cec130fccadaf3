#include "accsim/presets.hpp"

#include <functional>
#include <map>

namespace accsim {

namespace {

constexpr double kRunDuration = 60.0;

ScenarioConfig car_following_without_attack() {
  ScenarioConfig c;
  c.ego_target_speed = 25.0;
  c.ego_initial_speed = 0.0;
  c.lead_profile = TrapezoidProfile{30.0, 10.0, 10.0, 10.0};
  c.duration = kRunDuration;
  c.attack.enabled = false;
  return c;
}

struct Entry {
  PresetInfo info;
  std::function<ScenarioConfig()> make;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> all = {
      {{"scenario1", "ego 25 km/h behind lead 0->30->0 km/h, no attack, no IDS"}, car_following_without_attack},
      {{"scenario2-60", "ego/lead 60 km/h, spoof 10 km/h at p=0.75, no IDS"},
       [] { return spoofing_config(60, 10, false); }},
      {{"scenario2-90", "ego/lead 90 km/h, spoof 10 km/h at p=0.75, no IDS"},
       [] { return spoofing_config(90, 10, false); }},
      {{"scenario3-60", "ego/lead 60 km/h, spoof 10 km/h at p=0.75, IDS 0.97/1.026s"},
       [] { return spoofing_config(60, 10, true); }},
      {{"scenario3-90", "ego/lead 90 km/h, spoof 10 km/h at p=0.75, IDS 0.97/1.026s"},
       [] { return spoofing_config(90, 10, true); }},
      {{"matrix-40-5", "ego/lead 40 km/h, spoof 5 km/h at p=0.75, no IDS"},
       [] { return spoofing_config(40, 5, false); }},
      {{"matrix-40-10", "ego/lead 40 km/h, spoof 10 km/h at p=0.75, no IDS"},
       [] { return spoofing_config(40, 10, false); }},
  };
  return all;
}

}  // namespace

ScenarioConfig spoofing_config(double cruise_kmh, double spoof_kmh, bool with_ids, std::uint64_t seed) {
  ScenarioConfig c;
  c.ego_target_speed = cruise_kmh;
  c.ego_initial_speed = 0.0;
  c.lead_profile = ConstantProfile{cruise_kmh};
  c.duration = kRunDuration;
  c.attack.enabled = true;
  c.attack.spoofed_speed = spoof_kmh;
  c.attack.injection_probability = 0.75;
  if (with_ids) c.ids = IdsConfig{};
  c.master_seed = seed;
  return c;
}

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = [] {
    std::vector<PresetInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return catalog;
}

ScenarioConfig preset(std::string_view name) {
  for (const auto& e : entries())
    if (e.info.name == name) return e.make();
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace accsim
