#include "accsim/attacker.hpp"

#include <cmath>

namespace accsim {

void AttackConfig::validate() const {
  require_finite(spoofed_speed, "attack.spoofed_speed");
  require_finite(injection_probability, "attack.injection_probability");
  require_finite(start_time, "attack.start_time");
  if (injection_probability < 0.0 || injection_probability > 1.0)
    throw ConfigError("attack.injection_probability must be in [0, 1]");
  if (spoofed_speed < 0.0 || spoofed_speed > can::kMaxEncodable)
    throw ConfigError("attack.spoofed_speed out of encodable range");
  if (target_id && *target_id > can::kMaxStandardId) throw ConfigError("attack.target_id exceeds 11 bits");
  if (start_time < 0.0) throw ConfigError("attack.start_time must be non-negative");
  if (end_time && !(*end_time >= start_time)) throw ConfigError("attack.end_time must be >= start_time");
}

Attacker::Attacker(const AttackConfig& config, std::uint16_t default_target_id, std::uint64_t seed)
    : config_(config),
      target_id_(config.target_id.value_or(default_target_id)),
      payload_(can::encode_speed(SpeedKmh{config.spoofed_speed})),
      stream_(seed) {
  config_.validate();
}

bool Attacker::active_at(double now) const noexcept {
  constexpr double eps = 1e-9;
  if (!config_.enabled) return false;
  if (now + eps < config_.start_time) return false;
  return !config_.end_time || now <= *config_.end_time + eps;
}

bool Attacker::decide() {
  const double p = config_.injection_probability;
  if (config_.mode == InjectionMode::pattern) {
    const auto i = static_cast<double>(period_index_);
    return std::floor((i + 1.0) * p) > std::floor(i * p);
  }
  return stream_.bernoulli(p);
}

std::optional<can::CanFrame> Attacker::maybe_inject(double now) {
  if (!active_at(now)) return std::nullopt;
  const bool inject = decide();
  ++period_index_;
  if (!inject) return std::nullopt;
  ++injected_;
  return can::CanFrame(now, target_id_, payload_, can::Provenance::spoofed);
}

}  // namespace accsim
