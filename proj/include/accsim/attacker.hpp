#pragma once

#include <cstdint>
#include <optional>

#include "accsim/canbus.hpp"
#include "accsim/rng.hpp"

namespace accsim {

enum class InjectionMode {
  bernoulli,  // i.i.d. draw per sensor period
  pattern,    // evenly spread deterministic pattern at rate p (no randomness)
};

struct AttackConfig {
  bool enabled = false;
  double spoofed_speed = 10.0;  // km/h
  double injection_probability = 0.75;
  std::optional<std::uint16_t> target_id;  // defaults to the bus speed frame id
  double start_time = 0.0;
  std::optional<double> end_time;      // open-ended when unset
  std::optional<std::uint64_t> seed;   // derived from the master seed when unset
  InjectionMode mode = InjectionMode::bernoulli;

  void validate() const;
};

/// Speed-frame injector. Decisions depend only on (seed, period index).
class Attacker {
 public:
  Attacker(const AttackConfig& config, std::uint16_t default_target_id, std::uint64_t seed);

  [[nodiscard]] bool active_at(double now) const noexcept;

  /// Call once per speed-sensor period. Returns a spoofed frame or nothing.
  std::optional<can::CanFrame> maybe_inject(double now);

  [[nodiscard]] std::uint64_t periods_seen() const noexcept { return period_index_; }
  [[nodiscard]] std::uint64_t injected() const noexcept { return injected_; }

 private:
  bool decide();

  AttackConfig config_;
  std::uint16_t target_id_;
  std::array<std::uint8_t, 2> payload_;
  rng::Stream stream_;
  std::uint64_t period_index_ = 0;
  std::uint64_t injected_ = 0;
};

}  // namespace accsim
