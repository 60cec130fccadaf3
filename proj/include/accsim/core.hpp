#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace accsim {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or out-of-domain argument.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

struct SpeedMps;

/// Speed in km/h. Only used at the stopping-distance boundary, on the bus,
/// and in user-facing config/output; everything else is SI.
struct SpeedKmh {
  double value = 0.0;

  constexpr auto operator<=>(const SpeedKmh&) const = default;
};

struct SpeedMps {
  double value = 0.0;

  constexpr auto operator<=>(const SpeedMps&) const = default;
};

/// Throws ConfigError for negative or non-finite input.
SpeedMps kmh_to_mps(SpeedKmh s);
SpeedKmh mps_to_kmh(SpeedMps s);

/// Fixed-step clock. Time is always tick_index * dt, never accumulated.
class SimClock {
 public:
  explicit SimClock(double dt = 0.05, std::uint64_t tick_index = 0);

  [[nodiscard]] double dt() const noexcept { return dt_; }
  [[nodiscard]] std::uint64_t tick() const noexcept { return tick_; }
  [[nodiscard]] double now() const noexcept { return static_cast<double>(tick_) * dt_; }

  /// Time at an arbitrary tick of this clock.
  [[nodiscard]] double time_at(std::uint64_t tick) const noexcept {
    return static_cast<double>(tick) * dt_;
  }

  [[nodiscard]] SimClock advanced() const noexcept { return SimClock(dt_, tick_ + 1, Unchecked{}); }
  void advance() noexcept { ++tick_; }

  /// Number of whole ticks in `period`; throws unless period is a positive
  /// integer multiple of dt (to within 1e-9 relative).
  [[nodiscard]] std::uint64_t ticks_per(double period) const;

 private:
  struct Unchecked {};
  SimClock(double dt, std::uint64_t tick, Unchecked) noexcept : dt_(dt), tick_(tick) {}

  double dt_;
  std::uint64_t tick_;
};

[[nodiscard]] inline SimClock advance(const SimClock& clock) noexcept { return clock.advanced(); }

/// Throws ConfigError(what + ...) unless x is finite.
void require_finite(double x, const std::string& what);

}  // namespace accsim
