#include "accsim/core.hpp"

#include <cmath>

namespace accsim {

namespace {
constexpr double kKmhPerMps = 3.6;
}

void require_finite(double x, const std::string& what) {
  if (!std::isfinite(x)) throw ConfigError(what + " must be finite");
}

SpeedMps kmh_to_mps(SpeedKmh s) {
  require_finite(s.value, "speed");
  if (s.value < 0.0) throw ConfigError("speed must be non-negative, got " + std::to_string(s.value));
  return SpeedMps{s.value / kKmhPerMps};
}

SpeedKmh mps_to_kmh(SpeedMps s) {
  require_finite(s.value, "speed");
  if (s.value < 0.0) throw ConfigError("speed must be non-negative, got " + std::to_string(s.value));
  return SpeedKmh{s.value * kKmhPerMps};
}

SimClock::SimClock(double dt, std::uint64_t tick_index) : dt_(dt), tick_(tick_index) {
  if (!std::isfinite(dt) || dt <= 0.0) throw ConfigError("dt must be positive");
}

std::uint64_t SimClock::ticks_per(double period) const {
  if (!std::isfinite(period) || period <= 0.0) throw ConfigError("period must be positive");
  const double ratio = period / dt_;
  const double whole = std::round(ratio);
  if (whole < 1.0 || std::abs(ratio - whole) > 1e-9 * whole)
    throw ConfigError("period " + std::to_string(period) + " is not an integer multiple of dt");
  return static_cast<std::uint64_t>(whole);
}

}  // namespace accsim
