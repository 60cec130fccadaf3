#include "accsim/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "accsim/core.hpp"

namespace accsim {

void ActuationLimits::validate() const {
  for (double v : {a_max, b_max, b_emergency}) {
    require_finite(v, "actuation limit");
    if (v <= 0.0) throw ConfigError("actuation limits must be strictly positive");
  }
  if (b_emergency < b_max) throw ConfigError("b_emergency must be >= b_max");
}

ControlCommand ControlCommand::normal(double u) {
  require_finite(u, "control signal");
  return {CommandMode::normal, std::clamp(u, -1.0, 1.0)};
}

const char* to_string(CommandMode mode) noexcept {
  switch (mode) {
    case CommandMode::normal:
      return "normal";
    case CommandMode::emergency_brake:
      return "emergency_brake";
  }
  return "unknown";
}

double commanded_accel(const ControlCommand& cmd, const ActuationLimits& limits) {
  if (cmd.mode == CommandMode::emergency_brake) return -limits.b_emergency;
  const double u = std::clamp(cmd.u, -1.0, 1.0);
  return u >= 0.0 ? u * limits.a_max : u * limits.b_max;
}

VehicleState step(const VehicleState& state, const ControlCommand& cmd, const ActuationLimits& limits,
                  double dt) {
  if (!std::isfinite(dt) || dt <= 0.0) throw ConfigError("dt must be positive");
  require_finite(state.position, "vehicle position");
  require_finite(state.speed, "vehicle speed");
  require_finite(cmd.u, "control signal");

  const double v0 = std::max(0.0, state.speed);
  const double a = commanded_accel(cmd, limits);
  const double v1 = v0 + a * dt;

  VehicleState next;
  next.last_accel = a;
  if (v1 >= 0.0) {
    next.speed = v1;
    next.position = state.position + 0.5 * (v0 + v1) * dt;
  } else {
    // a < 0 here; stop partway through the step.
    const double t_stop = v0 / -a;
    next.speed = 0.0;
    next.position = state.position + 0.5 * v0 * t_stop;
  }
  return next;
}

}  // namespace accsim
