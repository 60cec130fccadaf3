#pragma once

namespace accsim {

/// Longitudinal state of one point-mass vehicle on a straight road (SI units).
struct VehicleState {
  double position = 0.0;    // m
  double speed = 0.0;       // m/s, never negative
  double last_accel = 0.0;  // m/s^2 applied during the last step
};

/// Actuator authority of the lower-level controller.
struct ActuationLimits {
  double a_max = 6.0;        // full throttle, m/s^2
  double b_max = 6.0;        // full service brake, m/s^2
  double b_emergency = 8.0;  // emergency ("cold") brake, m/s^2

  void validate() const;
};

enum class CommandMode { normal, emergency_brake };

/// Output of the upper-level controller. `u` is the saturated PID signal in
/// [-1, 1]; it is ignored in emergency mode.
struct ControlCommand {
  CommandMode mode = CommandMode::normal;
  double u = 0.0;

  static ControlCommand normal(double u);
  static ControlCommand emergency() { return {CommandMode::emergency_brake, 0.0}; }
};

const char* to_string(CommandMode mode) noexcept;

/// Acceleration the lower-level controller realises for `cmd`.
double commanded_accel(const ControlCommand& cmd, const ActuationLimits& limits);

/// Advances one vehicle by dt, applying the commanded acceleration exactly.
/// Speed is clamped at zero; when the vehicle stops inside the step, position
/// only integrates up to the stopping instant.
VehicleState step(const VehicleState& state, const ControlCommand& cmd, const ActuationLimits& limits,
                  double dt);

/// Bumper-to-bumper distance from ego to lead; <= 0 means contact.
inline double gap(const VehicleState& ego, const VehicleState& lead, double lead_offset) noexcept {
  return (lead.position + lead_offset) - ego.position;
}

}  // namespace accsim
