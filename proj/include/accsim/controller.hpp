#pragma once

#include "accsim/core.hpp"
#include "accsim/dynamics.hpp"

namespace accsim {

/// Stopping-sight-distance parameters.
struct SsdParams {
  double t_reaction = 2.5;  // perception-reaction time, s
  double f = 0.35;          // tyre/road friction coefficient
  double g = 0.0;           // road grade

  void validate() const;
};

/// Stopping sight distance in metres for a speed given in km/h:
///   0.278 * t * v + v^2 / (254 * (f + g))
double ssd(SpeedKmh v, const SsdParams& p);

/// Distance left over after the stopping distance; <= 0 means too close.
constexpr double gap_margin(double current_gap, double ssd_m) noexcept { return current_gap - ssd_m; }

struct PidGains {
  double kp = 1.0;
  double ki = 0.7;
  double kd = 0.0;
  double dt = 0.05;

  void validate() const;
};

/// Integral and derivative memory; error units are km/h.
struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool primed = false;  // false until the first step; derivative is 0 then
};

struct PidOutput {
  double u = 0.0;    // raw / u_scale saturated to [-1, 1]
  double raw = 0.0;  // kp*e + ki*I + kd*de/dt
  PidState state;
};

/// One PID update on e = target - current. The integral is clamped so that
/// |ki * integral| <= u_scale before the raw output is formed.
PidOutput pid_step(const PidState& state, const PidGains& gains, double target_kmh, double current_kmh,
                   double u_scale);

/// Tunables of the ACC upper-level controller.
struct AccParams {
  PidGains gains;
  SsdParams ssd;
  double u_scale = 60.0;  // raw PID output (km/h of error) at full throttle or brake
  bool resume_after_flag = true;

  void validate() const;
};

/// What the controller sees: decoded bus values plus the IDS flag.
struct PerceivedInputs {
  double current_speed = 0.0;  // km/h, possibly spoofed
  double target_speed = 0.0;   // km/h
  double current_gap = 0.0;    // m
  bool intrusion_active = false;
};

enum class BrakeCause { none, intrusion, safe_distance };

struct AccDecision {
  ControlCommand command;
  PidState pid;
  double ssd = 0.0;
  double margin = 0.0;
  double raw = 0.0;
  BrakeCause cause = BrakeCause::none;
};

/// Decision flow: an active intrusion flag forces the emergency brake; so does
/// a non-positive gap margin; otherwise the PID tracks the target speed. Both
/// emergency branches reset the PID memory.
AccDecision acc_decide(const PerceivedInputs& in, const PidState& pid, const AccParams& params);

/// Stateful wrapper used by the scenario loop. With resume_after_flag=false the
/// first intrusion latches the emergency brake for the rest of the run.
class AccController {
 public:
  explicit AccController(AccParams params);

  AccDecision decide(PerceivedInputs in);

  [[nodiscard]] const PidState& pid() const noexcept { return pid_; }
  [[nodiscard]] bool latched() const noexcept { return latched_; }

 private:
  AccParams params_;
  PidState pid_;
  bool latched_ = false;
};

}  // namespace accsim
