#include "accsim/controller.hpp"

#include <algorithm>
#include <cmath>

namespace accsim {

void SsdParams::validate() const {
  require_finite(t_reaction, "ssd_params.t_reaction");
  require_finite(f, "ssd_params.f");
  require_finite(g, "ssd_params.g");
  if (t_reaction < 0.0) throw ConfigError("ssd_params.t_reaction must be >= 0");
  if (f + g <= 0.0) throw ConfigError("ssd_params.f + ssd_params.g must be > 0");
}

double ssd(SpeedKmh v, const SsdParams& p) {
  require_finite(v.value, "speed");
  if (v.value < 0.0) throw ConfigError("speed must be non-negative");
  if (p.f + p.g <= 0.0) throw ConfigError("ssd_params.f + ssd_params.g must be > 0");
  return 0.278 * p.t_reaction * v.value + (v.value * v.value) / (254.0 * (p.f + p.g));
}

void PidGains::validate() const {
  require_finite(kp, "pid_gains.kp");
  require_finite(ki, "pid_gains.ki");
  require_finite(kd, "pid_gains.kd");
  require_finite(dt, "pid_gains.dt");
  if (dt <= 0.0) throw ConfigError("pid_gains.dt must be > 0");
}

PidOutput pid_step(const PidState& state, const PidGains& gains, double target_kmh, double current_kmh,
                   double u_scale) {
  require_finite(target_kmh, "pid target");
  require_finite(current_kmh, "pid measurement");
  if (gains.dt <= 0.0) throw ConfigError("pid_gains.dt must be > 0");

  const double e = target_kmh - current_kmh;
  double integral = state.integral + e * gains.dt;
  if (gains.ki != 0.0) {
    const double bound = u_scale / std::abs(gains.ki);
    integral = std::clamp(integral, -bound, bound);
  }
  const double derivative = state.primed ? (e - state.prev_error) / gains.dt : 0.0;

  PidOutput out;
  out.raw = gains.kp * e + gains.ki * integral + gains.kd * derivative;
  out.u = std::clamp(out.raw / u_scale, -1.0, 1.0);
  out.state = PidState{integral, e, true};
  return out;
}

void AccParams::validate() const {
  gains.validate();
  ssd.validate();
  require_finite(u_scale, "u_scale");
  if (u_scale <= 0.0) throw ConfigError("u_scale must be > 0");
}

AccDecision acc_decide(const PerceivedInputs& in, const PidState& pid, const AccParams& params) {
  if (in.target_speed < 0.0) throw ConfigError("target speed must be non-negative");

  AccDecision d;
  d.ssd = ssd(SpeedKmh{std::max(0.0, in.current_speed)}, params.ssd);
  d.margin = gap_margin(in.current_gap, d.ssd);

  if (in.intrusion_active) {
    d.command = ControlCommand::emergency();
    d.cause = BrakeCause::intrusion;
    return d;
  }
  if (d.margin <= 0.0) {
    d.command = ControlCommand::emergency();
    d.cause = BrakeCause::safe_distance;
    return d;
  }
  const PidOutput out = pid_step(pid, params.gains, in.target_speed, in.current_speed, params.u_scale);
  d.command = ControlCommand::normal(out.u);
  d.pid = out.state;
  d.raw = out.raw;
  return d;
}

AccController::AccController(AccParams params) : params_(params) { params_.validate(); }

AccDecision AccController::decide(PerceivedInputs in) {
  if (in.intrusion_active && !params_.resume_after_flag) latched_ = true;
  in.intrusion_active = in.intrusion_active || latched_;
  AccDecision d = acc_decide(in, pid_, params_);
  pid_ = d.pid;
  return d;
}

}  // namespace accsim
