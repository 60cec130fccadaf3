#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "accsim/attacker.hpp"
#include "accsim/canbus.hpp"
#include "accsim/controller.hpp"
#include "accsim/dynamics.hpp"
#include "accsim/ids.hpp"

namespace accsim {

struct ConstantProfile {
  double speed = 0.0;  // km/h
};

/// 0 -> v_peak over ramp_up, hold, back to 0 over ramp_down, then 0.
struct TrapezoidProfile {
  double v_peak = 30.0;  // km/h
  double ramp_up = 10.0;
  double hold = 10.0;
  double ramp_down = 10.0;
};

struct ReplaySample {
  double time = 0.0;   // s since the first line of the log
  double speed = 0.0;  // km/h
};

/// Lead speed taken from the speed frames of a candump log. Timestamps are
/// rebased so the first line of the log is t = 0.
struct ReplayProfile {
  std::filesystem::path path;
  std::uint16_t speed_frame_id = 0x0C0;
  std::vector<ReplaySample> samples;  // filled by load_replay()
};

using LeadProfile = std::variant<ConstantProfile, TrapezoidProfile, ReplayProfile>;

/// Reads the log behind a replay profile (no-op for the other kinds).
/// Throws IoError / can::ParseError.
void load_replay(LeadProfile& profile);
/// Builds replay samples from already-parsed entries.
std::vector<ReplaySample> replay_samples(std::span<const can::CandumpEntry> entries, std::uint16_t speed_id);

/// Lead speed in km/h at `now`. Replay profiles must be loaded.
double lead_speed(const LeadProfile& profile, double now);

void validate(const LeadProfile& profile);

struct ScenarioConfig {
  double ego_target_speed = 60.0;   // km/h
  double ego_initial_speed = 0.0;   // km/h
  LeadProfile lead_profile = ConstantProfile{60.0};
  double initial_gap = 30.0;  // m
  double duration = 60.0;     // s
  double dt = 0.05;           // s
  AttackConfig attack;
  std::optional<IdsConfig> ids;
  SsdParams ssd_params;
  PidGains pid_gains;
  /// Carried for completeness; the road is straight so it is never used.
  PidGains lateral_pid_gains{1.98, 0.07, 0.20, 0.05};
  double u_scale = 60.0;
  bool resume_after_flag = true;
  ActuationLimits limits;
  can::BusSchedule bus;
  bool stop_on_crash = false;
  std::uint64_t master_seed = 0;

  void validate() const;
  [[nodiscard]] std::uint64_t tick_count() const;
  [[nodiscard]] std::uint64_t attack_seed() const;
  [[nodiscard]] std::uint64_t ids_seed() const;
  [[nodiscard]] AccParams acc_params() const;
};

/// One row per tick. Physical quantities are taken at the end of the tick
/// (time_s = (tick + 1) * dt); perceived speed, ssd, margin, u and the mode are
/// what the controller used during the tick.
struct TraceRecord {
  std::uint64_t tick = 0;
  double time_s = 0.0;
  double ego_speed_true = 0.0;       // km/h
  double ego_speed_perceived = 0.0;  // km/h
  double lead_speed = 0.0;           // km/h
  double gap = 0.0;                  // m, before contact clamping
  double ssd = 0.0;                  // m
  double margin = 0.0;               // m
  double u = 0.0;
  CommandMode command_mode = CommandMode::normal;
  bool intrusion_active = false;
  int frames_injected = 0;
  bool collision = false;

  bool operator==(const TraceRecord&) const = default;
};

using Trace = std::vector<TraceRecord>;

struct RunSummary {
  bool crashed = false;
  int crash_count = 0;
  std::optional<double> first_crash_time;
  double min_gap = 0.0;
  double mean_ego_speed = 0.0;
  std::uint64_t ticks = 0;

  bool operator==(const RunSummary&) const = default;
};

/// Pure function of the trace.
RunSummary summarize(const Trace& trace);

struct RunResult {
  Trace trace;
  RunSummary summary;
};

/// Runs one closed-loop experiment. Per tick, in order: lead step, sensor
/// broadcast, injection, IDS classify + poll, controller, ego step, collision
/// check, trace append.
RunResult run(ScenarioConfig config);

}  // namespace accsim
