#include "accsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "accsim/rng.hpp"

namespace accsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double trapezoid_speed(const TrapezoidProfile& p, double t) {
  if (t < p.ramp_up) return p.ramp_up > 0.0 ? p.v_peak * t / p.ramp_up : p.v_peak;
  t -= p.ramp_up;
  if (t < p.hold) return p.v_peak;
  t -= p.hold;
  if (t < p.ramp_down) return p.v_peak * (1.0 - t / p.ramp_down);
  return 0.0;
}

double replay_speed(const ReplayProfile& p, double t) {
  // Most recent sample at or before t; 0 before the first one.
  auto it = std::upper_bound(p.samples.begin(), p.samples.end(), t + 1e-9,
                             [](double x, const ReplaySample& s) { return x < s.time; });
  if (it == p.samples.begin()) return 0.0;
  return std::prev(it)->speed;
}

}  // namespace

std::vector<ReplaySample> replay_samples(std::span<const can::CandumpEntry> entries, std::uint16_t speed_id) {
  std::vector<ReplaySample> out;
  if (entries.empty()) return out;
  const double t0 = entries.front().frame.timestamp();
  for (const auto& e : entries) {
    if (e.frame.can_id() != speed_id) continue;
    const double t = e.frame.timestamp() - t0;
    if (!out.empty() && t < out.back().time) throw ConfigError("replay log timestamps go backwards");
    out.push_back({t, can::decode_speed(e.frame, speed_id).value});
  }
  return out;
}

void load_replay(LeadProfile& profile) {
  if (auto* r = std::get_if<ReplayProfile>(&profile)) {
    const auto entries = can::read_candump(r->path);
    r->samples = replay_samples(entries, r->speed_frame_id);
  }
}

double lead_speed(const LeadProfile& profile, double now) {
  if (now < 0.0) throw ConfigError("time must be non-negative");
  return std::visit(overloaded{
                        [](const ConstantProfile& c) { return c.speed; },
                        [&](const TrapezoidProfile& t) { return trapezoid_speed(t, now); },
                        [&](const ReplayProfile& r) { return replay_speed(r, now); },
                    },
                    profile);
}

void validate(const LeadProfile& profile) {
  std::visit(overloaded{
                 [](const ConstantProfile& c) {
                   require_finite(c.speed, "lead_profile.speed");
                   if (c.speed < 0.0) throw ConfigError("lead_profile.speed must be >= 0");
                 },
                 [](const TrapezoidProfile& t) {
                   for (double v : {t.v_peak, t.ramp_up, t.hold, t.ramp_down}) {
                     require_finite(v, "lead_profile");
                     if (v < 0.0) throw ConfigError("trapezoid speeds and durations must be >= 0");
                   }
                 },
                 [](const ReplayProfile& r) {
                   if (r.speed_frame_id > can::kMaxStandardId)
                     throw ConfigError("lead_profile.speed_frame_id exceeds 11 bits");
                 },
             },
             profile);
}

void ScenarioConfig::validate() const {
  for (double v : {ego_target_speed, ego_initial_speed, initial_gap, duration, dt, u_scale})
    require_finite(v, "scenario parameter");
  if (ego_target_speed < 0.0) throw ConfigError("ego_target_speed must be >= 0");
  if (ego_initial_speed < 0.0) throw ConfigError("ego_initial_speed must be >= 0");
  if (initial_gap <= 0.0) throw ConfigError("initial_gap must be > 0");
  if (duration <= 0.0) throw ConfigError("duration must be > 0");
  if (dt <= 0.0) throw ConfigError("dt must be > 0");
  if (std::abs(pid_gains.dt - dt) > 1e-12) throw ConfigError("pid_gains.dt must equal dt");
  accsim::validate(lead_profile);
  attack.validate();
  if (ids) ids->validate();
  acc_params().validate();
  lateral_pid_gains.validate();
  limits.validate();
  bus.validate(dt);
}

std::uint64_t ScenarioConfig::tick_count() const {
  return static_cast<std::uint64_t>(std::floor(duration / dt + 1e-9));
}

std::uint64_t ScenarioConfig::attack_seed() const {
  return attack.seed.value_or(rng::derive_seed(master_seed, rng::kAttackStream));
}

std::uint64_t ScenarioConfig::ids_seed() const {
  const std::optional<std::uint64_t> explicit_seed = ids ? ids->seed : std::nullopt;
  return explicit_seed.value_or(rng::derive_seed(master_seed, rng::kIdsStream));
}

AccParams ScenarioConfig::acc_params() const {
  return AccParams{pid_gains, ssd_params, u_scale, resume_after_flag};
}

RunSummary summarize(const Trace& trace) {
  RunSummary s;
  s.ticks = trace.size();
  if (trace.empty()) return s;
  s.min_gap = std::numeric_limits<double>::infinity();
  double speed_sum = 0.0;
  for (const auto& r : trace) {
    s.min_gap = std::min(s.min_gap, r.gap);
    speed_sum += r.ego_speed_true;
    if (r.collision) {
      if (s.crash_count == 0) s.first_crash_time = r.time_s;
      ++s.crash_count;
    }
  }
  s.crashed = s.crash_count > 0;
  s.mean_ego_speed = speed_sum / static_cast<double>(trace.size());
  return s;
}

RunResult run(ScenarioConfig config) {
  config.validate();
  load_replay(config.lead_profile);

  const double dt = config.dt;
  const double offset = config.initial_gap;
  const std::uint64_t speed_every = SimClock(dt).ticks_per(config.bus.speed_period);

  Attacker attacker(config.attack, config.bus.speed_frame_id, config.attack_seed());
  std::optional<IdsSim> ids;
  if (config.ids) ids.emplace(*config.ids, config.ids_seed());
  AccController controller(config.acc_params());

  VehicleState ego{0.0, kmh_to_mps(SpeedKmh{config.ego_initial_speed}).value, 0.0};
  VehicleState lead{0.0, kmh_to_mps(SpeedKmh{lead_speed(config.lead_profile, 0.0)}).value, 0.0};

  // Values the controller holds when no fresh frame arrives in a tick.
  double perceived_speed = 0.0;
  double perceived_gap = 0.0;
  double prev_gap = offset;

  const std::uint64_t ticks = config.tick_count();
  RunResult result;
  result.trace.reserve(ticks);
  can::BusTickLog bus;

  for (SimClock clock(dt); clock.tick() < ticks; clock.advance()) {
    const double now = clock.now();
    const double next = clock.time_at(clock.tick() + 1);
    const SpeedKmh sensed_speed = mps_to_kmh(SpeedMps{ego.speed});
    const double sensed_gap = gap(ego, lead, offset);

    // (1) lead follows its profile exactly
    VehicleState lead_next;
    lead_next.speed = kmh_to_mps(SpeedKmh{lead_speed(config.lead_profile, next)}).value;
    lead_next.position = lead.position + 0.5 * (lead.speed + lead_next.speed) * dt;
    lead_next.last_accel = (lead_next.speed - lead.speed) / dt;

    // (2) authentic sensor frames
    bus.clear();
    for (auto& f : can::broadcast(clock, sensed_speed, sensed_gap, config.bus)) bus.push(std::move(f));

    // (3) injection, once per speed-sensor period
    int injected = 0;
    if (clock.tick() % speed_every == 0) {
      if (auto spoofed = attacker.maybe_inject(now)) {
        bus.push(std::move(*spoofed));
        ++injected;
      }
    }
    bus.finalize();

    // (4) IDS sees every frame
    bool intrusion = false;
    if (ids) {
      for (const auto& f : bus.frames()) ids->observe(f);
      intrusion = ids->poll(now);
    }

    // (5) controller reads the latest frames
    if (const auto* f = bus.latest(config.bus.speed_frame_id))
      perceived_speed = can::decode_speed(*f, config.bus.speed_frame_id).value;
    if (const auto* f = bus.latest(config.bus.distance_frame_id))
      perceived_gap = can::decode_distance(*f, config.bus.distance_frame_id);
    const AccDecision decision = controller.decide(
        PerceivedInputs{perceived_speed, config.ego_target_speed, perceived_gap, intrusion});

    // (6) ego dynamics
    ego = step(ego, decision.command, config.limits, dt);
    lead = lead_next;

    // (7) collision: a crossing from positive gap to contact
    const double g = gap(ego, lead, offset);
    const bool collision = prev_gap > 0.0 && g <= 0.0;
    prev_gap = g;
    if (g < 0.0) ego.position = lead.position + offset;

    // (8) trace
    TraceRecord rec;
    rec.tick = clock.tick();
    rec.time_s = next;
    rec.ego_speed_true = mps_to_kmh(SpeedMps{ego.speed}).value;
    rec.ego_speed_perceived = perceived_speed;
    rec.lead_speed = mps_to_kmh(SpeedMps{lead.speed}).value;
    rec.gap = g;
    rec.ssd = decision.ssd;
    rec.margin = decision.margin;
    rec.u = decision.command.u;
    rec.command_mode = decision.command.mode;
    rec.intrusion_active = intrusion;
    rec.frames_injected = injected;
    rec.collision = collision;
    result.trace.push_back(rec);

    if (collision && config.stop_on_crash) break;
  }

  result.summary = summarize(result.trace);
  return result;
}

}  // namespace accsim
