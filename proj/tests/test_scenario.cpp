#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "accsim/presets.hpp"
#include "accsim/scenario.hpp"

using namespace accsim;

namespace {

const std::string kFixture = std::string(ACCSIM_FIXTURE_DIR) + "/lead_ramp.log";

int recount_crossings(const Trace& trace, double initial_gap) {
  int n = 0;
  double prev = initial_gap;
  for (const auto& r : trace) {
    if (prev > 0.0 && r.gap <= 0.0) ++n;
    prev = r.gap;
  }
  return n;
}

Trace without_intrusion_column(Trace t) {
  for (auto& r : t) r.intrusion_active = false;
  return t;
}

}  // namespace

TEST(LeadSpeed, Constant) {
  for (double t : {0.0, 1.0, 59.95, 1e6}) EXPECT_EQ(lead_speed(ConstantProfile{90.0}, t), 90.0);
}

TEST(LeadSpeed, Trapezoid) {
  const TrapezoidProfile p{30.0, 10.0, 10.0, 10.0};
  EXPECT_EQ(lead_speed(p, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(lead_speed(p, 5.0), 15.0);
  EXPECT_EQ(lead_speed(p, 10.0), 30.0);
  EXPECT_EQ(lead_speed(p, 15.0), 30.0);
  EXPECT_DOUBLE_EQ(lead_speed(p, 25.0), 15.0);
  EXPECT_EQ(lead_speed(p, 35.0), 0.0);
}

TEST(LeadSpeed, Replay) {
  LeadProfile p = ReplayProfile{kFixture, 0x0C0, {}};
  load_replay(p);
  const auto& r = std::get<ReplayProfile>(p);
  EXPECT_EQ(r.samples.size(), 47u);
  EXPECT_EQ(r.samples.front().time, 0.0);
  EXPECT_EQ(lead_speed(p, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(lead_speed(p, 0.75), 15.0);
  EXPECT_DOUBLE_EQ(lead_speed(p, 0.77), 15.0);  // held until the next frame
  EXPECT_DOUBLE_EQ(lead_speed(p, 10.0), 30.0);
}

TEST(LeadSpeed, ReplayMissingFile) {
  LeadProfile p = ReplayProfile{"/nonexistent/lead.log", 0x0C0, {}};
  EXPECT_THROW(load_replay(p), IoError);
}

TEST(Presets, Catalog) {
  const auto& cat = preset_catalog();
  ASSERT_EQ(cat.size(), 7u);
  for (const auto& e : cat) EXPECT_NO_THROW(preset(e.name).validate()) << e.name;
  EXPECT_THROW(preset("scenario4"), ConfigError);
}

TEST(Presets, Contents) {
  const auto s2 = preset("scenario2-60");
  EXPECT_EQ(s2.ego_target_speed, 60.0);
  EXPECT_EQ(std::get<ConstantProfile>(s2.lead_profile).speed, 60.0);
  EXPECT_TRUE(s2.attack.enabled);
  EXPECT_EQ(s2.attack.spoofed_speed, 10.0);
  EXPECT_EQ(s2.attack.injection_probability, 0.75);
  EXPECT_FALSE(s2.ids.has_value());

  const auto s1 = preset("scenario1");
  EXPECT_EQ(s1.ego_target_speed, 25.0);
  EXPECT_TRUE(std::holds_alternative<TrapezoidProfile>(s1.lead_profile));
  EXPECT_FALSE(s1.attack.enabled);

  const auto m = preset("matrix-40-5");
  EXPECT_EQ(m.ego_target_speed, 40.0);
  EXPECT_EQ(std::get<ConstantProfile>(m.lead_profile).speed, 40.0);
  EXPECT_EQ(m.attack.spoofed_speed, 5.0);

  const auto s3 = preset("scenario3-90");
  ASSERT_TRUE(s3.ids.has_value());
  EXPECT_EQ(s3.ids->detection_rate, 0.97);
  EXPECT_EQ(s3.ids->response_time, 1.026);
}

TEST(Run, ScenarioOutcomesAtSeedZero) {
  EXPECT_FALSE(run(preset("scenario1")).summary.crashed);
  EXPECT_TRUE(run(preset("scenario2-90")).summary.crashed);
  const auto s3 = run(preset("scenario3-90")).summary;
  EXPECT_FALSE(s3.crashed);
  EXPECT_GT(s3.min_gap, 0.0);
}

TEST(Run, TickCountAndTiming) {
  const auto r = run(preset("scenario1"));
  ASSERT_EQ(r.trace.size(), 1200u);
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    ASSERT_EQ(r.trace[i].tick, i);
    ASSERT_EQ(r.trace[i].time_s, static_cast<double>(i + 1) * 0.05);
  }
}

TEST(Run, Deterministic) {
  for (const auto& e : preset_catalog()) {
    auto c = preset(e.name);
    c.master_seed = 31;
    const auto a = run(c), b = run(c);
    EXPECT_EQ(a.trace, b.trace) << e.name;
    EXPECT_EQ(a.summary, b.summary) << e.name;
  }
}

TEST(Run, CrashCountMatchesRecount) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (const char* name : {"scenario2-60", "scenario2-90", "matrix-40-5"}) {
      auto c = preset(name);
      c.master_seed = seed;
      const auto r = run(c);
      EXPECT_EQ(r.summary.crash_count, recount_crossings(r.trace, c.initial_gap)) << name << " " << seed;
    }
  }
}

TEST(Run, StopOnCrashEndsAtFirstCollision) {
  auto c = preset("scenario2-90");
  c.master_seed = 4;
  const auto full = run(c);
  ASSERT_TRUE(full.summary.crashed);
  c.stop_on_crash = true;
  const auto cut = run(c);
  ASSERT_FALSE(cut.trace.empty());
  EXPECT_TRUE(cut.trace.back().collision);
  EXPECT_EQ(cut.summary.crash_count, 1);
  EXPECT_EQ(cut.summary.first_crash_time, full.summary.first_crash_time);
  for (std::size_t i = 0; i < cut.trace.size(); ++i) EXPECT_EQ(cut.trace[i], full.trace[i]);
}

TEST(Run, PostCollisionGapIsClamped) {
  auto c = preset("scenario2-90");
  const auto r = run(c);
  // starting from contact, the ego can overrun by at most one tick of its own travel
  const double dt = c.dt;
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    if (r.trace[i - 1].gap > 0.0) continue;
    const double v = r.trace[i - 1].ego_speed_true / 3.6;
    ASSERT_GE(r.trace[i].gap, -(v * dt + 0.5 * c.limits.a_max * dt * dt) - 1e-9) << i;
  }
}

TEST(Run, NullAttackIdsEquivalence) {
  for (const char* name : {"scenario1", "scenario3-60", "scenario3-90"}) {
    auto off = preset(name);
    off.attack.enabled = false;
    off.ids.reset();
    auto on = off;
    on.ids = IdsConfig{};
    const auto a = run(off), b = run(on);
    EXPECT_EQ(without_intrusion_column(a.trace), without_intrusion_column(b.trace)) << name;
    for (const auto& r : b.trace) ASSERT_FALSE(r.intrusion_active);
  }
}

TEST(Run, ZeroProbabilityEqualsDisabled) {
  for (std::uint64_t seed : {0ull, 5ull}) {
    auto c = preset("scenario2-60");
    c.master_seed = seed;
    c.attack.injection_probability = 0.0;
    auto d = c;
    d.attack.enabled = false;
    EXPECT_EQ(run(c).trace, run(d).trace);
  }
}

TEST(Run, NoAttackSafety) {
  for (const auto& e : preset_catalog()) {
    auto c = preset(e.name);
    c.attack.enabled = false;
    const bool constant_lead = std::holds_alternative<ConstantProfile>(c.lead_profile);
    if (constant_lead && c.ego_target_speed > std::get<ConstantProfile>(c.lead_profile).speed) continue;
    EXPECT_FALSE(run(c).summary.crashed) << e.name;
  }
  for (double target : {20.0, 40.0, 60.0, 90.0, 120.0}) {
    for (double lead : {target, target + 10.0}) {
      ScenarioConfig c;
      c.ego_target_speed = target;
      c.lead_profile = ConstantProfile{lead};
      c.duration = 30.0;
      EXPECT_FALSE(run(c).summary.crashed) << target << " " << lead;
    }
  }
}

TEST(Run, IdsSeedDoesNotChangeInjections) {
  auto c = preset("scenario3-60");
  c.master_seed = 8;
  auto d = c;
  d.ids->seed = 123456789;
  const auto a = run(c), b = run(d);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) ASSERT_EQ(a.trace[i].frames_injected, b.trace[i].frames_injected);
}

TEST(Run, SeedStreamsAreSeparate) {
  auto c = preset("scenario3-60");
  c.master_seed = 8;
  auto d = c;
  d.attack.seed = 99;
  EXPECT_EQ(c.ids_seed(), d.ids_seed());
  EXPECT_NE(c.attack_seed(), d.attack_seed());
  EXPECT_NE(c.attack_seed(), c.ids_seed());
  // same frame sequence into both detectors gives identical verdicts
  IdsSim x(*c.ids, c.ids_seed()), y(*d.ids, d.ids_seed());
  for (int i = 0; i < 2000; ++i) {
    const can::CanFrame f(i * 0.05, 0x0C0, can::encode_speed(SpeedKmh{10.0}),
                          i % 3 ? can::Provenance::spoofed : can::Provenance::authentic);
    ASSERT_EQ(x.observe(f).flagged, y.observe(f).flagged);
  }
}

TEST(Run, InjectionsOnlyWhenEnabledAndCounted) {
  auto c = preset("scenario2-60");
  c.master_seed = 2;
  const auto r = run(c);
  int injected = 0;
  for (const auto& rec : r.trace) {
    ASSERT_TRUE(rec.frames_injected == 0 || rec.frames_injected == 1);
    injected += rec.frames_injected;
  }
  EXPECT_GT(injected, 1200 * 0.75 - 5 * std::sqrt(1200 * 0.75 * 0.25));
  EXPECT_LT(injected, 1200 * 0.75 + 5 * std::sqrt(1200 * 0.75 * 0.25));
}

TEST(Run, PerceivedSpeedIsSpoofedOrTrue) {
  auto c = preset("scenario2-60");
  const auto r = run(c);
  double prev_true = c.ego_initial_speed;
  for (const auto& rec : r.trace) {
    if (rec.frames_injected) ASSERT_EQ(rec.ego_speed_perceived, 10.0);
    else ASSERT_NEAR(rec.ego_speed_perceived, prev_true, 0.005 + 1e-9);
    prev_true = rec.ego_speed_true;
  }
}

TEST(Run, IdsTriggersEmergencyBrake) {
  auto c = preset("scenario3-60");
  const auto r = run(c);
  bool seen = false;
  for (const auto& rec : r.trace) {
    if (rec.intrusion_active) {
      seen = true;
      ASSERT_EQ(rec.command_mode, CommandMode::emergency_brake);
    }
  }
  EXPECT_TRUE(seen);
  // the first flag can only appear a response time after the first injection
  for (const auto& rec : r.trace) {
    if (rec.intrusion_active) {
      EXPECT_GE(rec.time_s - 0.05, 1.026 - 1e-9);
      break;
    }
  }
}

TEST(Run, ReplayLeadFromLog) {
  ScenarioConfig c;
  c.ego_target_speed = 25.0;
  c.lead_profile = ReplayProfile{kFixture, 0x0C0, {}};
  c.duration = 20.0;
  const auto r = run(c);
  EXPECT_FALSE(r.summary.crashed);
  EXPECT_NEAR(r.trace.back().lead_speed, 30.0, 1e-9);
}

TEST(Config, Validation) {
  ScenarioConfig c;
  EXPECT_NO_THROW(c.validate());
  c.pid_gains.dt = 0.1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = ScenarioConfig{};
  c.initial_gap = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = ScenarioConfig{};
  c.bus.speed_period = 0.07;
  EXPECT_THROW(c.validate(), ConfigError);
  c = ScenarioConfig{};
  c.lead_profile = TrapezoidProfile{-1.0, 1.0, 1.0, 1.0};
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, TickCount) {
  ScenarioConfig c;
  EXPECT_EQ(c.tick_count(), 1200u);
  c.duration = 0.3;
  EXPECT_EQ(c.tick_count(), 6u);
  c.duration = 0.05;
  EXPECT_EQ(c.tick_count(), 1u);
}
