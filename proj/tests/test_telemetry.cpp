#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "accsim/presets.hpp"
#include "accsim/telemetry.hpp"

using namespace accsim;

namespace {

std::string to_csv(const Trace& t) {
  std::ostringstream out;
  telemetry::write_trace(t, out);
  return out.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Column values straight from CSV text, without going through parse_trace.
std::vector<std::string> column(const std::string& csv, std::size_t idx) {
  std::vector<std::string> out;
  const auto lines = lines_of(csv);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::string cell;
    for (std::size_t k = 0; k <= idx; ++k) std::getline(row, cell, ',');
    out.push_back(cell);
  }
  return out;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("accsim_telemetry_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(Trace, EmptyIsHeaderOnly) {
  EXPECT_EQ(to_csv({}), std::string(telemetry::kTraceHeader) + "\n");
}

TEST(Trace, OneTickIsTwoLines) {
  TraceRecord r;
  r.time_s = 0.05;
  const auto lines = lines_of(to_csv({r}));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1], "0,0.050000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,normal,0,0,0");
}

TEST(Trace, ExactHeader) {
  EXPECT_EQ(lines_of(to_csv({})).front(),
            "tick,time_s,ego_speed_true_kmh,ego_speed_perceived_kmh,lead_speed_kmh,gap_m,ssd_m,margin_m,u,"
            "command_mode,intrusion_active,frames_injected,collision");
}

TEST(Trace, SixtySecondsIs1200Rows) {
  const auto r = run(preset("scenario1"));
  const double expected = std::round(60.0 / 0.05);
  EXPECT_EQ(lines_of(to_csv(r.trace)).size(), static_cast<std::size_t>(expected) + 1);
}

TEST(Trace, NegativeZeroPrintsAsZero) {
  TraceRecord r;
  r.u = -0.0;
  r.margin = -1e-9;
  const auto lines = lines_of(to_csv({r}));
  EXPECT_EQ(lines[1].find("-0.000000"), std::string::npos);
}

TEST(Trace, RoundTripAtPrintedPrecision) {
  auto c = preset("scenario2-60");
  c.master_seed = 6;
  const auto r = run(c);
  const std::string csv = to_csv(r.trace);
  const Trace back = telemetry::parse_trace(csv);
  ASSERT_EQ(back.size(), r.trace.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const auto& a = r.trace[i];
    const auto& b = back[i];
    ASSERT_EQ(a.tick, b.tick);
    ASSERT_NEAR(a.gap, b.gap, 5e-7);
    ASSERT_NEAR(a.ego_speed_true, b.ego_speed_true, 5e-7);
    ASSERT_NEAR(a.u, b.u, 5e-7);
    ASSERT_EQ(a.command_mode, b.command_mode);
    ASSERT_EQ(a.collision, b.collision);
    ASSERT_EQ(a.frames_injected, b.frames_injected);
  }
  EXPECT_EQ(to_csv(back), csv);
}

TEST(Trace, ParseRejectsGarbage) {
  EXPECT_THROW(telemetry::parse_trace("not,a,header\n"), Error);
  EXPECT_THROW(telemetry::parse_trace(std::string(telemetry::kTraceHeader) + "\n1,2,3\n"), Error);
  EXPECT_THROW(telemetry::parse_trace(""), Error);
}

TEST(Trace, FileRoundTripAndIoErrors) {
  const auto dir = temp_dir("file");
  const auto r = run(preset("scenario1"));
  telemetry::write_trace(r.trace, dir / "trace.csv");
  EXPECT_EQ(to_csv(telemetry::read_trace(dir / "trace.csv")), to_csv(r.trace));
  EXPECT_THROW(telemetry::write_trace(r.trace, dir / "missing" / "trace.csv"), IoError);
  EXPECT_THROW(telemetry::read_trace(dir / "nope.csv"), IoError);
}

TEST(Summary, KeyOrderAndNullCrashTime) {
  const auto s = run(preset("scenario1")).summary;
  const auto j = nlohmann::ordered_json::parse(telemetry::summary_json(s));
  std::vector<std::string> keys;
  for (const auto& [k, _] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"crashed", "crash_count", "first_crash_time_s", "min_gap_m",
                                            "mean_ego_speed_kmh", "ticks"}));
  EXPECT_FALSE(j["crashed"].get<bool>());
  EXPECT_TRUE(j["first_crash_time_s"].is_null());
  EXPECT_EQ(j["ticks"].get<int>(), 1200);
}

TEST(Summary, RecomputedFromCsv) {
  for (const char* name : {"scenario1", "scenario2-90", "scenario3-60", "matrix-40-5"}) {
    auto c = preset(name);
    c.master_seed = 2;
    const auto r = run(c);
    const std::string csv = to_csv(r.trace);
    const auto j = nlohmann::json::parse(telemetry::summary_json(r.summary));

    const auto gaps = column(csv, 5);
    const auto speeds = column(csv, 2);
    const auto collisions = column(csv, 12);
    const auto times = column(csv, 1);
    double min_gap = 1e300, sum = 0.0;
    int crashes = 0;
    std::string first_time;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      min_gap = std::min(min_gap, std::stod(gaps[i]));
      sum += std::stod(speeds[i]);
      if (collisions[i] == "1" && crashes++ == 0) first_time = times[i];
    }
    EXPECT_EQ(j["ticks"].get<std::size_t>(), gaps.size()) << name;
    EXPECT_NEAR(j["min_gap_m"].get<double>(), min_gap, 5e-7) << name;
    EXPECT_NEAR(j["mean_ego_speed_kmh"].get<double>(), sum / gaps.size(), 1e-6) << name;
    EXPECT_EQ(j["crash_count"].get<int>(), crashes) << name;
    EXPECT_EQ(j["crashed"].get<bool>(), crashes > 0) << name;
    if (crashes) EXPECT_NEAR(j["first_crash_time_s"].get<double>(), std::stod(first_time), 5e-7) << name;
  }
}

TEST(Summary, PureFunctionOfTrace) {
  auto c = preset("scenario2-60");
  const auto r = run(c);
  EXPECT_EQ(summarize(r.trace), r.summary);
  const auto reparsed = summarize(telemetry::parse_trace(to_csv(r.trace)));
  EXPECT_EQ(reparsed.crash_count, r.summary.crash_count);
  EXPECT_EQ(reparsed.ticks, r.summary.ticks);
}

TEST(Summary, WritesFile) {
  const auto dir = temp_dir("summary");
  const auto s = run(preset("scenario1")).summary;
  telemetry::write_summary(s, dir / "summary.json");
  std::ifstream in(dir / "summary.json");
  std::ostringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), telemetry::summary_json(s));
}
