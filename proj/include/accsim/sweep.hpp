#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "accsim/scenario.hpp"

namespace accsim::sweep {

struct SweepPoint {
  double ego_speed = 0.0;    // km/h, also the lead's constant speed
  double spoof_speed = 0.0;  // km/h
  bool ids = false;
  std::uint64_t seed = 0;

  auto operator<=>(const SweepPoint&) const = default;
};

struct SweepRow {
  SweepPoint point;
  bool crashed = false;
  int crash_count = 0;
  double min_gap = 0.0;

  bool operator==(const SweepRow&) const = default;
};

/// Cartesian product ordered by (ego_speed, spoof_speed, ids, seed).
std::vector<SweepPoint> make_grid(std::span<const double> ego_speeds, std::span<const double> spoof_speeds,
                                  std::span<const bool> ids_modes, std::span<const std::uint64_t> seeds);

/// Config used for one sweep point (the spoofing presets' parameters).
ScenarioConfig point_config(const SweepPoint& point);

/// Reference implementation: one run after another.
std::vector<SweepRow> run_serial(std::span<const SweepPoint> points);

/// Same rows as run_serial, with runs distributed over OpenMP threads. Each
/// run owns its world; results land at their input index.
std::vector<SweepRow> run_parallel(std::span<const SweepPoint> points);

/// CSV with header ego_speed_kmh,spoof_speed_kmh,ids,seed,crashed,min_gap_m.
void write_csv(std::span<const SweepRow> rows, std::ostream& out);

}  // namespace accsim::sweep
