#include "accsim/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <ostream>

#include "accsim/presets.hpp"

namespace accsim::sweep {

namespace {

SweepRow run_point(const SweepPoint& p) {
  const RunResult r = run(point_config(p));
  return SweepRow{p, r.summary.crashed, r.summary.crash_count, r.summary.min_gap};
}

}  // namespace

std::vector<SweepPoint> make_grid(std::span<const double> ego_speeds, std::span<const double> spoof_speeds,
                                  std::span<const bool> ids_modes, std::span<const std::uint64_t> seeds) {
  std::vector<SweepPoint> grid;
  grid.reserve(ego_speeds.size() * spoof_speeds.size() * ids_modes.size() * seeds.size());
  for (double ego : ego_speeds)
    for (double spoof : spoof_speeds)
      for (bool ids : ids_modes)
        for (std::uint64_t seed : seeds) grid.push_back({ego, spoof, ids, seed});
  std::ranges::sort(grid);
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

ScenarioConfig point_config(const SweepPoint& p) {
  return spoofing_config(p.ego_speed, p.spoof_speed, p.ids, p.seed);
}

std::vector<SweepRow> run_serial(std::span<const SweepPoint> points) {
  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (const auto& p : points) rows.push_back(run_point(p));
  return rows;
}

std::vector<SweepRow> run_parallel(std::span<const SweepPoint> points) {
  std::vector<SweepRow> rows(points.size());
  std::exception_ptr error;
  const auto n = static_cast<std::ptrdiff_t>(points.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = run_point(points[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(accsim_sweep_error)
      if (!error) error = std::current_exception();
    }
  }

  if (error) std::rethrow_exception(error);
  return rows;
}

void write_csv(std::span<const SweepRow> rows, std::ostream& out) {
  out << "ego_speed_kmh,spoof_speed_kmh,ids,seed,crashed,min_gap_m\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%g,%g,%s,%llu,%d,%.6f\n", r.point.ego_speed, r.point.spoof_speed,
                  r.point.ids ? "on" : "off", static_cast<unsigned long long>(r.point.seed), r.crashed ? 1 : 0,
                  r.min_gap + 0.0);
    out << buf;
  }
}

}  // namespace accsim::sweep
