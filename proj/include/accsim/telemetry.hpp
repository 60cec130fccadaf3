#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "accsim/scenario.hpp"

namespace accsim::telemetry {

inline constexpr std::string_view kTraceHeader =
    "tick,time_s,ego_speed_true_kmh,ego_speed_perceived_kmh,lead_speed_kmh,gap_m,ssd_m,margin_m,u,"
    "command_mode,intrusion_active,frames_injected,collision";

/// CSV: fixed header, floats with 6 decimals, booleans as 0/1.
void write_trace(const Trace& trace, std::ostream& out);
void write_trace(const Trace& trace, const std::filesystem::path& path);

/// Inverse of write_trace; values come back at the printed precision.
Trace parse_trace(std::string_view csv);
Trace read_trace(const std::filesystem::path& path);

/// JSON object with keys crashed, crash_count, first_crash_time_s (null when
/// there was no crash), min_gap_m, mean_ego_speed_kmh, ticks, in that order.
std::string summary_json(const RunSummary& summary);
void write_summary(const RunSummary& summary, const std::filesystem::path& path);

}  // namespace accsim::telemetry
