#include "accsim/telemetry.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace accsim::telemetry {

namespace {

std::string fixed6(double x) {
  char buf[64];
  // +0.0 folds negative zero so identical traces print identically.
  std::snprintf(buf, sizeof buf, "%.6f", x + 0.0);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view s, std::size_t line) {
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size())
    throw Error("trace line " + std::to_string(line) + ": bad number '" + tmp + "'");
  return v;
}

bool to_bool(std::string_view s, std::size_t line) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw Error("trace line " + std::to_string(line) + ": expected 0/1, got '" + std::string(s) + "'");
}

}  // namespace

void write_trace(const Trace& trace, std::ostream& out) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace) {
    out << r.tick << ',' << fixed6(r.time_s) << ',' << fixed6(r.ego_speed_true) << ','
        << fixed6(r.ego_speed_perceived) << ',' << fixed6(r.lead_speed) << ',' << fixed6(r.gap) << ','
        << fixed6(r.ssd) << ',' << fixed6(r.margin) << ',' << fixed6(r.u) << ',' << to_string(r.command_mode)
        << ',' << (r.intrusion_active ? 1 : 0) << ',' << r.frames_injected << ',' << (r.collision ? 1 : 0)
        << '\n';
  }
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_trace(trace, out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Trace parse_trace(std::string_view csv) {
  Trace trace;
  std::size_t line_no = 0;
  while (!csv.empty()) {
    ++line_no;
    const auto nl = csv.find('\n');
    std::string_view line = csv.substr(0, nl);
    csv = nl == std::string_view::npos ? std::string_view{} : csv.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kTraceHeader) throw Error("trace header mismatch");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13) throw Error("trace line " + std::to_string(line_no) + ": expected 13 fields");
    TraceRecord r;
    r.tick = static_cast<std::uint64_t>(to_double(f[0], line_no));
    r.time_s = to_double(f[1], line_no);
    r.ego_speed_true = to_double(f[2], line_no);
    r.ego_speed_perceived = to_double(f[3], line_no);
    r.lead_speed = to_double(f[4], line_no);
    r.gap = to_double(f[5], line_no);
    r.ssd = to_double(f[6], line_no);
    r.margin = to_double(f[7], line_no);
    r.u = to_double(f[8], line_no);
    if (f[9] == "normal")
      r.command_mode = CommandMode::normal;
    else if (f[9] == "emergency_brake")
      r.command_mode = CommandMode::emergency_brake;
    else
      throw Error("trace line " + std::to_string(line_no) + ": unknown command mode");
    r.intrusion_active = to_bool(f[10], line_no);
    r.frames_injected = static_cast<int>(to_double(f[11], line_no));
    r.collision = to_bool(f[12], line_no);
    trace.push_back(r);
  }
  if (line_no == 0) throw Error("empty trace file");
  return trace;
}

Trace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str());
}

std::string summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["crashed"] = s.crashed;
  j["crash_count"] = s.crash_count;
  j["first_crash_time_s"] = s.first_crash_time ? nlohmann::ordered_json(*s.first_crash_time) : nullptr;
  j["min_gap_m"] = s.min_gap;
  j["mean_ego_speed_kmh"] = s.mean_ego_speed;
  j["ticks"] = s.ticks;
  return j.dump(2) + "\n";
}

void write_summary(const RunSummary& summary, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << summary_json(summary);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace accsim::telemetry
