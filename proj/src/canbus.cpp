#include "accsim/canbus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace accsim::can {

ParseError::ParseError(const std::string& msg, std::size_t line)
    : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}

CanFrame::CanFrame(double timestamp, std::uint16_t can_id, std::span<const std::uint8_t> payload,
                   Provenance provenance)
    : timestamp_(timestamp), can_id_(can_id), dlc_(payload.size()), provenance_(provenance) {
  if (can_id > kMaxStandardId) throw MalformedFrame("CAN id exceeds 11 bits");
  if (payload.size() > kMaxDlc) throw MalformedFrame("payload longer than 8 bytes");
  std::copy(payload.begin(), payload.end(), data_.begin());
}

bool operator==(const CanFrame& a, const CanFrame& b) noexcept {
  return a.timestamp_ == b.timestamp_ && a.can_id_ == b.can_id_ && a.provenance_ == b.provenance_ &&
         std::ranges::equal(a.data(), b.data());
}

void BusSchedule::validate(double dt) const {
  if (speed_frame_id > kMaxStandardId || distance_frame_id > kMaxStandardId)
    throw ConfigError("bus frame ids must fit in 11 bits");
  if (speed_frame_id == distance_frame_id) throw ConfigError("speed and distance frame ids must differ");
  const SimClock clock(dt);
  (void)clock.ticks_per(speed_period);
  (void)clock.ticks_per(distance_period);
}

namespace {

std::array<std::uint8_t, 2> encode_centi(double x, const char* what) {
  if (!std::isfinite(x) || x < 0.0 || x > kMaxEncodable)
    throw ConfigError(std::string(what) + " out of encodable range [0, 655.35]");
  const auto raw = static_cast<std::uint16_t>(std::lround(x * 100.0));
  return {static_cast<std::uint8_t>(raw & 0xFF), static_cast<std::uint8_t>(raw >> 8)};
}

double decode_centi(const CanFrame& f, std::uint16_t expected_id) {
  if (f.can_id() != expected_id) throw MalformedFrame("unexpected CAN id");
  if (f.dlc() < 2) throw MalformedFrame("payload shorter than 2 bytes");
  const auto d = f.data();
  const unsigned raw = static_cast<unsigned>(d[0]) | (static_cast<unsigned>(d[1]) << 8);
  return raw / 100.0;
}

double saturate(double x) { return std::clamp(x, 0.0, kMaxEncodable); }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

}  // namespace

std::array<std::uint8_t, 2> encode_speed(SpeedKmh s) { return encode_centi(s.value, "speed"); }
std::array<std::uint8_t, 2> encode_distance(double meters) { return encode_centi(meters, "distance"); }

SpeedKmh decode_speed(const CanFrame& f, std::uint16_t expected_id) {
  return SpeedKmh{decode_centi(f, expected_id)};
}
double decode_distance(const CanFrame& f, std::uint16_t expected_id) { return decode_centi(f, expected_id); }

double quantize_centi(double x) { return static_cast<double>(std::lround(x * 100.0)) / 100.0; }

std::vector<CanFrame> broadcast(const SimClock& clock, SpeedKmh true_speed, double true_gap,
                                const BusSchedule& schedule) {
  std::vector<CanFrame> out;
  const double now = clock.now();
  if (clock.tick() % clock.ticks_per(schedule.speed_period) == 0) {
    const auto payload = encode_speed(SpeedKmh{saturate(true_speed.value)});
    out.emplace_back(now, schedule.speed_frame_id, payload);
  }
  if (clock.tick() % clock.ticks_per(schedule.distance_period) == 0) {
    const auto payload = encode_distance(saturate(true_gap));
    out.emplace_back(now, schedule.distance_frame_id, payload);
  }
  return out;
}

void BusTickLog::push(CanFrame frame) { frames_.push_back(std::move(frame)); }

void BusTickLog::finalize() {
  std::ranges::stable_sort(frames_, {}, &CanFrame::timestamp);
}

const CanFrame* BusTickLog::latest(std::uint16_t can_id) const noexcept {
  for (auto it = frames_.rbegin(); it != frames_.rend(); ++it)
    if (it->can_id() == can_id) return &*it;
  return nullptr;
}

CandumpEntry parse_candump_line(std::string_view raw, std::size_t line_number) {
  const std::string_view line = trim(raw);
  auto fail = [&](const std::string& why) -> ParseError { return ParseError(why, line_number); };

  if (line.empty() || line.front() != '(') throw fail("expected '(' timestamp");
  const auto close = line.find(')');
  if (close == std::string_view::npos) throw fail("unterminated timestamp");
  const std::string ts_text(line.substr(1, close - 1));
  if (ts_text.empty() || ts_text.find_first_not_of("0123456789.") != std::string::npos)
    throw fail("bad timestamp '" + ts_text + "'");
  const double timestamp = std::strtod(ts_text.c_str(), nullptr);

  const std::string_view rest = trim(line.substr(close + 1));
  const auto space = rest.find_first_of(" \t");
  if (space == std::string_view::npos) throw fail("missing interface or frame field");
  const std::string_view ifname = rest.substr(0, space);
  const std::string_view frame_text = trim(rest.substr(space));
  if (frame_text.find_first_of(" \t") != std::string_view::npos) throw fail("trailing fields");

  const auto hash = frame_text.find('#');
  if (hash == std::string_view::npos) throw fail("missing '#'");
  const std::string_view id_text = frame_text.substr(0, hash);
  const std::string_view data_text = frame_text.substr(hash + 1);
  if (id_text.empty() || id_text.size() > 3) throw fail("CAN id must be 1-3 hex digits");

  unsigned id = 0;
  for (char c : id_text) {
    const int h = hex_value(c);
    if (h < 0) throw fail("bad hex in CAN id");
    id = id * 16 + static_cast<unsigned>(h);
  }
  if (id > kMaxStandardId) throw fail("CAN id exceeds 11 bits");
  if (data_text.size() % 2 != 0) throw fail("odd number of payload hex digits");
  if (data_text.size() / 2 > kMaxDlc) throw fail("payload longer than 8 bytes");

  std::vector<std::uint8_t> bytes;
  for (std::size_t i = 0; i < data_text.size(); i += 2) {
    const int hi = hex_value(data_text[i]);
    const int lo = hex_value(data_text[i + 1]);
    if (hi < 0 || lo < 0) throw fail("bad hex in payload");
    bytes.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
  }
  return {std::string(ifname), CanFrame(timestamp, static_cast<std::uint16_t>(id), bytes)};
}

std::string format_candump_line(const CandumpEntry& entry) {
  char head[64];
  std::snprintf(head, sizeof head, "(%.6f) ", entry.frame.timestamp());
  char id[8];
  std::snprintf(id, sizeof id, "%03X#", entry.frame.can_id());
  std::string out = head + entry.interface + " " + id;
  for (std::uint8_t b : entry.frame.data()) {
    char hex[3];
    std::snprintf(hex, sizeof hex, "%02X", b);
    out += hex;
  }
  return out;
}

std::vector<CandumpEntry> parse_candump(std::string_view text) {
  std::vector<CandumpEntry> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (trim(line).empty()) continue;
    out.push_back(parse_candump_line(line, line_no));
  }
  return out;
}

std::vector<CandumpEntry> read_candump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open candump log '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_candump(buf.str());
}

}  // namespace accsim::can
