#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "accsim/core.hpp"

namespace accsim::can {

inline constexpr std::uint16_t kMaxStandardId = 0x7FF;
inline constexpr std::size_t kMaxDlc = 8;

/// Ground truth about who put a frame on the bus. Only the IDS model and the
/// evaluation harness look at it; decoding ignores it.
enum class Provenance : std::uint8_t { authentic, spoofed };

class MalformedFrame : public Error {
 public:
  using Error::Error;
};

/// A candump line that could not be parsed. `line()` is 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Classic CAN frame with an 11-bit identifier.
class CanFrame {
 public:
  CanFrame() = default;
  /// Throws MalformedFrame if id >= 2^11 or payload.size() > 8.
  CanFrame(double timestamp, std::uint16_t can_id, std::span<const std::uint8_t> payload,
           Provenance provenance = Provenance::authentic);

  [[nodiscard]] double timestamp() const noexcept { return timestamp_; }
  [[nodiscard]] std::uint16_t can_id() const noexcept { return can_id_; }
  [[nodiscard]] std::size_t dlc() const noexcept { return dlc_; }
  [[nodiscard]] std::span<const std::uint8_t> data() const noexcept { return {data_.data(), dlc_}; }
  [[nodiscard]] Provenance provenance() const noexcept { return provenance_; }

  friend bool operator==(const CanFrame& a, const CanFrame& b) noexcept;

 private:
  double timestamp_ = 0.0;
  std::uint16_t can_id_ = 0;
  std::size_t dlc_ = 0;
  std::array<std::uint8_t, kMaxDlc> data_{};
  Provenance provenance_ = Provenance::authentic;
};

/// Which sensor frames are broadcast and how often.
struct BusSchedule {
  std::uint16_t speed_frame_id = 0x0C0;
  double speed_period = 0.05;
  std::uint16_t distance_frame_id = 0x0D0;
  double distance_period = 0.05;

  /// Periods must be positive integer multiples of dt; ids must be 11-bit.
  void validate(double dt) const;
};

// Wire format: unsigned 16-bit little-endian centi-units in data[0..2], dlc=2.
// Speeds are centi-km/h, distances centimetres. Range 0..655.35.
inline constexpr double kMaxEncodable = 655.35;

std::array<std::uint8_t, 2> encode_speed(SpeedKmh s);
std::array<std::uint8_t, 2> encode_distance(double meters);

/// Throws MalformedFrame on id mismatch or dlc < 2.
SpeedKmh decode_speed(const CanFrame& f, std::uint16_t expected_id);
double decode_distance(const CanFrame& f, std::uint16_t expected_id);

/// Value the codec actually carries for x: round(x*100)/100.
double quantize_centi(double x);

/// Authentic sensor frames due at this tick. Out-of-range readings are
/// saturated into the encodable range before encoding.
std::vector<CanFrame> broadcast(const SimClock& clock, SpeedKmh true_speed, double true_gap,
                                const BusSchedule& schedule);

/// Frames delivered during one tick, stable-sorted by timestamp.
class BusTickLog {
 public:
  void push(CanFrame frame);
  void clear() noexcept { frames_.clear(); }
  /// Stable sort on timestamp; frames with equal timestamps keep insertion order.
  void finalize();

  [[nodiscard]] std::span<const CanFrame> frames() const noexcept { return frames_; }
  /// Most recent frame with this id, or nullptr.
  [[nodiscard]] const CanFrame* latest(std::uint16_t can_id) const noexcept;

 private:
  std::vector<CanFrame> frames_;
};

/// One candump line: `(seconds.micros) ifname HEXID#HEXBYTES`.
struct CandumpEntry {
  std::string interface;
  CanFrame frame;
};

/// Throws ParseError carrying `line_number`.
CandumpEntry parse_candump_line(std::string_view line, std::size_t line_number = 0);
std::string format_candump_line(const CandumpEntry& entry);

/// Reads a whole log, skipping blank lines. Throws IoError / ParseError.
std::vector<CandumpEntry> read_candump(const std::filesystem::path& path);
std::vector<CandumpEntry> parse_candump(std::string_view text);

}  // namespace accsim::can
