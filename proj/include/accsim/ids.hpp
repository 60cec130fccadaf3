#pragma once

#include <cstdint>
#include <vector>
#include <optional>
#include <span>

#include "accsim/canbus.hpp"
#include "accsim/rng.hpp"

namespace accsim {

/// Statistical model of a real-time CAN intrusion detector. Defaults are the
/// measured figures of the reference detector: 97 % detection, 152 ms
/// detection latency, 1026 ms response time.
struct IdsConfig {
  double detection_rate = 0.97;
  double response_time = 1.026;      // s, frame -> flag usable by the controller
  double detection_latency = 0.152;  // s, reported only
  double false_positive_rate = 0.0;
  double flag_hold = 1.0;  // s a visible detection keeps the intrusion flag raised
  std::optional<std::uint64_t> seed;

  void validate() const;
};

struct IdsVerdict {
  double frame_timestamp = 0.0;
  bool flagged = false;
  double visible_at = 0.0;
};

/// One classification draw for `frame`.
IdsVerdict classify(const can::CanFrame& frame, const IdsConfig& config, rng::Stream& stream);

/// True iff some flagged verdict satisfies visible_at <= now < visible_at + hold.
bool poll(double now, std::span<const IdsVerdict> verdicts, double flag_hold);

/// Detector instance owning its random stream and pending flagged verdicts.
class IdsSim {
 public:
  IdsSim(const IdsConfig& config, std::uint64_t seed);

  IdsVerdict observe(const can::CanFrame& frame);
  /// Also drops verdicts whose hold window ended before `now`.
  bool poll(double now);

  [[nodiscard]] const IdsConfig& config() const noexcept { return config_; }
  [[nodiscard]] std::uint64_t frames_seen() const noexcept { return frames_seen_; }
  [[nodiscard]] std::uint64_t flagged_count() const noexcept { return flagged_; }

 private:
  IdsConfig config_;
  rng::Stream stream_;
  std::vector<IdsVerdict> pending_;
  std::uint64_t frames_seen_ = 0;
  std::uint64_t flagged_ = 0;
};

}  // namespace accsim
