#include "accsim/ids.hpp"

#include <algorithm>

namespace accsim {

namespace {
// Tick times are integer multiples of dt; tolerate representation error.
constexpr double kTimeEps = 1e-9;

bool within_hold(double now, const IdsVerdict& v, double hold) {
  return v.flagged && v.visible_at <= now + kTimeEps && now + kTimeEps < v.visible_at + hold;
}
}  // namespace

void IdsConfig::validate() const {
  for (double p : {detection_rate, false_positive_rate}) {
    require_finite(p, "ids probability");
    if (p < 0.0 || p > 1.0) throw ConfigError("ids probabilities must be in [0, 1]");
  }
  require_finite(response_time, "ids.response_time");
  require_finite(detection_latency, "ids.detection_latency");
  require_finite(flag_hold, "ids.flag_hold");
  if (detection_latency < 0.0) throw ConfigError("ids.detection_latency must be >= 0");
  if (response_time < detection_latency) throw ConfigError("ids.response_time must be >= detection_latency");
  if (flag_hold <= 0.0) throw ConfigError("ids.flag_hold must be > 0");
}

IdsVerdict classify(const can::CanFrame& frame, const IdsConfig& config, rng::Stream& stream) {
  const double p = frame.provenance() == can::Provenance::spoofed ? config.detection_rate
                                                                  : config.false_positive_rate;
  IdsVerdict v;
  v.frame_timestamp = frame.timestamp();
  v.flagged = stream.bernoulli(p);
  v.visible_at = v.flagged ? frame.timestamp() + config.response_time : frame.timestamp();
  return v;
}

bool poll(double now, std::span<const IdsVerdict> verdicts, double flag_hold) {
  return std::ranges::any_of(verdicts, [&](const IdsVerdict& v) { return within_hold(now, v, flag_hold); });
}

IdsSim::IdsSim(const IdsConfig& config, std::uint64_t seed) : config_(config), stream_(seed) {
  config_.validate();
}

IdsVerdict IdsSim::observe(const can::CanFrame& frame) {
  const IdsVerdict v = classify(frame, config_, stream_);
  ++frames_seen_;
  if (v.flagged) {
    ++flagged_;
    pending_.push_back(v);
  }
  return v;
}

bool IdsSim::poll(double now) {
  std::erase_if(pending_, [&](const IdsVerdict& v) { return v.visible_at + config_.flag_hold <= now + kTimeEps; });
  return accsim::poll(now, pending_, config_.flag_hold);
}

}  // namespace accsim
