#include "accsim/config_json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace accsim {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

/// Reads fields out of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  ObjectReader(const ObjectReader&) = delete;
  ObjectReader& operator=(const ObjectReader&) = delete;

  /// Rejects every key that was never looked up.
  void finish() const {
    for (const auto& [key, _] : j_.items())
      if (!seen_.contains(key)) fail(key_path(key), "unknown key");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(key_path(key), "expected a number");
      out = v->get<double>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(key_path(key), "expected true/false");
      out = v->get<bool>();
    }
  }

  void u64(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) out = as_u64(*v, key_path(key));
  }

  void opt_u64(const std::string& key, std::optional<std::uint64_t>& out) {
    if (const json* v = find(key)) {
      if (v->is_null())
        out.reset();
      else
        out = as_u64(*v, key_path(key));
    }
  }

  void opt_number(const std::string& key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      if (!v->is_number()) fail(key_path(key), "expected a number or null");
      out = v->get<double>();
    }
  }

  /// CAN ids may be given as integers or "0x..." strings.
  void can_id(const std::string& key, std::uint16_t& out) {
    if (const json* v = find(key)) out = as_can_id(*v, key_path(key));
  }

  void opt_can_id(const std::string& key, std::optional<std::uint16_t>& out) {
    if (const json* v = find(key)) {
      if (v->is_null())
        out.reset();
      else
        out = as_can_id(*v, key_path(key));
    }
  }

  std::string string(const std::string& key) {
    const json* v = find(key);
    if (!v) fail(key_path(key), "missing required key");
    if (!v->is_string()) fail(key_path(key), "expected a string");
    return v->get<std::string>();
  }

  [[nodiscard]] std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
  }

 private:
  static std::uint64_t as_u64(const json& v, const std::string& where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      fail(where, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  static std::uint16_t as_can_id(const json& v, const std::string& where) {
    std::uint64_t id = 0;
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      std::size_t used = 0;
      try {
        id = std::stoull(s, &used, 0);
      } catch (const std::exception&) {
        fail(where, "bad CAN id '" + s + "'");
      }
      if (used != s.size()) fail(where, "bad CAN id '" + s + "'");
    } else {
      id = as_u64(v, where);
    }
    if (id > can::kMaxStandardId) fail(where, "CAN id exceeds 11 bits");
    return static_cast<std::uint16_t>(id);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_gains(const json& j, const std::string& path, PidGains& g) {
  ObjectReader r(j, path);
  r.number("kp", g.kp);
  r.number("ki", g.ki);
  r.number("kd", g.kd);
  r.number("dt", g.dt);
  r.finish();
}

LeadProfile read_profile(const json& j) {
  ObjectReader r(j, "lead_profile");
  const std::string type = r.string("type");
  if (type == "constant") {
    ConstantProfile p;
    r.number("speed", p.speed);
    r.finish();
    return p;
  }
  if (type == "trapezoid") {
    TrapezoidProfile p;
    r.number("v_peak", p.v_peak);
    r.number("ramp_up", p.ramp_up);
    r.number("hold", p.hold);
    r.number("ramp_down", p.ramp_down);
    r.finish();
    return p;
  }
  if (type == "replay") {
    ReplayProfile p;
    p.path = r.string("path");
    r.can_id("speed_frame_id", p.speed_frame_id);
    r.finish();
    return p;
  }
  ObjectReader::fail("lead_profile.type", "unknown profile type '" + type + "'");
}

ordered_json gains_json(const PidGains& g) {
  return ordered_json{{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}, {"dt", g.dt}};
}

}  // namespace

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  ObjectReader r(j, "");
  r.number("ego_target_speed", c.ego_target_speed);
  r.number("ego_initial_speed", c.ego_initial_speed);
  if (const json* v = r.find("lead_profile")) c.lead_profile = read_profile(*v);
  r.number("initial_gap", c.initial_gap);
  r.number("duration", c.duration);
  r.number("dt", c.dt);
  bool explicit_pid_dt = false;

  if (const json* v = r.find("attack")) {
    ObjectReader a(*v, "attack");
    a.boolean("enabled", c.attack.enabled);
    a.number("spoofed_speed", c.attack.spoofed_speed);
    a.number("injection_probability", c.attack.injection_probability);
    a.opt_can_id("target_id", c.attack.target_id);
    a.number("start_time", c.attack.start_time);
    a.opt_number("end_time", c.attack.end_time);
    a.opt_u64("seed", c.attack.seed);
    if (const json* m = a.find("mode")) {
      if (*m == "bernoulli")
        c.attack.mode = InjectionMode::bernoulli;
      else if (*m == "pattern")
        c.attack.mode = InjectionMode::pattern;
      else
        ObjectReader::fail("attack.mode", "expected \"bernoulli\" or \"pattern\"");
    }
    a.finish();
  }
  if (const json* v = r.find("ids")) {
    if (v->is_null()) {
      c.ids.reset();
    } else {
      IdsConfig ids;
      ObjectReader i(*v, "ids");
      i.number("detection_rate", ids.detection_rate);
      i.number("response_time", ids.response_time);
      i.number("detection_latency", ids.detection_latency);
      i.number("false_positive_rate", ids.false_positive_rate);
      i.number("flag_hold", ids.flag_hold);
      i.opt_u64("seed", ids.seed);
      i.finish();
      c.ids = ids;
    }
  }
  if (const json* v = r.find("ssd_params")) {
    ObjectReader s(*v, "ssd_params");
    s.number("t_reaction", c.ssd_params.t_reaction);
    s.number("f", c.ssd_params.f);
    s.number("g", c.ssd_params.g);
    s.finish();
  }
  if (const json* v = r.find("pid_gains")) {
    read_gains(*v, "pid_gains", c.pid_gains);
    explicit_pid_dt = v->contains("dt");
  }
  if (const json* v = r.find("lateral_pid_gains")) read_gains(*v, "lateral_pid_gains", c.lateral_pid_gains);
  r.number("u_scale", c.u_scale);
  r.boolean("resume_after_flag", c.resume_after_flag);
  if (const json* v = r.find("limits")) {
    ObjectReader l(*v, "limits");
    l.number("a_max", c.limits.a_max);
    l.number("b_max", c.limits.b_max);
    l.number("b_emergency", c.limits.b_emergency);
    l.finish();
  }
  if (const json* v = r.find("bus")) {
    ObjectReader b(*v, "bus");
    b.can_id("speed_frame_id", c.bus.speed_frame_id);
    b.number("speed_period", c.bus.speed_period);
    b.can_id("distance_frame_id", c.bus.distance_frame_id);
    b.number("distance_period", c.bus.distance_period);
    b.finish();
  }
  r.boolean("stop_on_crash", c.stop_on_crash);
  r.u64("master_seed", c.master_seed);
  r.finish();

  // The controller runs once per tick, so its dt follows the loop unless given.
  if (!explicit_pid_dt) c.pid_gains.dt = c.dt;
  return c;
}

ScenarioConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  ScenarioConfig c = config_from_json(j);
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    ScenarioConfig c = parse_config(buf.str());
    // Relative replay paths resolve against the config file's directory.
    if (auto* r = std::get_if<ReplayProfile>(&c.lead_profile); r && r->path.is_relative())
      r->path = path.parent_path() / r->path;
    return c;
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ordered_json config_to_json(const ScenarioConfig& c) {
  ordered_json j;
  j["ego_target_speed"] = c.ego_target_speed;
  j["ego_initial_speed"] = c.ego_initial_speed;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantProfile>) {
          j["lead_profile"] = ordered_json{{"type", "constant"}, {"speed", p.speed}};
        } else if constexpr (std::is_same_v<T, TrapezoidProfile>) {
          j["lead_profile"] = ordered_json{{"type", "trapezoid"}, {"v_peak", p.v_peak}, {"ramp_up", p.ramp_up},
                                           {"hold", p.hold},       {"ramp_down", p.ramp_down}};
        } else {
          j["lead_profile"] =
              ordered_json{{"type", "replay"}, {"path", p.path.string()}, {"speed_frame_id", p.speed_frame_id}};
        }
      },
      c.lead_profile);
  j["initial_gap"] = c.initial_gap;
  j["duration"] = c.duration;
  j["dt"] = c.dt;

  ordered_json a;
  a["enabled"] = c.attack.enabled;
  a["spoofed_speed"] = c.attack.spoofed_speed;
  a["injection_probability"] = c.attack.injection_probability;
  a["target_id"] = c.attack.target_id ? ordered_json(*c.attack.target_id) : nullptr;
  a["start_time"] = c.attack.start_time;
  a["end_time"] = c.attack.end_time ? ordered_json(*c.attack.end_time) : nullptr;
  a["seed"] = c.attack.seed ? ordered_json(*c.attack.seed) : nullptr;
  a["mode"] = c.attack.mode == InjectionMode::bernoulli ? "bernoulli" : "pattern";
  j["attack"] = a;

  if (c.ids) {
    const auto& i = *c.ids;
    j["ids"] = ordered_json{{"detection_rate", i.detection_rate},
                            {"response_time", i.response_time},
                            {"detection_latency", i.detection_latency},
                            {"false_positive_rate", i.false_positive_rate},
                            {"flag_hold", i.flag_hold},
                            {"seed", i.seed ? ordered_json(*i.seed) : ordered_json(nullptr)}};
  } else {
    j["ids"] = nullptr;
  }
  j["ssd_params"] = ordered_json{{"t_reaction", c.ssd_params.t_reaction}, {"f", c.ssd_params.f}, {"g", c.ssd_params.g}};
  j["pid_gains"] = gains_json(c.pid_gains);
  j["lateral_pid_gains"] = gains_json(c.lateral_pid_gains);
  j["u_scale"] = c.u_scale;
  j["resume_after_flag"] = c.resume_after_flag;
  j["limits"] = ordered_json{{"a_max", c.limits.a_max}, {"b_max", c.limits.b_max}, {"b_emergency", c.limits.b_emergency}};
  j["bus"] = ordered_json{{"speed_frame_id", c.bus.speed_frame_id},
                          {"speed_period", c.bus.speed_period},
                          {"distance_frame_id", c.bus.distance_frame_id},
                          {"distance_period", c.bus.distance_period}};
  j["stop_on_crash"] = c.stop_on_crash;
  j["master_seed"] = c.master_seed;
  return j;
}

}  // namespace accsim
