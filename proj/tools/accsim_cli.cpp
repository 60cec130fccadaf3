// accsim: run ACC spoofing scenarios, parameter sweeps, and list presets.
//
// Exit codes: 0 no crash, 2 crash, 1 error.

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "accsim/config_json.hpp"
#include "accsim/presets.hpp"
#include "accsim/scenario.hpp"
#include "accsim/sweep.hpp"
#include "accsim/telemetry.hpp"

namespace fs = std::filesystem;
using namespace accsim;

namespace {

constexpr int kExitNoCrash = 0;
constexpr int kExitError = 1;
constexpr int kExitCrash = 2;

fs::path default_out_dir() {
  if (const char* env = std::getenv("ACCSIM_OUT_DIR"); env && *env) return env;
  return "out";
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !is.eof()) throw ConfigError(std::string(flag) + ": bad list element '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(std::string(flag) + ": list must not be empty");
  return out;
}

void print_summary(const std::string& label, const RunSummary& s) {
  std::printf("%s: crashed=%s crash_count=%d min_gap=%.3f m mean_ego_speed=%.3f km/h ticks=%llu\n", label.c_str(),
              s.crashed ? "true" : "false", s.crash_count, s.min_gap, s.mean_ego_speed,
              static_cast<unsigned long long>(s.ticks));
}

struct RunArgs {
  std::string preset;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool stop_on_crash = false;
};

int cmd_run(const RunArgs& args) {
  ScenarioConfig config = args.preset.empty() ? load_config(args.config) : preset(args.preset);
  if (args.seed) config.master_seed = *args.seed;
  if (args.stop_on_crash) config.stop_on_crash = true;

  const RunResult result = run(config);
  const fs::path out_dir = args.out.empty() ? default_out_dir() : fs::path(args.out);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
  telemetry::write_trace(result.trace, out_dir / "trace.csv");
  telemetry::write_summary(result.summary, out_dir / "summary.json");

  print_summary(args.preset.empty() ? args.config : args.preset, result.summary);
  std::printf("wrote %s and %s\n", (out_dir / "trace.csv").c_str(), (out_dir / "summary.json").c_str());
  return result.summary.crashed ? kExitCrash : kExitNoCrash;
}

struct SweepArgs {
  std::string ego_speeds;
  std::string spoof_speeds;
  std::string ids = "off";
  std::string seeds = "0";
  std::string out;
  int threads = 0;
};

int cmd_sweep(const SweepArgs& args) {
  const auto ego = parse_list<double>(args.ego_speeds, "--ego-speeds");
  const auto spoof = parse_list<double>(args.spoof_speeds, "--spoof-speeds");
  const auto seeds = parse_list<std::uint64_t>(args.seeds, "--seeds");
  const std::array<bool, 1> ids{args.ids == "on"};
  if (args.threads > 0) omp_set_num_threads(args.threads);

  const auto grid = sweep::make_grid(ego, spoof, ids, seeds);
  const auto rows = sweep::run_parallel(grid);

  sweep::write_csv(rows, std::cout);
  if (!args.out.empty()) {
    fs::create_directories(args.out);
    std::ofstream f(fs::path(args.out) / "sweep.csv", std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write sweep.csv in '" + args.out + "'");
    sweep::write_csv(rows, f);
  }
  const bool any_crash = std::ranges::any_of(rows, [](const auto& r) { return r.crashed; });
  return any_crash ? kExitCrash : kExitNoCrash;
}

std::string describe_lead(const LeadProfile& p) {
  char buf[128];
  if (const auto* c = std::get_if<ConstantProfile>(&p)) {
    std::snprintf(buf, sizeof buf, "constant %.0f km/h", c->speed);
  } else if (const auto* t = std::get_if<TrapezoidProfile>(&p)) {
    std::snprintf(buf, sizeof buf, "trapezoid 0->%.0f->0 km/h (%.0f/%.0f/%.0f s)", t->v_peak, t->ramp_up, t->hold,
                  t->ramp_down);
  } else {
    std::snprintf(buf, sizeof buf, "replay %s", std::get<ReplayProfile>(p).path.c_str());
  }
  return buf;
}

int cmd_presets() {
  for (const auto& info : preset_catalog()) {
    const ScenarioConfig c = preset(info.name);
    std::printf("%-13s %s\n", info.name.c_str(), info.description.c_str());
    std::printf("              ego target %.0f km/h, lead %s, gap %.0f m, duration %.0f s\n", c.ego_target_speed,
                describe_lead(c.lead_profile).c_str(), c.initial_gap, c.duration);
    if (c.attack.enabled)
      std::printf("              attack: spoof %.0f km/h, p=%.2f\n", c.attack.spoofed_speed,
                  c.attack.injection_probability);
    else
      std::printf("              attack: off\n");
    if (c.ids)
      std::printf("              ids: detection_rate=%.2f response_time=%.3fs latency=%.3fs\n",
                  c.ids->detection_rate, c.ids->response_time, c.ids->detection_latency);
    else
      std::printf("              ids: off\n");
  }
  return kExitNoCrash;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive cruise control under CAN speed spoofing, with an IDS-gated emergency brake"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write trace.csv and summary.json");
  auto* preset_opt = run_cmd->add_option("--preset", run_args.preset, "Preset name (see `presets`)");
  auto* config_opt = run_cmd->add_option("--config", run_args.config, "JSON scenario config");
  preset_opt->excludes(config_opt);
  run_cmd->add_option("--seed", run_args.seed, "Override master_seed");
  run_cmd->add_option("--out", run_args.out, "Output directory (default $ACCSIM_OUT_DIR or ./out)");
  run_cmd->add_flag("--stop-on-crash", run_args.stop_on_crash, "Stop at the first collision");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Crash matrix over ego speeds x spoofed speeds x seeds");
  sweep_cmd->add_option("--ego-speeds", sweep_args.ego_speeds, "Comma-separated km/h list")->required();
  sweep_cmd->add_option("--spoof-speeds", sweep_args.spoof_speeds, "Comma-separated km/h list")->required();
  sweep_cmd->add_option("--ids", sweep_args.ids, "IDS on|off")->check(CLI::IsMember({"on", "off"}));
  sweep_cmd->add_option("--seeds", sweep_args.seeds, "Comma-separated master seeds");
  sweep_cmd->add_option("--out", sweep_args.out, "Also write sweep.csv into this directory");
  sweep_cmd->add_option("--threads", sweep_args.threads, "OpenMP worker count (default: runtime choice)");

  auto* presets_cmd = app.add_subcommand("presets", "List built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*run_cmd) {
      if (run_args.preset.empty() && run_args.config.empty()) {
        std::cerr << "run: one of --preset or --config is required\n";
        return kExitError;
      }
      return cmd_run(run_args);
    }
    if (*sweep_cmd) return cmd_sweep(sweep_args);
    if (*presets_cmd) return cmd_presets();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
