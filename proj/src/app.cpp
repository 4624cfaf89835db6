// Copyright 2026 The simbridge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "simbridge/app.hpp"

#include <atomic>
#include <csignal>
#include <fstream>
#include <limits>
#include <thread>

#include "simbridge/demo.hpp"
#include "simbridge/trajectory_log.hpp"

namespace simbridge {

namespace {

volatile std::sig_atomic_t g_interrupted = 0;

extern "C" void on_signal(int) { g_interrupted = 1; }

// Forwards SIGINT/SIGTERM to Bridge::request_stop from a normal thread.
class InterruptWatcher {
 public:
  explicit InterruptWatcher(Bridge& bridge) {
    g_interrupted = 0;
    previous_int_ = std::signal(SIGINT, on_signal);
    previous_term_ = std::signal(SIGTERM, on_signal);
    thread_ = std::thread([this, &bridge] {
      while (!done_) {
        if (g_interrupted) {
          bridge.request_stop();
          return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
      }
    });
  }

  ~InterruptWatcher() {
    done_ = true;
    thread_.join();
    std::signal(SIGINT, previous_int_);
    std::signal(SIGTERM, previous_term_);
  }

 private:
  std::atomic<bool> done_{false};
  std::thread thread_;
  void (*previous_int_)(int) = SIG_DFL;
  void (*previous_term_)(int) = SIG_DFL;
};

std::optional<Scenario> load_or_report(const std::filesystem::path& path, bool lenient,
                                       std::ostream& err) {
  try {
    return load_scenario(path, ParseOptions{lenient});
  } catch (const ParseError& e) {
    err << path.string() << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
  } catch (const ValidationError& e) {
    err << path.string() << ": invalid scenario\n";
    for (const auto& p : e.problems()) err << "  " << p << "\n";
  }
  return std::nullopt;
}

}  // namespace

int validate_command(const std::filesystem::path& path, bool lenient, std::ostream& out,
                     std::ostream& err) {
  auto scenario = load_or_report(path, lenient, err);
  if (!scenario) return kExitInvalid;
  if (scenario->machine) {
    for (const auto& w : validate_machine(*scenario->machine, &scenario->scene).warnings) {
      err << "warning: fsm: " << w << "\n";
    }
  }
  out << path.string() << ": ok (" << scenario->scene.joints().size() << " joints, "
      << scenario->scene.objects().size() << " objects";
  if (scenario->machine) out << ", " << scenario->machine->states.size() << " states";
  out << ")\n";
  return kExitOk;
}

int run_command(const RunOptions& options, std::ostream& out, std::ostream& err) {
  auto scenario = load_or_report(options.scenario, options.lenient, err);
  if (!scenario) return kExitInvalid;
  if (options.speed) scenario->config.realtime_factor = *options.speed;
  if (options.seed) scenario->config.rng_seed = *options.seed;
  // A server keeps running until interrupted unless a duration is given.
  const double duration = options.duration.value_or(
      options.serve ? std::numeric_limits<double>::infinity() : scenario->duration);
  if (!(duration >= 0.0)) {
    err << "duration must be >= 0\n";
    return kExitInvalid;
  }
  const bool has_machine = scenario->machine.has_value();

  std::optional<Bridge> bridge;
  try {
    bridge.emplace(std::move(*scenario));
  } catch (const ValidationError& e) {
    err << options.scenario.string() << ": invalid scenario\n";
    for (const auto& p : e.problems()) err << "  " << p << "\n";
    return kExitInvalid;
  }

  std::ofstream log_file;
  std::optional<JsonlLog> log;
  if (options.log) {
    log_file.open(*options.log, std::ios::binary | std::ios::trunc);
    if (!log_file) {
      err << "cannot write log \"" << options.log->string() << "\"\n";
      return kExitInvalid;
    }
    log.emplace(log_file);
    bridge->set_log_sink(&*log);
  }

  TelemetryHub hub;
  std::optional<Server> server;
  if (options.serve) {
    bridge->set_snapshot_observer([&hub](const std::shared_ptr<const Snapshot>& s) { hub.publish(*s); });
    ServerOptions so;
    so.host = options.host;
    so.port = options.port;
    so.scenario_dir = options.scenario.parent_path();
    server.emplace(*bridge, hub, so);
    try {
      server->start();
    } catch (const std::exception& e) {
      err << e.what() << "\n";
      return kExitRuntime;
    }
    out << "listening on http://" << options.host << ":" << server->port() << " (ws: /ws)\n"
        << std::flush;
  }

  RunReport report;
  {
    InterruptWatcher watcher(*bridge);
    try {
      report = bridge->run(StopCondition{duration, !options.serve});
    } catch (const std::exception& e) {
      err << "runtime failure at t=" << bridge->physics().t << ": " << e.what() << "\n";
      if (server) server->stop();
      return kExitRuntime;
    }
  }
  if (server) server->stop();

  out << report.scenario << ": t=" << report.final_t << " substeps=" << report.substeps
      << " ticks=" << report.controller_ticks;
  if (report.fsm_state) out << " fsm=" << *report.fsm_state << (report.terminal ? " (terminal)" : "");
  out << " stop=" << report.stop_reason << " wall=" << report.wall_time_s << "s\n";

  if (options.report) {
    std::ofstream f(*options.report, std::ios::binary | std::ios::trunc);
    if (!f) {
      err << "cannot write report \"" << options.report->string() << "\"\n";
      return kExitRuntime;
    }
    f << report_to_json(report).dump(2) << "\n";
  }

  if (!options.serve && has_machine && !report.terminal && report.stop_reason == "duration" &&
      duration > 0.0) {
    err << "terminal state not reached within " << duration << " s (state "
        << report.fsm_state.value_or("?") << ")\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int export_command(const std::filesystem::path& log, const std::filesystem::path& csv_dir,
                   std::ostream& out, std::ostream& err) {
  std::ifstream in(log, std::ios::binary);
  if (!in) {
    err << "cannot open \"" << log.string() << "\"\n";
    return kExitInvalid;
  }
  try {
    const auto records = read_jsonl(in);
    for (const auto& path : export_csv(records, csv_dir)) out << path.string() << "\n";
  } catch (const ParseError& e) {
    err << log.string() << ": " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int demo_scenario_command(const std::optional<std::filesystem::path>& path, std::ostream& out,
                          std::ostream& err) {
  const std::string text = grasp_scenario_json().dump(2) + "\n";
  if (!path) {
    out << text;
    return kExitOk;
  }
  std::ofstream f(*path, std::ios::binary | std::ios::trunc);
  if (!f) {
    err << "cannot write \"" << path->string() << "\"\n";
    return kExitRuntime;
  }
  f << text;
  return kExitOk;
}

}  // namespace simbridge
