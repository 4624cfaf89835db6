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

// simbridge command line.
//
//   simbridge run <scenario.json> [--duration S] [--log out.jsonl] [--report out.json]
//                 [--serve] [--host H] [--port P] [--speed F] [--seed N] [--lenient]
//   simbridge validate <scenario.json> [--lenient]
//   simbridge export <log.jsonl> --csv <dir>
//   simbridge demo-scenario [--out file]

#include <iostream>

#include <CLI11.hpp>

#include "simbridge/app.hpp"

int main(int argc, char** argv) {
  using namespace simbridge;

  CLI::App app{"controller/simulator bridge"};
  app.require_subcommand(1);

  RunOptions run;
  std::string scenario_path;
  std::optional<double> duration;
  std::optional<std::string> log_path;
  std::optional<std::string> report_path;
  std::optional<double> speed;
  std::optional<std::uint64_t> seed;
  unsigned short port = kDefaultPort;

  auto* run_cmd = app.add_subcommand("run", "run a scenario");
  run_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--duration", duration, "simulated seconds (default: scenario duration)");
  run_cmd->add_option("--log", log_path, "write the JSONL trajectory log here");
  run_cmd->add_option("--report", report_path, "write the JSON run report here");
  run_cmd->add_flag("--serve", run.serve, "serve HTTP and WebSocket while running");
  run_cmd->add_flag("--headless", "no server (default)");
  run_cmd->add_option("--host", run.host, "bind address")->capture_default_str();
  run_cmd->add_option("--port", port, "port for --serve")->envname("SIMBRIDGE_PORT")->capture_default_str();
  run_cmd->add_option("--speed", speed, "realtime factor, 0 = unlimited");
  run_cmd->add_option("--seed", seed, "override the sensor noise seed");
  run_cmd->add_flag("--lenient", run.lenient, "unknown keys are warnings");

  std::string validate_path;
  bool validate_lenient = false;
  auto* validate_cmd = app.add_subcommand("validate", "check a scenario and its descriptions");
  validate_cmd->add_option("scenario", validate_path, "scenario JSON file")->required();
  validate_cmd->add_flag("--lenient", validate_lenient, "unknown keys are warnings");

  std::string export_log;
  std::string export_dir;
  auto* export_cmd = app.add_subcommand("export", "convert a JSONL log to per-joint CSV");
  export_cmd->add_option("log", export_log, "JSONL log")->required();
  export_cmd->add_option("--csv", export_dir, "output directory")->required();

  std::optional<std::string> demo_out;
  auto* demo_cmd = app.add_subcommand("demo-scenario", "print the built-in grasp scenario");
  demo_cmd->add_option("--out", demo_out, "write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (*run_cmd) {
    run.scenario = scenario_path;
    run.duration = duration;
    if (log_path) run.log = *log_path;
    if (report_path) run.report = *report_path;
    run.speed = speed;
    run.seed = seed;
    run.port = port;
    return run_command(run, std::cout, std::cerr);
  }
  if (*validate_cmd) return validate_command(validate_path, validate_lenient, std::cout, std::cerr);
  if (*export_cmd) return export_command(export_log, export_dir, std::cout, std::cerr);
  if (*demo_cmd) {
    std::optional<std::filesystem::path> out;
    if (demo_out) out = *demo_out;
    return demo_scenario_command(out, std::cout, std::cerr);
  }
  return kExitInvalid;
}
