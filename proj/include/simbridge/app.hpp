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

#ifndef SIMBRIDGE_APP_HPP_
#define SIMBRIDGE_APP_HPP_

// Command implementations behind the `simbridge` executable.
//
// Exit codes: 0 success, 1 invalid input (parse or validation errors,
// unreadable files), 2 runtime failure or, for a headless run of a scenario
// with a state machine, the terminal state was not reached.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "simbridge/server.hpp"

namespace simbridge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitRuntime = 2;

struct RunOptions {
  std::filesystem::path scenario;
  std::optional<double> duration;  // default: the scenario's, unbounded with serve
  std::optional<std::filesystem::path> log;
  std::optional<std::filesystem::path> report;
  bool serve = false;
  std::string host = "127.0.0.1";
  unsigned short port = kDefaultPort;
  std::optional<double> speed;
  std::optional<std::uint64_t> seed;
  bool lenient = false;
};

int run_command(const RunOptions& options, std::ostream& out, std::ostream& err);
int validate_command(const std::filesystem::path& scenario, bool lenient, std::ostream& out,
                     std::ostream& err);
int export_command(const std::filesystem::path& log, const std::filesystem::path& csv_dir,
                   std::ostream& out, std::ostream& err);
// Writes the built-in demo scenario; to `out` when `path` is empty.
int demo_scenario_command(const std::optional<std::filesystem::path>& path, std::ostream& out,
                          std::ostream& err);

}  // namespace simbridge

#endif  // SIMBRIDGE_APP_HPP_
