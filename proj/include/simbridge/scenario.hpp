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

#ifndef SIMBRIDGE_SCENARIO_HPP_
#define SIMBRIDGE_SCENARIO_HPP_

// Scenario document: robots (inline descriptions or files), objects, sim
// configuration, state machine, grasp parameters and a timed command script.
//
//   {
//     "name": "grasp",
//     "config": {"dt_sim": 0.001, "ctrl_divisor": 5, "realtime_factor": 0,
//                "paused": false, "rng_seed": 7, "interpolation": "linear",
//                "telemetry_rate_hz": 50},
//     "robots": [{"instance": "arm", "description": {...}},
//                {"instance": "b", "file": "robots/arm.json"}],
//     "objects": [...],
//     "fsm": {"initial": "...", "states": [...]},
//     "grasp": {...},
//     "script": [{"t": 1.0, "cmd": {"name": "set_gains", ...}}],
//     "duration": 60
//   }

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "simbridge/actuation.hpp"
#include "simbridge/command.hpp"
#include "simbridge/fsm.hpp"
#include "simbridge/grasp.hpp"
#include "simbridge/model.hpp"

namespace simbridge {

struct SimConfig {
  double dt_sim = 0.001;
  int ctrl_divisor = 5;
  double realtime_factor = 0.0;  // 0 runs as fast as possible
  bool paused = false;
  std::uint64_t rng_seed = 0;
  InterpolationMode interpolation = InterpolationMode::kLinear;
  double telemetry_rate_hz = 50.0;

  double dt_ctrl() const { return dt_sim * ctrl_divisor; }
  bool operator==(const SimConfig&) const = default;
};

std::vector<std::string> validate_config(const SimConfig& config);

struct ScriptedCommand {
  double t = 0.0;
  Command cmd;
  bool operator==(const ScriptedCommand&) const = default;
};

struct Scenario {
  std::string name;
  SimConfig config;
  SceneModel scene;
  std::optional<StateMachine> machine;
  std::optional<GraspParams> grasp;
  std::vector<ScriptedCommand> script;
  double duration = 60.0;

  bool operator==(const Scenario&) const = default;
};

// Parses and fully validates. Relative description files resolve against
// `base_dir`. Throws ParseError or ValidationError.
Scenario scenario_from_json(const Json& doc, const std::filesystem::path& base_dir = {},
                            const ParseOptions& options = {});
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {},
                        const ParseOptions& options = {});
Scenario load_scenario(const std::filesystem::path& path, const ParseOptions& options = {});

// Self-contained document: descriptions are inlined.
Json scenario_to_json(const Scenario& scenario);

// Reason a command would be rejected against this scenario, if any.
std::optional<std::string> check_command(const Command& cmd, const Scenario& scenario);

std::string_view to_string(InterpolationMode mode);

}  // namespace simbridge

#endif  // SIMBRIDGE_SCENARIO_HPP_
