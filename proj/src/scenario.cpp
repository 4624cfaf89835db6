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

#include "simbridge/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "simbridge/json_reader.hpp"

namespace simbridge {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::pair<InterpolationMode, std::string_view> kModes[] = {
    {InterpolationMode::kLinear, "linear"},
    {InterpolationMode::kHoldVelocity, "hold_velocity"},
    {InterpolationMode::kZeroOrderHold, "zero_order_hold"},
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError({"cannot open \"" + path.string() + "\""});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SimConfig read_config(JsonReader& r, const Json& c) {
  SimConfig config;
  if (!r.check_object(c)) return config;
  r.expect_keys(c, {"dt_sim", "ctrl_divisor", "realtime_factor", "paused", "rng_seed",
                    "interpolation", "telemetry_rate_hz"});
  config.dt_sim = r.optional_number(c, "dt_sim", config.dt_sim);
  config.ctrl_divisor = static_cast<int>(r.optional_int(c, "ctrl_divisor", config.ctrl_divisor));
  config.realtime_factor = r.optional_number(c, "realtime_factor", config.realtime_factor);
  config.paused = r.optional_bool(c, "paused", config.paused);
  const std::int64_t seed = r.optional_int(c, "rng_seed", 0);
  if (seed < 0) r.fail("rng_seed", "must be >= 0");
  config.rng_seed = static_cast<std::uint64_t>(seed);
  const std::string mode = r.optional_string(c, "interpolation", "linear");
  bool known = false;
  for (const auto& [m, name] : kModes) {
    if (name == mode) {
      config.interpolation = m;
      known = true;
    }
  }
  if (!known) r.fail("interpolation", "unknown mode \"" + mode + "\"");
  config.telemetry_rate_hz = r.optional_number(c, "telemetry_rate_hz", config.telemetry_rate_hz);
  return config;
}

}  // namespace

std::string_view to_string(InterpolationMode mode) {
  for (const auto& [m, name] : kModes) {
    if (m == mode) return name;
  }
  return "?";
}

std::vector<std::string> validate_config(const SimConfig& c) {
  std::vector<std::string> errors;
  if (!(c.dt_sim > 0.0) || !std::isfinite(c.dt_sim)) errors.push_back("config: dt_sim must be > 0");
  if (c.ctrl_divisor < 1) errors.push_back("config: ctrl_divisor must be >= 1");
  if (!(c.realtime_factor >= 0.0)) errors.push_back("config: realtime_factor must be >= 0");
  if (!(c.telemetry_rate_hz > 0.0) || (c.dt_sim > 0.0 && c.telemetry_rate_hz > 1.0 / c.dt_sim * (1 + 1e-9))) {
    errors.push_back("config: telemetry_rate_hz must be in (0, 1/dt_sim]");
  }
  return errors;
}

std::optional<std::string> check_command(const Command& cmd, const Scenario& s) {
  const SceneModel& scene = s.scene;
  auto actuated = [&](const std::string& joint) -> std::optional<std::string> {
    auto i = scene.joint_index(joint);
    if (!i) return "unknown joint \"" + joint + "\"";
    if (scene.joints()[*i].actuator.passive()) return "joint \"" + joint + "\" is passive";
    return std::nullopt;
  };
  return std::visit(
      Overloaded{
          [&](const ApplyPerturbation& c) -> std::optional<std::string> {
            if (!scene.joint_index(c.target) && !scene.object_index(c.target)) {
              return "unknown joint or object \"" + c.target + "\"";
            }
            if (!std::isfinite(c.magnitude)) return std::string("magnitude must be finite");
            if (!(c.duration > 0.0) || !std::isfinite(c.duration)) {
              return std::string("duration must be > 0");
            }
            return std::nullopt;
          },
          [&](const SetGains& c) -> std::optional<std::string> {
            if (auto e = actuated(c.joint)) return e;
            if (!std::isfinite(c.kp) || !std::isfinite(c.kd) || c.kp < 0 || c.kd < 0) {
              return std::string("gains must be finite and >= 0");
            }
            return std::nullopt;
          },
          [&](const SetSpeed& c) -> std::optional<std::string> {
            if (!(c.factor > 0.0) || !std::isfinite(c.factor)) return std::string("factor must be > 0");
            return std::nullopt;
          },
          [&](const Pause&) -> std::optional<std::string> { return std::nullopt; },
          [&](const StepOnce& c) -> std::optional<std::string> {
            if (c.substeps < 1) return std::string("substeps must be >= 1");
            return std::nullopt;
          },
          [&](const Transition& c) -> std::optional<std::string> {
            if (!s.machine) return std::string("scenario has no state machine");
            if (s.machine->find(c.state) == nullptr) {
              std::string valid;
              for (const auto& n : s.machine->state_names()) valid += (valid.empty() ? "" : ", ") + n;
              return "unknown state \"" + c.state + "\"; valid states: " + valid;
            }
            return std::nullopt;
          },
          [&](const SetPostureTarget& c) -> std::optional<std::string> {
            if (auto e = actuated(c.joint)) return e;
            const auto& b = scene.joints()[*scene.joint_index(c.joint)].bounds;
            if (!std::isfinite(c.position) || !b.pos.contains(c.position)) {
              return "position for \"" + c.joint + "\" outside controller bounds";
            }
            return std::nullopt;
          },
          [&](const ResetScenario&) -> std::optional<std::string> { return std::nullopt; },
      },
      cmd);
}

Scenario scenario_from_json(const Json& doc, const std::filesystem::path& base_dir,
                            const ParseOptions& options) {
  JsonReader r(options.lenient);
  Scenario s;
  if (!r.check_object(doc)) throw ValidationError(r.take_errors());
  r.expect_keys(doc, {"name", "config", "robots", "objects", "fsm", "grasp", "script", "duration"});
  s.name = r.optional_string(doc, "name", "scenario");
  if (const Json* c = r.field(doc, "config", false)) {
    auto scope = r.scope("config");
    s.config = read_config(r, *c);
  }
  s.duration = r.optional_number(doc, "duration", s.duration);

  std::vector<SceneEntry> entries;
  std::vector<ObjectSpec> objects;
  std::vector<std::string> problems;

  const Json* robots = r.field(doc, "robots", true);
  if (robots != nullptr && !robots->is_array()) r.fail("robots", "expected an array");
  for (std::size_t i = 0; robots != nullptr && robots->is_array() && i < robots->size(); ++i) {
    const Json& entry = (*robots)[i];
    auto scope = r.scope("robots[" + std::to_string(i) + "]");
    if (!r.check_object(entry)) continue;
    r.expect_keys(entry, {"instance", "description", "file"});
    const std::string instance = r.required_string(entry, "instance");
    const Json* inline_desc = r.field(entry, "description", false);
    const std::string file = r.optional_string(entry, "file", "");
    try {
      DescriptionDocument d;
      if (inline_desc != nullptr) {
        d = description_from_json(*inline_desc, options);
      } else if (!file.empty()) {
        const auto path = base_dir / file;
        d = parse_description_document(read_file(path), options);
      } else {
        r.fail("description", "robot needs \"description\" or \"file\"");
        continue;
      }
      for (auto& o : d.objects) objects.push_back(std::move(o));
      entries.push_back(SceneEntry{instance, std::move(d.robot), std::move(d.bounds)});
    } catch (const ValidationError& e) {
      for (const auto& p : e.problems()) problems.push_back("robot \"" + instance + "\": " + p);
    } catch (const ParseError& e) {
      problems.push_back("robot \"" + instance + "\" (" + file + "): " + e.what());
    }
  }

  if (const Json* objs = r.field(doc, "objects", false)) {
    if (!objs->is_array()) r.fail("objects", "expected an array");
    for (std::size_t i = 0; objs->is_array() && i < objs->size(); ++i) {
      auto scope = r.scope("objects[" + std::to_string(i) + "]");
      const Json& o = (*objs)[i];
      if (!r.check_object(o)) continue;
      r.expect_keys(o, {"name", "mass", "rest_height", "table_height"});
      ObjectSpec spec;
      spec.name = r.required_string(o, "name");
      spec.mass = r.required_number(o, "mass");
      spec.table_height = r.optional_number(o, "table_height", 0.0);
      spec.rest_height = r.optional_number(o, "rest_height", spec.table_height);
      if (!(spec.mass > 0.0)) r.fail("mass", "must be > 0");
      if (spec.rest_height < spec.table_height) r.fail("rest_height", "below table_height");
      objects.push_back(spec);
    }
  }

  for (auto& e : r.take_errors()) problems.push_back(std::move(e));
  if (robots != nullptr && robots->is_array() && robots->empty()) {
    problems.push_back("robots: at least one robot is required");
  }
  for (auto& e : validate_config(s.config)) problems.push_back(std::move(e));
  if (!problems.empty()) throw ValidationError(std::move(problems));

  try {
    s.scene = merge_scene(std::move(entries), std::move(objects));
  } catch (const MergeError& e) {
    throw ValidationError({e.what()});
  }

  if (const Json* fsm = r.field(doc, "fsm", false)) {
    auto scope = r.scope("fsm");
    s.machine = machine_from_json(*fsm, r, s.scene);
  }
  if (const Json* grasp = r.field(doc, "grasp", false)) {
    auto scope = r.scope("grasp");
    s.grasp = grasp_from_json(*grasp, r);
  }
  if (const Json* script = r.field(doc, "script", false)) {
    if (!script->is_array()) r.fail("script", "expected an array");
    for (std::size_t i = 0; script->is_array() && i < script->size(); ++i) {
      auto scope = r.scope("script[" + std::to_string(i) + "]");
      const Json& item = (*script)[i];
      if (!r.check_object(item)) continue;
      r.expect_keys(item, {"t", "cmd"});
      ScriptedCommand sc;
      sc.t = r.required_number(item, "t");
      const Json* cmd = r.field(item, "cmd", true);
      if (cmd == nullptr) continue;
      try {
        sc.cmd = command_from_json(*cmd);
      } catch (const CodecError& e) {
        r.fail("cmd", e.what());
        continue;
      }
      s.script.push_back(std::move(sc));
    }
  }
  for (auto& e : r.take_errors()) problems.push_back(std::move(e));
  if (!problems.empty()) throw ValidationError(std::move(problems));

  if (s.machine) {
    MachineReport report = validate_machine(*s.machine, &s.scene);
    for (auto& e : report.errors) problems.push_back("fsm: " + e);
  }
  if (s.grasp) {
    for (auto& e : validate_grasp(*s.grasp, s.scene)) problems.push_back(std::move(e));
  }
  if (!(s.duration >= 0.0)) problems.push_back("duration must be >= 0");
  double last_t = 0.0;
  for (std::size_t i = 0; i < s.script.size(); ++i) {
    const auto& sc = s.script[i];
    const std::string where = "script[" + std::to_string(i) + "]: ";
    if (!(sc.t >= last_t)) problems.push_back(where + "times must be non-decreasing and >= 0");
    last_t = sc.t;
    if (std::holds_alternative<Pause>(sc.cmd) || std::holds_alternative<StepOnce>(sc.cmd)) {
      problems.push_back(where + "pause/step_once are interactive-only");
    } else if (auto reason = check_command(sc.cmd, s)) {
      problems.push_back(where + *reason);
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return s;
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir,
                        const ParseOptions& options) {
  return scenario_from_json(parse_json(text), base_dir, options);
}

Scenario load_scenario(const std::filesystem::path& path, const ParseOptions& options) {
  return parse_scenario(read_file(path), path.parent_path(), options);
}

Json scenario_to_json(const Scenario& s) {
  Json robots = Json::array();
  for (const auto& e : s.scene.entries()) {
    robots.push_back({{"instance", e.instance},
                      {"description", description_to_json(DescriptionDocument{e.desc, e.bounds, {}, {}})}});
  }
  Json objects = Json::array();
  for (const auto& o : s.scene.objects()) {
    objects.push_back({{"name", o.name},
                       {"mass", o.mass},
                       {"rest_height", o.rest_height},
                       {"table_height", o.table_height}});
  }
  const SimConfig& c = s.config;
  Json doc{{"name", s.name},
           {"config",
            {{"dt_sim", c.dt_sim},
             {"ctrl_divisor", c.ctrl_divisor},
             {"realtime_factor", c.realtime_factor},
             {"paused", c.paused},
             {"rng_seed", c.rng_seed},
             {"interpolation", to_string(c.interpolation)},
             {"telemetry_rate_hz", c.telemetry_rate_hz}}},
           {"robots", robots},
           {"objects", objects},
           {"duration", s.duration}};
  if (s.machine) doc["fsm"] = machine_to_json(*s.machine);
  if (s.grasp) doc["grasp"] = grasp_to_json(*s.grasp);
  if (!s.script.empty()) {
    Json script = Json::array();
    for (const auto& sc : s.script) script.push_back({{"t", sc.t}, {"cmd", command_to_json(sc.cmd)}});
    doc["script"] = script;
  }
  return doc;
}

}  // namespace simbridge
