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

#include "simbridge/trajectory_log.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

namespace simbridge {

void JsonlLog::write(const Json& record) { out_ << record.dump() << '\n'; }

void JsonlLog::on_start(const Scenario& scenario) {
  joints_ = scenario.scene.joint_names();
  objects_.clear();
  for (const auto& o : scenario.scene.objects()) objects_.push_back(o.name);
  write(Json{{"type", "header"},
             {"scenario", scenario.name},
             {"dt_sim", scenario.config.dt_sim},
             {"ctrl_divisor", scenario.config.ctrl_divisor},
             {"rng_seed", scenario.config.rng_seed},
             {"interpolation", to_string(scenario.config.interpolation)},
             {"joints", joints_},
             {"objects", objects_}});
}

void JsonlLog::on_tick(std::uint64_t tick, const PhysicsState& state, const ControlOutput& refs,
                       const std::optional<FsmStatus>& fsm) {
  Json joints = Json::object();
  for (std::size_t i = 0; i < joints_.size() && i < state.joints.size(); ++i) {
    const JointRuntime& j = state.joints[i];
    joints[joints_[i]] = {{"q", j.q},
                          {"qd", j.qd},
                          {"tau", j.last_applied},
                          {"q_ref", refs.refs[i].q_ref},
                          {"qd_ref", refs.refs[i].qd_ref}};
  }
  Json objects = Json::object();
  for (std::size_t k = 0; k < objects_.size() && k < state.objects.size(); ++k) {
    const ObjectRuntime& o = state.objects[k];
    objects[objects_[k]] = {{"z", o.z}, {"vz", o.vz}, {"grasped", o.grasped}};
  }
  write(Json{{"type", "tick"},
             {"tick", tick},
             {"t", state.t},
             {"fsm", fsm ? Json(fsm->current) : Json(nullptr)},
             {"joints", joints},
             {"objects", objects}});
}

void JsonlLog::on_event(double t, const Json& event) {
  Json record{{"type", "event"}, {"t", t}};
  record.update(event);
  write(record);
}

void JsonlLog::on_end(const RunReport& r) {
  write(Json{{"type", "end"},
             {"t", r.final_t},
             {"substeps", r.substeps},
             {"controller_ticks", r.controller_ticks},
             {"fsm_state", r.fsm_state ? Json(*r.fsm_state) : Json(nullptr)},
             {"terminal", r.terminal},
             {"stop_reason", r.stop_reason}});
  out_.flush();
}

std::vector<Json> read_jsonl(std::istream& in) {
  std::vector<Json> records;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(parse_json(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(number) + ": " + e.what(), number, e.column());
    }
  }
  return records;
}

std::vector<std::filesystem::path> export_csv(const std::vector<Json>& records,
                                              const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::map<std::string, std::ofstream> joint_files;
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::filesystem::path& path, const char* header) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write \"" + path.string() + "\"");
    f << header << '\n';
    written.push_back(path);
    return f;
  };
  std::ofstream objects = open(dir / "objects.csv", "t,object,z,vz,grasped");

  for (const auto& r : records) {
    if (r.value("type", "") != "tick") continue;
    const std::string t = r.at("t").dump();
    for (const auto& [name, j] : r.at("joints").items()) {
      auto it = joint_files.find(name);
      if (it == joint_files.end()) {
        std::string file = name;
        for (char& c : file) {
          if (c == kNameSeparator) c = '_';
        }
        it = joint_files.emplace(name, open(dir / (file + ".csv"), "t,q,qd,tau,q_ref,qd_ref")).first;
      }
      it->second << t << ',' << j.at("q").dump() << ',' << j.at("qd").dump() << ','
                 << j.at("tau").dump() << ',' << j.at("q_ref").dump() << ','
                 << j.at("qd_ref").dump() << '\n';
    }
    for (const auto& [name, o] : r.at("objects").items()) {
      objects << t << ',' << name << ',' << o.at("z").dump() << ',' << o.at("vz").dump() << ','
              << (o.at("grasped").get<bool>() ? 1 : 0) << '\n';
    }
  }
  return written;
}

}  // namespace simbridge
