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


#include <fstream>
#include <sstream>

#include <doctest.h>

#include "simbridge/demo.hpp"
#include "simbridge/trajectory_log.hpp"
#include "test_support.hpp"

using namespace simbridge;
using namespace simbridge::testing;

namespace {

std::vector<Json> run_logged(Scenario s, double duration) {
  std::stringstream out;
  JsonlLog log(out);
  Bridge bridge(std::move(s));
  bridge.set_log_sink(&log);
  bridge.run(StopCondition{duration, true});
  return read_jsonl(out);
}

std::vector<std::string> lines_of(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_SUITE("log") {

TEST_CASE("one tick record per controller tick") {
  Scenario s = plain_scenario(servo_scene(), "logged");
  const auto records = run_logged(s, 0.5);
  REQUIRE(records.size() >= 3);
  CHECK(records.front().at("type") == "header");
  CHECK(records.front().at("scenario") == "logged");
  CHECK(records.front().at("joints") == Json::array({"r/j"}));
  CHECK(records.front().at("ctrl_divisor") == 5);
  CHECK(records.back().at("type") == "end");
  CHECK(records.back().at("stop_reason") == "duration");
  CHECK(records.back().at("controller_ticks") == 100);

  std::uint64_t expected = 0;
  for (const auto& r : records) {
    if (r.at("type") != "tick") continue;
    CHECK(r.at("tick") == expected);
    // Ticks are logged at the start of their period.
    CHECK(r.at("t").get<double>() == doctest::Approx(0.005 * static_cast<double>(expected)));
    const Json& j = r.at("joints").at("r/j");
    for (const char* key : {"q", "qd", "tau", "q_ref", "qd_ref"}) CHECK(j.at(key).is_number());
    CHECK(r.at("fsm").is_null());
    ++expected;
  }
  CHECK(expected == 100);
}

TEST_CASE("events are logged with their time") {
  Scenario s = build_grasp_scenario();
  s.script.push_back({0.2, SetGains{"arm/elbow", 2.5, 0.06}});
  const auto records = run_logged(s, 30.0);
  std::vector<std::string> transitions;
  bool saw_command = false;
  bool saw_grasp = false;
  for (const auto& r : records) {
    if (r.at("type") != "event") continue;
    if (r.at("event") == "transition") transitions.push_back(r.at("to"));
    if (r.at("event") == "command") {
      saw_command = true;
      CHECK(r.at("t").get<double>() == doctest::Approx(0.2));
      CHECK(r.at("cmd").at("name") == "set_gains");
    }
    if (r.at("event") == "grasp") saw_grasp = true;
  }
  CHECK(saw_command);
  CHECK(saw_grasp);
  CHECK(transitions ==
        std::vector<std::string>{"PreGrasp", "OpenGripper", "Reach", "CloseGripper", "Lift", "Done"});
  CHECK(records.back().at("fsm_state") == "Done");
  CHECK(records.back().at("terminal") == true);
}

TEST_CASE("read_jsonl reports the failing line") {
  std::istringstream ok("{\"a\":1}\n\n  \n{\"b\":2}\n");
  CHECK(read_jsonl(ok).size() == 2);
  std::istringstream bad("{\"a\":1}\n{\"b\":2}\n{oops}\n");
  try {
    read_jsonl(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("csv export writes one file per joint") {
  const auto records = run_logged(build_grasp_scenario(), 1.0);
  const auto dir = temp_dir("csv");
  const auto files = export_csv(records, dir);
  CHECK(files.size() == 5);
  for (const char* name : {"arm_shoulder.csv", "arm_elbow.csv", "arm_lift.csv", "arm_gripper.csv", "objects.csv"}) {
    CHECK(std::filesystem::exists(dir / name));
  }
  std::size_t ticks = 0;
  const Json* last = nullptr;
  for (const auto& r : records) {
    if (r.at("type") == "tick") {
      ++ticks;
      last = &r;
    }
  }
  const auto lift = lines_of(dir / "arm_lift.csv");
  REQUIRE(lift.size() == ticks + 1);
  CHECK(lift[0] == "t,q,qd,tau,q_ref,qd_ref");
  const Json& j = last->at("joints").at("arm/lift");
  const std::string expected = last->at("t").dump() + "," + j.at("q").dump() + "," + j.at("qd").dump() + "," +
                               j.at("tau").dump() + "," + j.at("q_ref").dump() + "," + j.at("qd_ref").dump();
  CHECK(lift.back() == expected);

  const auto objects = lines_of(dir / "objects.csv");
  CHECK(objects.size() == ticks + 1);
  CHECK(objects[0] == "t,object,z,vz,grasped");
  CHECK(objects[1].find(",box,") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv numbers round trip exactly") {
  const auto records = run_logged(plain_scenario(servo_scene(), "exact"), 0.2);
  const auto dir = temp_dir("csv-exact");
  export_csv(records, dir);
  const auto lines = lines_of(dir / "r_j.csv");
  std::size_t row = 1;
  for (const auto& r : records) {
    if (r.at("type") != "tick") continue;
    REQUIRE(row < lines.size());
    std::istringstream cells(lines[row++]);
    std::string cell;
    std::getline(cells, cell, ',');
    CHECK(std::stod(cell) == r.at("t").get<double>());
    std::getline(cells, cell, ',');
    CHECK(std::stod(cell) == r.at("joints").at("r/j").at("q").get<double>());
  }
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
