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

#include "simbridge/app.hpp"
#include "simbridge/demo.hpp"
#include "simbridge/trajectory_log.hpp"
#include "test_support.hpp"

using namespace simbridge;
using namespace simbridge::testing;

namespace {

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name,
                                 const std::string& text) {
  const auto p = dir / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured run(const RunOptions& o) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_command(o, out, err);
  return {code, out.str(), err.str()};
}

Captured validate(const std::filesystem::path& p, bool lenient = false) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = validate_command(p, lenient, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("app") {

TEST_CASE("validate accepts the demo and reports counts") {
  const Captured c = validate(source_dir() / "scenarios" / "grasp.json");
  CHECK(c.code == kExitOk);
  CHECK(c.out.find("4 joints, 1 objects, 7 states") != std::string::npos);
}

TEST_CASE("validate exit codes") {
  const auto dir = temp_dir("validate");
  CHECK(validate(dir / "missing.json").code == kExitInvalid);
  const Captured syntax = validate(write_file(dir, "syntax.json", "{\n\"name\": \"x\",,\n}"));
  CHECK(syntax.code == kExitInvalid);
  CHECK(syntax.err.find("syntax.json:2:") != std::string::npos);

  Json dangling = grasp_scenario_json();
  dangling["fsm"]["states"][1]["next"] = "Nowhere";
  const Captured d = validate(write_file(dir, "dangling.json", dangling.dump()));
  CHECK(d.code == kExitInvalid);
  CHECK(d.err.find("Nowhere") != std::string::npos);

  Json extra = grasp_scenario_json();
  extra["colour"] = "red";
  CHECK(validate(write_file(dir, "extra.json", extra.dump())).code == kExitInvalid);
  const Captured lenient = validate(dir / "extra.json", true);
  CHECK(lenient.code == kExitOk);
  std::filesystem::remove_all(dir);
}

TEST_CASE("headless run writes log and report") {
  const auto dir = temp_dir("run");
  RunOptions o;
  o.scenario = source_dir() / "scenarios" / "grasp.json";
  o.log = dir / "run.jsonl";
  o.report = dir / "report.json";
  const Captured c = run(o);
  CHECK(c.code == kExitOk);
  CHECK(c.out.find("fsm=Done (terminal)") != std::string::npos);
  const Json report = parse_json(read_file(*o.report));
  CHECK(report.at("fsm_state") == "Done");
  CHECK(report.at("terminal") == true);
  CHECK(report.at("objects").at("box").at("z").get<double>() >= 0.85);
  std::ifstream log(*o.log);
  const auto records = read_jsonl(log);
  CHECK(records.front().at("type") == "header");
  CHECK(records.back().at("type") == "end");
  CHECK(records.back().at("fsm_state") == "Done");

  std::ostringstream out;
  std::ostringstream err;
  CHECK(export_command(*o.log, dir / "csv", out, err) == kExitOk);
  CHECK(std::filesystem::exists(dir / "csv" / "arm_lift.csv"));
  CHECK(out.str().find("objects.csv") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("zero duration gives header and end only") {
  const auto dir = temp_dir("zero");
  RunOptions o;
  o.scenario = source_dir() / "scenarios" / "grasp.json";
  o.duration = 0.0;
  o.log = dir / "zero.jsonl";
  CHECK(run(o).code == kExitOk);
  std::ifstream log(*o.log);
  const auto records = read_jsonl(log);
  REQUIRE(records.size() == 2);
  CHECK(records[0].at("type") == "header");
  CHECK(records[1].at("type") == "end");
  CHECK(records[1].at("t") == 0.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("missing the terminal state is a runtime failure") {
  RunOptions o;
  o.scenario = source_dir() / "scenarios" / "grasp.json";
  o.duration = 1.0;
  const Captured c = run(o);
  CHECK(c.code == kExitRuntime);
  CHECK(c.err.find("terminal state not reached") != std::string::npos);
}

TEST_CASE("run rejects bad input") {
  const auto dir = temp_dir("bad");
  RunOptions o;
  o.scenario = dir / "absent.json";
  CHECK(run(o).code == kExitInvalid);
  o.scenario = source_dir() / "scenarios" / "grasp.json";
  o.duration = -1.0;
  CHECK(run(o).code == kExitInvalid);
  o.duration = 0.1;
  o.log = dir / "no" / "such" / "dir" / "x.jsonl";
  CHECK(run(o).code == kExitInvalid);
  std::filesystem::remove_all(dir);
}

TEST_CASE("seed override changes the log") {
  const auto dir = temp_dir("seed");
  RunOptions o;
  o.scenario = source_dir() / "scenarios" / "grasp.json";
  o.duration = 0.5;
  o.log = dir / "a.jsonl";
  run(o);
  o.log = dir / "b.jsonl";
  run(o);
  o.seed = 99;
  o.log = dir / "c.jsonl";
  run(o);
  CHECK(read_file(dir / "a.jsonl") == read_file(dir / "b.jsonl"));
  CHECK(read_file(dir / "a.jsonl") != read_file(dir / "c.jsonl"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("export errors") {
  const auto dir = temp_dir("export");
  std::ostringstream out;
  std::ostringstream err;
  CHECK(export_command(dir / "none.jsonl", dir / "csv", out, err) == kExitInvalid);
  write_file(dir, "broken.jsonl", "{\"type\":\"header\"}\nnot json\n");
  CHECK(export_command(dir / "broken.jsonl", dir / "csv", out, err) == kExitInvalid);
  CHECK(err.str().find("line 2") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("demo-scenario matches the checked-in file") {
  std::ostringstream out;
  std::ostringstream err;
  CHECK(demo_scenario_command(std::nullopt, out, err) == kExitOk);
  CHECK(out.str() == read_file(source_dir() / "scenarios" / "grasp.json"));
  const auto dir = temp_dir("demo");
  CHECK(demo_scenario_command(dir / "g.json", out, err) == kExitOk);
  CHECK(read_file(dir / "g.json") == out.str());
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
