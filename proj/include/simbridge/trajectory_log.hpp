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

#ifndef SIMBRIDGE_TRAJECTORY_LOG_HPP_
#define SIMBRIDGE_TRAJECTORY_LOG_HPP_

// JSON-lines trajectory log and its CSV export.
//
// One record per line, each with a "type":
//   header  scenario name, dt_sim, ctrl_divisor, rng_seed, joint and object names
//   tick    t, tick index, fsm state, per-joint q/qd/tau/q_ref/qd_ref, objects
//   event   command, rejected, transition, grasp
//   end     final t, counters, fsm state, stop reason
// Nothing wall-clock dependent is written, so equal runs give equal bytes.

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "simbridge/bridge.hpp"

namespace simbridge {

class JsonlLog : public LogSink {
 public:
  explicit JsonlLog(std::ostream& out) : out_(out) {}

  void on_start(const Scenario& scenario) override;
  void on_tick(std::uint64_t tick, const PhysicsState& state, const ControlOutput& refs,
               const std::optional<FsmStatus>& fsm) override;
  void on_event(double t, const Json& event) override;
  void on_end(const RunReport& report) override;

 private:
  void write(const Json& record);

  std::ostream& out_;
  std::vector<std::string> joints_;
  std::vector<std::string> objects_;
};

// Parses a JSONL stream; blank lines are skipped. Throws ParseError with the
// 1-based line number.
std::vector<Json> read_jsonl(std::istream& in);

// Writes <dir>/<joint>.csv (t,q,qd,tau,q_ref,qd_ref; '/' in names becomes
// '_') and <dir>/objects.csv (t,object,z,vz,grasped) from the tick records.
// Returns the files written.
std::vector<std::filesystem::path> export_csv(const std::vector<Json>& records,
                                              const std::filesystem::path& dir);

}  // namespace simbridge

#endif  // SIMBRIDGE_TRAJECTORY_LOG_HPP_
