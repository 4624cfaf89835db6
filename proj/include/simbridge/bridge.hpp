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

#ifndef SIMBRIDGE_BRIDGE_HPP_
#define SIMBRIDGE_BRIDGE_HPP_

// The simulation loop.
//
// Every physics substep (dt_sim) the PD servos run on a reference
// interpolated from the controller's output; every ctrl_divisor substeps the
// controller samples the sensors, advances the state machine and produces
// the next reference. Operator commands are queued from any thread and take
// effect between substeps, which keeps the trajectory a deterministic
// function of the scenario, the seed and the command timing.
//
// Threading: one thread runs the loop (run/iterate/step and the loop-context
// accessors). enqueue, load, snapshot, report, scenario and request_stop may
// be called from any thread.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "simbridge/actuation.hpp"
#include "simbridge/command.hpp"
#include "simbridge/control.hpp"
#include "simbridge/datastore.hpp"
#include "simbridge/fsm.hpp"
#include "simbridge/grasp.hpp"
#include "simbridge/physics.hpp"
#include "simbridge/scenario.hpp"

namespace simbridge {

// Datastore flag set once the grasp monitor has attached the object.
inline constexpr std::string_view kGraspLatchedKey = "grasp.latched";

// Encoder/torque/force readings with per-sensor gaussian noise and
// floor-to-step quantization. Joints without an encoder or torque sensor read
// exactly. Noise is drawn in sensor order, only for sensors with noise_std > 0.
SensorFrame sample_sensors(const PhysicsState& state, const SceneModel& scene, std::mt19937_64& rng);

// floor(x / step) * step; identity for step == 0.
double quantize(double x, double step);

struct JointTelemetry {
  double q = 0.0;
  double qd = 0.0;
  double tau = 0.0;  // joint-side actuator torque applied in the last substep
  double q_ref = 0.0;
  double qd_ref = 0.0;
  ServoGains gains;

  bool operator==(const JointTelemetry&) const = default;
};

struct ObjectTelemetry {
  double z = 0.0;
  double vz = 0.0;
  bool grasped = false;

  bool operator==(const ObjectTelemetry&) const = default;
};

// Immutable copy of the loop state after one substep.
struct Snapshot {
  std::shared_ptr<const Scenario> scenario;
  std::uint64_t substep = 0;  // since the last reset
  double t = 0.0;
  std::shared_ptr<const std::vector<std::string>> joint_names;
  std::shared_ptr<const std::vector<std::string>> object_names;
  std::vector<JointTelemetry> joints;
  std::vector<ObjectTelemetry> objects;
  std::optional<FsmStatus> fsm;
  double speed = 0.0;  // realtime factor, 0 = unlimited
  bool paused = false;
  std::uint64_t controller_ticks = 0;
  std::uint64_t commands_applied = 0;  // cumulative
  std::uint64_t epoch = 0;             // bumped by reset and scenario load

  bool operator==(const Snapshot& o) const {
    auto names_eq = [](const auto& a, const auto& b) {
      return (a == nullptr || b == nullptr) ? a == b : *a == *b;
    };
    return scenario == o.scenario && substep == o.substep && t == o.t && names_eq(joint_names, o.joint_names) &&
           names_eq(object_names, o.object_names) && joints == o.joints && objects == o.objects &&
           fsm == o.fsm && speed == o.speed && paused == o.paused &&
           controller_ticks == o.controller_ticks && commands_applied == o.commands_applied &&
           epoch == o.epoch;
  }
};

struct TransitionRecord {
  double t = 0.0;
  std::string from;
  std::string to;
  std::string cause;  // "criteria", "timeout" or "operator"

  bool operator==(const TransitionRecord&) const = default;
};

struct RunReport {
  std::string scenario;
  double final_t = 0.0;
  std::uint64_t substeps = 0;
  std::uint64_t controller_ticks = 0;
  int ctrl_divisor = 1;
  double physics_rate_hz = 0.0;
  double pd_rate_hz = 0.0;
  double controller_rate_hz = 0.0;
  std::optional<std::string> fsm_state;
  bool terminal = false;
  std::vector<TransitionRecord> transitions;
  std::map<std::string, ObjectTelemetry> objects;
  std::uint64_t tick_overruns = 0;
  double max_tick_seconds = 0.0;
  double max_loop_overrun_s = 0.0;
  double wall_time_s = 0.0;
  std::string stop_reason;
};

Json report_to_json(const RunReport& report);

// Observer of the controller-rate trajectory. Called on the loop thread.
class LogSink {
 public:
  virtual ~LogSink() = default;
  // Start of a run, and again whenever a new scenario is loaded.
  virtual void on_start(const Scenario& scenario) = 0;
  // State right after a controller tick; `refs` is the reference the
  // controller just produced.
  virtual void on_tick(std::uint64_t tick, const PhysicsState& state, const ControlOutput& refs,
                       const std::optional<FsmStatus>& fsm) = 0;
  virtual void on_event(double t, const Json& event) = 0;
  virtual void on_end(const RunReport& report) = 0;
};

struct StopCondition {
  double max_time = std::numeric_limits<double>::infinity();
  bool stop_on_terminal = false;
};

struct EnqueueResult {
  bool accepted = false;
  std::string reason;
};

class Bridge {
 public:
  using SnapshotObserver = std::function<void(const std::shared_ptr<const Snapshot>&)>;

  // Throws ValidationError if the scenario's machine or grasp setup is invalid.
  explicit Bridge(Scenario scenario);
  ~Bridge();

  Bridge(const Bridge&) = delete;
  Bridge& operator=(const Bridge&) = delete;

  // --- any thread --------------------------------------------------------

  // Validates against the current scenario and queues the command.
  EnqueueResult enqueue(Command cmd);
  // Replaces the scenario and resets at the next substep boundary.
  void load(Scenario scenario);
  std::shared_ptr<const Snapshot> snapshot() const;
  std::shared_ptr<const Scenario> scenario() const;
  RunReport report() const;
  void request_stop();

  // --- loop thread -------------------------------------------------------

  void set_log_sink(LogSink* sink) { log_ = sink; }
  // Called after every published snapshot.
  void set_snapshot_observer(SnapshotObserver observer) { observer_ = std::move(observer); }

  // Runs until the stop condition, checked at controller-period boundaries,
  // or request_stop(). Paces to wall time when the realtime factor is > 0.
  RunReport run(const StopCondition& stop);

  // One loop iteration without pacing: drains commands, then advances one
  // substep unless paused (a pending StepOnce budget still advances).
  // Returns whether a substep ran.
  bool iterate();

  // Advances one substep unconditionally, then drains commands.
  void step();

  const PhysicsState& physics() const { return state_; }
  const ControlOutput& references() const { return refs_; }
  const MotorCommands& last_commands() const { return commands_; }
  const std::optional<FsmStatus>& fsm_status() const { return fsm_; }
  Datastore& datastore() { return store_; }
  const Datastore& datastore() const { return store_; }
  bool paused() const { return paused_; }
  double speed() const { return speed_; }
  std::uint64_t total_substeps() const { return total_substeps_; }
  std::uint64_t total_ticks() const { return total_ticks_; }
  ServoGains gains(std::size_t joint) const;

 private:
  using QueueItem = std::variant<Command, std::shared_ptr<const Scenario>>;

  void install(std::shared_ptr<const Scenario> scenario);
  void reset_state();
  void register_callbacks();
  void advance();
  void controller_tick();
  bool drain();
  void apply(const Command& cmd);
  void publish();
  void record_transition(const std::string& from, const std::string& to, const std::string& cause);
  void update_report();
  bool at_period_boundary() const;

  std::shared_ptr<const Scenario> scenario_;
  std::shared_ptr<const std::vector<std::string>> joint_names_;
  std::shared_ptr<const std::vector<std::string>> object_names_;
  std::vector<std::string> gain_keys_;

  PhysicsState state_;
  ControlOutput refs_;
  std::vector<RefInterpolator> interpolators_;
  std::vector<ReferenceSample> servo_refs_;  // last interpolated servo reference
  MotorCommands commands_;
  std::optional<FsmStatus> fsm_;
  std::map<std::size_t, double> posture_overrides_;
  std::optional<GraspMonitor> grasp_;
  Datastore store_;
  std::mt19937_64 rng_;

  bool paused_ = false;
  double speed_ = 0.0;
  std::int64_t pending_steps_ = 0;
  std::size_t script_index_ = 0;
  std::uint64_t substep_ = 0;
  std::uint64_t total_substeps_ = 0;
  std::uint64_t total_ticks_ = 0;
  std::uint64_t servo_evaluations_ = 0;
  std::uint64_t commands_applied_ = 0;
  std::uint64_t epoch_ = 0;
  std::uint64_t tick_overruns_ = 0;
  double max_tick_seconds_ = 0.0;
  double max_loop_overrun_ = 0.0;
  std::vector<TransitionRecord> transitions_;
  bool repace_ = true;
  bool running_ = false;
  std::string stop_reason_;

  LogSink* log_ = nullptr;
  SnapshotObserver observer_;

  mutable std::mutex queue_mutex_;
  std::condition_variable queue_cv_;
  std::deque<QueueItem> queue_;
  std::shared_ptr<const Scenario> latest_scenario_;  // guarded by queue_mutex_
  std::atomic<bool> stop_requested_{false};

  mutable std::mutex publish_mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  RunReport report_;
  std::chrono::steady_clock::time_point run_started_;
};

}  // namespace simbridge

#endif  // SIMBRIDGE_BRIDGE_HPP_
