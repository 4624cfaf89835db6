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

#include "simbridge/bridge.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace simbridge {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using Clock = std::chrono::steady_clock;

constexpr double kTimeSlack = 1e-9;
// Beyond this lag the pacer re-anchors instead of catching up.
constexpr double kMaxCatchUp = 0.25;

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> problems = validate_config(s.config);
  if (s.machine) {
    for (auto& e : validate_machine(*s.machine, &s.scene).errors) problems.push_back("fsm: " + e);
  }
  if (s.grasp) {
    for (auto& e : validate_grasp(*s.grasp, s.scene)) problems.push_back(std::move(e));
  }
  return problems;
}

double seconds(Clock::duration d) { return std::chrono::duration<double>(d).count(); }

}  // namespace

double quantize(double x, double step) {
  if (!(step > 0.0)) return x;
  // The tiny offset keeps values already on the grid from dropping a step.
  return std::floor(x / step + 1e-9) * step;
}

SensorFrame sample_sensors(const PhysicsState& state, const SceneModel& scene, std::mt19937_64& rng) {
  SensorFrame frame;
  frame.t = state.t;
  frame.joints.reserve(state.joints.size());
  for (const auto& j : state.joints) frame.joints.push_back({j.q, j.qd, j.last_applied});
  frame.objects.reserve(state.objects.size());
  for (const auto& o : state.objects) frame.objects.push_back({o.z, o.vz, o.grasped});
  frame.ground_truth = state.joints;

  std::normal_distribution<double> unit(0.0, 1.0);
  for (const auto& sensor : scene.sensors()) {
    const SensorSpec& spec = sensor.spec;
    auto measure = [&](double x) {
      if (spec.noise_std > 0.0) x += spec.noise_std * unit(rng);
      return quantize(x, spec.quantization);
    };
    switch (spec.kind) {
      case SensorKind::kEncoder:
        if (sensor.joint) frame.joints[*sensor.joint].q = measure(state.joints[*sensor.joint].q);
        break;
      case SensorKind::kJointTorque:
        if (sensor.joint) {
          frame.joints[*sensor.joint].tau = measure(state.joints[*sensor.joint].last_applied);
        }
        break;
      case SensorKind::kGripperForce: {
        double force = 0.0;
        if (sensor.joint) {
          for (const auto& o : state.objects) {
            if (o.grasped && o.gripper_joint == *sensor.joint) force += o.grip_force;
          }
        } else if (sensor.object) {
          const ObjectRuntime& o = state.objects[*sensor.object];
          if (o.grasped) force = o.grip_force;
        }
        frame.gripper_force[sensor.qualified] = measure(force);
        break;
      }
      case SensorKind::kImuStub:
      case SensorKind::kGroundTruth:
        break;
    }
  }
  return frame;
}

Json report_to_json(const RunReport& r) {
  Json transitions = Json::array();
  for (const auto& tr : r.transitions) {
    transitions.push_back({{"t", tr.t}, {"from", tr.from}, {"to", tr.to}, {"cause", tr.cause}});
  }
  Json objects = Json::object();
  for (const auto& [name, o] : r.objects) {
    objects[name] = {{"z", o.z}, {"vz", o.vz}, {"grasped", o.grasped}};
  }
  return Json{{"scenario", r.scenario},
              {"final_t", r.final_t},
              {"substeps", r.substeps},
              {"controller_ticks", r.controller_ticks},
              {"ctrl_divisor", r.ctrl_divisor},
              {"physics_rate_hz", r.physics_rate_hz},
              {"pd_rate_hz", r.pd_rate_hz},
              {"controller_rate_hz", r.controller_rate_hz},
              {"fsm_state", r.fsm_state ? Json(*r.fsm_state) : Json(nullptr)},
              {"terminal", r.terminal},
              {"transitions", transitions},
              {"objects", objects},
              {"tick_overruns", r.tick_overruns},
              {"max_tick_seconds", r.max_tick_seconds},
              {"max_loop_overrun_s", r.max_loop_overrun_s},
              {"wall_time_s", r.wall_time_s},
              {"stop_reason", r.stop_reason}};
}

// ---------------------------------------------------------------------------

Bridge::Bridge(Scenario scenario) {
  if (auto problems = validate_scenario(scenario); !problems.empty()) {
    throw ValidationError(std::move(problems));
  }
  install(std::make_shared<const Scenario>(std::move(scenario)));
  publish();
}

Bridge::~Bridge() = default;

EnqueueResult Bridge::enqueue(Command cmd) {
  std::shared_ptr<const Scenario> current;
  {
    std::lock_guard lock(queue_mutex_);
    current = latest_scenario_;
  }
  if (auto reason = check_command(cmd, *current)) return {false, *reason};
  if (std::holds_alternative<Transition>(cmd)) {
    auto snap = snapshot();
    if (snap && snap->fsm && snap->fsm->terminal) {
      return {false, "state machine is in terminal state \"" + snap->fsm->current + "\""};
    }
  }
  {
    std::lock_guard lock(queue_mutex_);
    queue_.emplace_back(std::move(cmd));
  }
  queue_cv_.notify_all();
  return {true, ""};
}

void Bridge::load(Scenario scenario) {
  if (auto problems = validate_scenario(scenario); !problems.empty()) {
    throw ValidationError(std::move(problems));
  }
  auto ptr = std::make_shared<const Scenario>(std::move(scenario));
  {
    std::lock_guard lock(queue_mutex_);
    latest_scenario_ = ptr;
    queue_.emplace_back(std::move(ptr));
  }
  queue_cv_.notify_all();
}

std::shared_ptr<const Snapshot> Bridge::snapshot() const {
  std::lock_guard lock(publish_mutex_);
  return snapshot_;
}

std::shared_ptr<const Scenario> Bridge::scenario() const {
  std::lock_guard lock(queue_mutex_);
  return latest_scenario_;
}

RunReport Bridge::report() const {
  std::lock_guard lock(publish_mutex_);
  return report_;
}

void Bridge::request_stop() {
  stop_requested_ = true;
  queue_cv_.notify_all();
}

ServoGains Bridge::gains(std::size_t joint) const {
  if (const ServoGains* g = store_.find<ServoGains>(gain_keys_[joint])) return *g;
  return scenario_->scene.joints()[joint].actuator.default_gains;
}

// ---------------------------------------------------------------------------

void Bridge::install(std::shared_ptr<const Scenario> scenario) {
  scenario_ = std::move(scenario);
  {
    std::lock_guard lock(queue_mutex_);
    if (!latest_scenario_) latest_scenario_ = scenario_;
  }
  const SceneModel& scene = scenario_->scene;
  joint_names_ = std::make_shared<const std::vector<std::string>>(scene.joint_names());
  std::vector<std::string> objects;
  for (const auto& o : scene.objects()) objects.push_back(o.name);
  object_names_ = std::make_shared<const std::vector<std::string>>(std::move(objects));
  gain_keys_.clear();
  for (const auto& name : *joint_names_) gain_keys_.push_back(gains_key(name));

  store_ = Datastore{};
  register_callbacks();
  speed_ = scenario_->config.realtime_factor;
  paused_ = scenario_->config.paused;
  script_index_ = 0;
  grasp_.reset();
  if (scenario_->grasp) grasp_.emplace(*scenario_->grasp, scene);
  reset_state();
}

void Bridge::reset_state() {
  const Scenario& sc = *scenario_;
  const SceneModel& scene = sc.scene;
  state_ = initial_state(scene);
  refs_ = hold_posture(scene.default_posture());
  interpolators_.assign(scene.joints().size(), RefInterpolator{});
  for (std::size_t i = 0; i < interpolators_.size(); ++i) {
    interpolators_[i] = RefInterpolator{refs_.refs[i], refs_.refs[i], sc.config.ctrl_divisor,
                                        sc.config.interpolation};
  }
  servo_refs_ = refs_.refs;
  commands_.assign(scene.joints().size(), std::nullopt);
  fsm_.reset();
  if (sc.machine) fsm_ = initial_status(*sc.machine, 0.0);
  posture_overrides_.clear();
  if (grasp_) {
    grasp_->reset();
    store_.put_value(kGraspLatchedKey, false);
  }
  for (const auto& key : gain_keys_) {
    if (store_.contains(key)) store_.remove(key);
  }
  rng_.seed(sc.config.rng_seed);
  pending_steps_ = 0;
  substep_ = 0;
  ++epoch_;
}

void Bridge::register_callbacks() {
  store_.put_callable(kGetGainsKey, Signature{{ValueType::kString}, ValueType::kGains},
                      [this](std::span<const Value> args) -> Value {
                        const std::string& joint = std::get<std::string>(args[0]);
                        return gains(scenario_->scene.require_joint(joint));
                      });
  store_.put_callable(
      kSetGainsKey,
      Signature{{ValueType::kString, ValueType::kDouble, ValueType::kDouble}, ValueType::kNone},
      [this](std::span<const Value> args) -> Value {
        const std::string& joint = std::get<std::string>(args[0]);
        const double kp = std::get<double>(args[1]);
        const double kd = std::get<double>(args[2]);
        const std::size_t i = scenario_->scene.require_joint(joint);
        if (scenario_->scene.joints()[i].actuator.passive()) {
          throw std::invalid_argument("joint \"" + joint + "\" is passive");
        }
        if (!std::isfinite(kp) || !std::isfinite(kd) || kp < 0.0 || kd < 0.0) {
          throw std::invalid_argument("gains must be finite and >= 0");
        }
        store_.put_value(gain_keys_[i], ServoGains{kp, kd});
        return std::monostate{};
      });
  store_.put_callable(kCameraKey, Signature{{ValueType::kString}, ValueType::kFrame},
                      [](std::span<const Value> args) -> Value {
                        return FrameDescriptor{std::get<std::string>(args[0]), 640, 480, 3};
                      });
}

bool Bridge::at_period_boundary() const {
  return substep_ % static_cast<std::uint64_t>(scenario_->config.ctrl_divisor) == 0;
}

void Bridge::advance() {
  const Scenario& sc = *scenario_;
  const SceneModel& scene = sc.scene;
  const auto divisor = static_cast<std::uint64_t>(sc.config.ctrl_divisor);
  const int k = static_cast<int>(substep_ % divisor);
  if (k == 0) controller_tick();

  const auto& joints = scene.joints();
  for (std::size_t i = 0; i < joints.size(); ++i) {
    servo_refs_[i] = interpolate(interpolators_[i], k + 1);
    commands_[i] = command_for(joints[i].actuator, gains(i), servo_refs_[i], state_.joints[i].q,
                               state_.joints[i].qd);
  }
  ++servo_evaluations_;
  step_in_place(state_, scene, commands_, sc.config.dt_sim);
  ++substep_;
  ++total_substeps_;
}

void Bridge::controller_tick() {
  const auto started = Clock::now();
  const Scenario& sc = *scenario_;
  const SceneModel& scene = sc.scene;
  const double dt_ctrl = sc.config.dt_ctrl();

  SensorFrame frame = sample_sensors(state_, scene, rng_);
  if (grasp_ && grasp_->update(frame, state_)) {
    store_.put_value(kGraspLatchedKey, true);
    if (log_) {
      log_->on_event(state_.t, Json{{"event", "grasp"}, {"object", grasp_->params().object}});
    }
  }

  std::vector<PostureTask> tasks;
  if (sc.machine && fsm_) {
    if (!fsm_->terminal) {
      FsmStepResult res = fsm_step(*fsm_, *sc.machine, frame, dt_ctrl, scene, &store_);
      if (res.transitioned) {
        record_transition(fsm_->current, res.status.current, res.timed_out ? "timeout" : "criteria");
        posture_overrides_.clear();
      }
      fsm_ = res.status;
    }
    auto active = active_tasks(*sc.machine, *fsm_);
    tasks.assign(active.begin(), active.end());
  } else {
    PostureTask hold;
    const auto posture = scene.default_posture();
    for (std::size_t i = 0; i < scene.joints().size(); ++i) {
      if (!scene.joints()[i].actuator.passive()) hold.targets[scene.joints()[i].qualified] = posture[i];
    }
    tasks.push_back(std::move(hold));
  }

  for (const auto& [index, q] : posture_overrides_) {
    const std::string& name = scene.joints()[index].qualified;
    bool covered = false;
    for (auto& task : tasks) {
      if (auto it = task.targets.find(name); it != task.targets.end()) {
        it->second = q;
        covered = true;
      }
    }
    if (!covered) tasks.push_back(PostureTask{{{name, q}}});
  }

  ControlOutput out = simbridge::controller_tick(frame, tasks, refs_, scene, dt_ctrl);
  for (std::size_t i = 0; i < interpolators_.size(); ++i) {
    interpolators_[i].prev = refs_.refs[i];
    interpolators_[i].next = out.refs[i];
  }
  refs_ = std::move(out);
  ++total_ticks_;

  const double spent = seconds(Clock::now() - started);
  max_tick_seconds_ = std::max(max_tick_seconds_, spent);
  if (spent > dt_ctrl) ++tick_overruns_;
  if (log_) log_->on_tick(total_ticks_ - 1, state_, refs_, fsm_);
}

void Bridge::record_transition(const std::string& from, const std::string& to,
                               const std::string& cause) {
  transitions_.push_back({state_.t, from, to, cause});
  if (log_) {
    log_->on_event(state_.t, Json{{"event", "transition"}, {"from", from}, {"to", to}, {"cause", cause}});
  }
}

bool Bridge::drain() {
  bool applied = false;
  while (script_index_ < scenario_->script.size() &&
         scenario_->script[script_index_].t <= state_.t + kTimeSlack) {
    // Copy: a scripted reset or load must not invalidate the reference.
    const Command cmd = scenario_->script[script_index_++].cmd;
    apply(cmd);
    applied = true;
  }

  std::deque<QueueItem> items;
  {
    std::lock_guard lock(queue_mutex_);
    items.swap(queue_);
  }
  for (auto& item : items) {
    applied = true;
    if (auto* next = std::get_if<std::shared_ptr<const Scenario>>(&item)) {
      install(*next);
      if (log_) log_->on_start(*scenario_);
    } else {
      apply(std::get<Command>(item));
    }
  }
  return applied;
}

void Bridge::apply(const Command& cmd) {
  const Scenario& sc = *scenario_;
  auto reject = [&](const std::string& reason) {
    if (log_) {
      log_->on_event(state_.t,
                     Json{{"event", "rejected"}, {"cmd", command_to_json(cmd)}, {"reason", reason}});
    }
  };
  if (auto reason = check_command(cmd, sc)) {
    reject(*reason);
    return;
  }
  const double t = state_.t;
  const bool ok = std::visit(
      Overloaded{
          [&](const ApplyPerturbation& c) {
            apply_external_in_place(state_, sc.scene, c.target, c.magnitude, c.duration);
            return true;
          },
          [&](const SetGains& c) {
            store_.call(kSetGainsKey, {Value(c.joint), Value(c.kp), Value(c.kd)});
            return true;
          },
          [&](const SetSpeed& c) {
            speed_ = c.factor;
            repace_ = true;
            return true;
          },
          [&](const Pause& c) {
            paused_ = c.paused;
            if (!paused_) pending_steps_ = 0;
            repace_ = true;
            return true;
          },
          [&](const StepOnce& c) {
            if (paused_) pending_steps_ += c.substeps;
            return true;
          },
          [&](const Transition& c) {
            if (!fsm_ || !sc.machine) {
              reject("scenario has no state machine");
              return false;
            }
            try {
              FsmStatus next = request_transition(*fsm_, *sc.machine, c.state, t);
              record_transition(fsm_->current, next.current, "operator");
              fsm_ = std::move(next);
              posture_overrides_.clear();
            } catch (const FsmError& e) {
              reject(e.what());
              return false;
            }
            return true;
          },
          [&](const SetPostureTarget& c) {
            posture_overrides_[sc.scene.require_joint(c.joint)] = c.position;
            return true;
          },
          [&](const ResetScenario&) {
            reset_state();
            return true;
          },
      },
      cmd);
  if (!ok) return;
  ++commands_applied_;
  if (log_) log_->on_event(t, Json{{"event", "command"}, {"cmd", command_to_json(cmd)}});
}

void Bridge::publish() {
  auto snap = std::make_shared<Snapshot>();
  snap->scenario = scenario_;
  snap->substep = substep_;
  snap->t = state_.t;
  snap->joint_names = joint_names_;
  snap->object_names = object_names_;
  snap->joints.reserve(state_.joints.size());
  for (std::size_t i = 0; i < state_.joints.size(); ++i) {
    const JointRuntime& j = state_.joints[i];
    snap->joints.push_back(
        {j.q, j.qd, j.last_applied, servo_refs_[i].q_ref, servo_refs_[i].qd_ref, gains(i)});
  }
  snap->objects.reserve(state_.objects.size());
  for (const auto& o : state_.objects) snap->objects.push_back({o.z, o.vz, o.grasped});
  snap->fsm = fsm_;
  snap->speed = speed_;
  snap->paused = paused_;
  snap->controller_ticks = total_ticks_;
  snap->commands_applied = commands_applied_;
  snap->epoch = epoch_;
  {
    std::lock_guard lock(publish_mutex_);
    snapshot_ = snap;
  }
  if (paused_ || at_period_boundary()) update_report();
  if (observer_) observer_(snap);
}

void Bridge::update_report() {
  const Scenario& sc = *scenario_;
  RunReport r;
  r.scenario = sc.name;
  r.final_t = state_.t;
  r.substeps = total_substeps_;
  r.controller_ticks = total_ticks_;
  r.ctrl_divisor = sc.config.ctrl_divisor;
  const double sim_elapsed = static_cast<double>(total_substeps_) * sc.config.dt_sim;
  if (sim_elapsed > 0.0) {
    r.physics_rate_hz = static_cast<double>(total_substeps_) / sim_elapsed;
    r.pd_rate_hz = static_cast<double>(servo_evaluations_) / sim_elapsed;
    r.controller_rate_hz = static_cast<double>(total_ticks_) / sim_elapsed;
  }
  if (fsm_) {
    r.fsm_state = fsm_->current;
    r.terminal = fsm_->terminal;
  }
  r.transitions = transitions_;
  for (std::size_t k = 0; k < state_.objects.size(); ++k) {
    const ObjectRuntime& o = state_.objects[k];
    r.objects[(*object_names_)[k]] = {o.z, o.vz, o.grasped};
  }
  r.tick_overruns = tick_overruns_;
  r.max_tick_seconds = max_tick_seconds_;
  r.max_loop_overrun_s = max_loop_overrun_;
  if (running_) r.wall_time_s = seconds(Clock::now() - run_started_);
  r.stop_reason = stop_reason_;
  std::lock_guard lock(publish_mutex_);
  report_ = std::move(r);
}

bool Bridge::iterate() {
  const bool applied = drain();
  if (paused_) {
    if (pending_steps_ > 0) {
      --pending_steps_;
      advance();
      publish();
      return true;
    }
    if (applied) publish();
    return false;
  }
  advance();
  publish();
  return true;
}

void Bridge::step() {
  advance();
  drain();
  publish();
}

RunReport Bridge::run(const StopCondition& stop) {
  run_started_ = Clock::now();
  running_ = true;
  stop_reason_.clear();
  if (log_) log_->on_start(*scenario_);
  publish();

  Clock::time_point anchor_wall = run_started_;
  double anchor_t = state_.t;
  repace_ = true;

  while (true) {
    if (stop_requested_) {
      stop_reason_ = "stopped";
      break;
    }
    if (at_period_boundary()) {
      if (state_.t + kTimeSlack >= stop.max_time) {
        stop_reason_ = "duration";
        break;
      }
      if (stop.stop_on_terminal && fsm_ && fsm_->terminal) {
        stop_reason_ = "terminal";
        break;
      }
    }
    if (!iterate()) {
      std::unique_lock lock(queue_mutex_);
      queue_cv_.wait_for(lock, std::chrono::milliseconds(20),
                         [&] { return !queue_.empty() || stop_requested_; });
      repace_ = true;
      continue;
    }
    if (!(speed_ > 0.0)) continue;

    const auto now = Clock::now();
    if (repace_) {
      anchor_wall = now;
      anchor_t = state_.t;
      repace_ = false;
      continue;
    }
    const auto target =
        anchor_wall + std::chrono::duration_cast<Clock::duration>(
                          std::chrono::duration<double>((state_.t - anchor_t) / speed_));
    if (now < target) {
      std::this_thread::sleep_until(target);
    } else {
      const double late = seconds(now - target);
      max_loop_overrun_ = std::max(max_loop_overrun_, late);
      if (late > kMaxCatchUp) repace_ = true;
    }
  }

  update_report();
  running_ = false;
  RunReport r = report();
  if (log_) log_->on_end(r);
  return r;
}

}  // namespace simbridge
