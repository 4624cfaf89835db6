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

#include "simbridge/fsm.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace simbridge {

namespace {

// Slack on time comparisons so that accumulated sums of dt hit thresholds
// that are exact multiples of dt.
constexpr double kTimeSlack = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

}  // namespace

const StateDef* StateMachine::find(std::string_view name) const {
  auto it = std::find_if(states.begin(), states.end(),
                         [&](const StateDef& s) { return s.name == name; });
  return it == states.end() ? nullptr : &*it;
}

std::vector<std::string> StateMachine::state_names() const {
  std::vector<std::string> names;
  for (const auto& s : states) names.push_back(s.name);
  return names;
}

MachineReport validate_machine(const StateMachine& machine, const SceneModel* scene) {
  MachineReport report;
  auto& errors = report.errors;

  std::set<std::string> names;
  for (const auto& s : machine.states) {
    if (s.name.empty()) errors.push_back("state with empty name");
    if (!names.insert(s.name).second) errors.push_back("duplicate state \"" + s.name + "\"");
  }
  if (machine.initial.empty()) {
    errors.push_back("missing initial state");
  } else if (machine.find(machine.initial) == nullptr) {
    errors.push_back("initial state \"" + machine.initial + "\" is not defined");
  }

  auto check_joint = [&](const std::string& where, const std::string& joint) {
    if (scene != nullptr && !scene->joint_index(joint)) {
      errors.push_back(where + ": unknown joint \"" + joint + "\"");
    }
  };

  for (const auto& s : machine.states) {
    const std::string where = "state \"" + s.name + "\"";
    if (!s.next.empty() && machine.find(s.next) == nullptr) {
      errors.push_back(where + ": next state \"" + s.next + "\" is not defined");
    }
    if (!s.terminal && s.next.empty() && (!s.criteria.empty() || s.timeout > 0.0)) {
      errors.push_back(where + ": can complete but has no next state");
    }
    if (s.terminal && !s.next.empty()) {
      report.warnings.push_back(where + ": terminal state ignores next \"" + s.next + "\"");
    }
    if (!(s.timeout >= 0.0)) errors.push_back(where + ": timeout must be >= 0");

    for (const auto& task : s.tasks) {
      if (!(task.stiffness > 0.0) || !(task.damping_ratio >= 0.0) || !(task.weight > 0.0)) {
        errors.push_back(where + ": posture task needs stiffness > 0, damping_ratio >= 0, weight > 0");
      }
      for (const auto& [joint, q] : task.targets) {
        check_joint(where, joint);
        if (scene == nullptr) continue;
        if (auto i = scene->joint_index(joint)) {
          const SceneJoint& sj = scene->joints()[*i];
          if (!sj.bounds.pos.contains(q)) {
            errors.push_back(where + ": target for \"" + joint + "\" is outside controller bounds");
          }
          if (sj.actuator.passive()) {
            errors.push_back(where + ": task targets passive joint \"" + joint + "\"");
          }
        }
      }
    }

    for (const auto& c : s.criteria) {
      std::visit(Overloaded{
                     [&](const TimerCriterion& t) {
                       if (!(t.duration > 0.0)) errors.push_back(where + ": timer needs duration > 0");
                     },
                     [&](const ErrorBelowCriterion& e) {
                       if (!(e.eps > 0.0) || !(e.hold >= 0.0)) {
                         errors.push_back(where + ": error_below needs eps > 0 and hold >= 0");
                       }
                       for (const auto& j : e.joints) check_joint(where, j);
                       if (e.joints.empty() &&
                           std::all_of(s.tasks.begin(), s.tasks.end(),
                                       [](const PostureTask& t) { return t.targets.empty(); })) {
                         errors.push_back(where + ": error_below has no joints to watch");
                       }
                     },
                     [&](const GripperClosedCriterion& g) {
                       if (!(g.aperture_max > 0.0)) {
                         errors.push_back(where + ": gripper_closed needs aperture_max > 0");
                       }
                       check_joint(where, g.joint);
                     },
                     [&](const ObjectHeightCriterion& o) {
                       if (!(o.z_min > 0.0)) errors.push_back(where + ": object_height needs z_min > 0");
                       if (scene != nullptr && !scene->object_index(o.object)) {
                         errors.push_back(where + ": unknown object \"" + o.object + "\"");
                       }
                     },
                     [&](const ContactCriterion& c) {
                       if (!(c.force_min > 0.0)) errors.push_back(where + ": contact needs force_min > 0");
                       if (scene != nullptr) {
                         auto i = scene->sensor_index(c.sensor);
                         if (!i || scene->sensors()[*i].spec.kind != SensorKind::kGripperForce) {
                           errors.push_back(where + ": \"" + c.sensor + "\" is not a gripper_force sensor");
                         }
                       }
                     },
                     [&](const DatastoreFlagCriterion& d) {
                       if (d.key.empty()) errors.push_back(where + ": datastore_flag needs a key");
                     },
                 },
                 c);
    }
  }

  // Reachability from the initial state via successors only; operator
  // transitions can still reach the rest, hence a warning.
  if (const StateDef* start = machine.find(machine.initial)) {
    std::set<std::string> seen{start->name};
    std::deque<const StateDef*> todo{start};
    while (!todo.empty()) {
      const StateDef* s = todo.front();
      todo.pop_front();
      if (s->terminal || s->next.empty()) continue;
      if (const StateDef* n = machine.find(s->next); n != nullptr && seen.insert(n->name).second) {
        todo.push_back(n);
      }
    }
    for (const auto& s : machine.states) {
      if (seen.count(s.name) == 0) {
        report.warnings.push_back("state \"" + s.name + "\" is unreachable from \"" +
                                  machine.initial + "\"");
      }
    }
  }
  return report;
}

FsmStatus initial_status(const StateMachine& machine, double t) {
  const StateDef* s = machine.find(machine.initial);
  if (s == nullptr) throw FsmError("initial state \"" + machine.initial + "\" is not defined");
  return FsmStatus{s->name, t, 0.0, s->terminal};
}

std::span<const PostureTask> active_tasks(const StateMachine& machine, const FsmStatus& status) {
  const StateDef* s = machine.find(status.current);
  if (s == nullptr) return {};
  return s->tasks;
}

double tracking_error(const ErrorBelowCriterion& criterion, const StateDef& state,
                      const SensorFrame& frame, const SceneModel& scene) {
  auto target_of = [&](const std::string& joint) -> std::optional<double> {
    for (const auto& task : state.tasks) {
      if (auto it = task.targets.find(joint); it != task.targets.end()) return it->second;
    }
    return std::nullopt;
  };
  double worst = 0.0;
  auto visit = [&](const std::string& joint) {
    auto target = target_of(joint);
    if (!target) return;
    const double q = frame.joints[scene.require_joint(joint)].q;
    worst = std::max(worst, std::abs(*target - q));
  };
  if (criterion.joints.empty()) {
    for (const auto& task : state.tasks) {
      for (const auto& [joint, q] : task.targets) visit(joint);
    }
  } else {
    for (const auto& joint : criterion.joints) visit(joint);
  }
  return worst;
}

FsmStepResult fsm_step(const FsmStatus& status, const StateMachine& machine,
                       const SensorFrame& frame, double dt_ctrl, const SceneModel& scene,
                       const Datastore* store) {
  if (status.terminal) throw FsmError("state machine already reached terminal \"" + status.current + "\"");
  const StateDef* state = machine.find(status.current);
  if (state == nullptr) throw FsmError("current state \"" + status.current + "\" is not defined");

  FsmStepResult result;
  result.status = status;

  bool below = true;
  bool has_error_criterion = false;
  for (const auto& c : state->criteria) {
    if (const auto* e = std::get_if<ErrorBelowCriterion>(&c)) {
      has_error_criterion = true;
      below = below && tracking_error(*e, *state, frame, scene) < e->eps;
    }
  }
  if (has_error_criterion) {
    result.status.hold_accum = below ? status.hold_accum + dt_ctrl : 0.0;
  }

  const double elapsed = frame.t - status.entered_at;
  auto holds = [&](const Criterion& c) {
    return std::visit(
        Overloaded{
            [&](const TimerCriterion& t) { return elapsed + kTimeSlack >= t.duration; },
            [&](const ErrorBelowCriterion& e) {
              return below && result.status.hold_accum + kTimeSlack >= e.hold;
            },
            [&](const GripperClosedCriterion& g) {
              return frame.joints[scene.require_joint(g.joint)].q <= g.aperture_max;
            },
            [&](const ObjectHeightCriterion& o) {
              auto k = scene.object_index(o.object);
              if (!k) return false;
              const ObjectReading& obj = frame.objects[*k];
              return obj.z >= o.z_min && (!o.require_grasp || obj.grasped);
            },
            [&](const ContactCriterion& c) {
              auto it = frame.gripper_force.find(c.sensor);
              return it != frame.gripper_force.end() && it->second >= c.force_min;
            },
            [&](const DatastoreFlagCriterion& d) {
              if (store == nullptr) return false;
              const bool* flag = store->find<bool>(d.key);
              return flag != nullptr && *flag;
            },
        },
        c);
  };

  const bool complete = !state->criteria.empty() &&
                        std::all_of(state->criteria.begin(), state->criteria.end(), holds);
  const bool timed_out = state->timeout > 0.0 && elapsed + kTimeSlack >= state->timeout;

  if ((complete || timed_out) && !state->next.empty()) {
    const StateDef* next = machine.find(state->next);
    if (next == nullptr) throw FsmError("next state \"" + state->next + "\" is not defined");
    result.status = FsmStatus{next->name, frame.t, 0.0, next->terminal};
    result.transitioned = true;
    result.timed_out = !complete;
    result.tasks = next->tasks;
    return result;
  }
  result.tasks = state->tasks;
  return result;
}

FsmStatus request_transition(const FsmStatus& status, const StateMachine& machine,
                             std::string_view target, double t) {
  if (status.terminal) {
    throw FsmError("cannot transition out of terminal state \"" + status.current + "\"");
  }
  const StateDef* s = machine.find(target);
  if (s == nullptr) {
    throw FsmError("unknown state \"" + std::string(target) + "\"; valid states: " +
                   join_names(machine.state_names()));
  }
  return FsmStatus{s->name, t, 0.0, s->terminal};
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Criterion read_criterion(JsonReader& r, const Json& c) {
  const std::string kind = r.required_string(c, "kind");
  if (kind == "timer") {
    r.expect_keys(c, {"kind", "duration"});
    return TimerCriterion{r.required_number(c, "duration")};
  }
  if (kind == "error_below") {
    r.expect_keys(c, {"kind", "eps", "hold", "joints"});
    ErrorBelowCriterion e;
    e.eps = r.required_number(c, "eps");
    e.hold = r.optional_number(c, "hold", 0.0);
    if (const Json* joints = r.field(c, "joints", false)) {
      if (joints->is_array() &&
          std::all_of(joints->begin(), joints->end(), [](const Json& j) { return j.is_string(); })) {
        e.joints = joints->get<std::vector<std::string>>();
      } else {
        r.fail("joints", "expected an array of joint names");
      }
    }
    return e;
  }
  if (kind == "gripper_closed") {
    r.expect_keys(c, {"kind", "joint", "aperture_max"});
    return GripperClosedCriterion{r.required_string(c, "joint"), r.required_number(c, "aperture_max")};
  }
  if (kind == "object_height") {
    r.expect_keys(c, {"kind", "object", "z_min", "require_grasp"});
    return ObjectHeightCriterion{r.required_string(c, "object"), r.required_number(c, "z_min"),
                                 r.optional_bool(c, "require_grasp", false)};
  }
  if (kind == "contact") {
    r.expect_keys(c, {"kind", "sensor", "force_min"});
    return ContactCriterion{r.required_string(c, "sensor"), r.required_number(c, "force_min")};
  }
  if (kind == "datastore_flag") {
    r.expect_keys(c, {"kind", "key"});
    return DatastoreFlagCriterion{r.required_string(c, "key")};
  }
  r.fail("kind", "unknown criterion \"" + kind + "\"");
  return TimerCriterion{};
}

PostureTask read_task(JsonReader& r, const Json& t, const SceneModel& scene) {
  r.expect_keys(t, {"type", "targets", "stiffness", "damping_ratio", "weight"});
  const std::string type = r.optional_string(t, "type", "posture");
  if (type != "posture") r.fail("type", "unknown task type \"" + type + "\"");
  PostureTask task;
  task.stiffness = r.optional_number(t, "stiffness", task.stiffness);
  task.damping_ratio = r.optional_number(t, "damping_ratio", task.damping_ratio);
  task.weight = r.optional_number(t, "weight", task.weight);
  const Json* targets = r.field(t, "targets", true);
  if (targets == nullptr) return task;
  if (targets->is_string() && targets->get<std::string>() == "default") {
    for (const auto& j : scene.joints()) {
      if (!j.actuator.passive()) task.targets[j.qualified] = j.default_q;
    }
  } else if (targets->is_object()) {
    for (const auto& [joint, q] : targets->items()) {
      if (q.is_number()) {
        task.targets[joint] = q.get<double>();
      } else {
        r.fail("targets." + joint, "expected a number");
      }
    }
  } else {
    r.fail("targets", "expected an object or \"default\"");
  }
  return task;
}

Json criterion_to_json(const Criterion& c) {
  return std::visit(
      Overloaded{
          [](const TimerCriterion& t) { return Json{{"kind", "timer"}, {"duration", t.duration}}; },
          [](const ErrorBelowCriterion& e) {
            Json j{{"kind", "error_below"}, {"eps", e.eps}, {"hold", e.hold}};
            if (!e.joints.empty()) j["joints"] = e.joints;
            return j;
          },
          [](const GripperClosedCriterion& g) {
            return Json{{"kind", "gripper_closed"}, {"joint", g.joint}, {"aperture_max", g.aperture_max}};
          },
          [](const ObjectHeightCriterion& o) {
            return Json{{"kind", "object_height"},
                        {"object", o.object},
                        {"z_min", o.z_min},
                        {"require_grasp", o.require_grasp}};
          },
          [](const ContactCriterion& c) {
            return Json{{"kind", "contact"}, {"sensor", c.sensor}, {"force_min", c.force_min}};
          },
          [](const DatastoreFlagCriterion& d) { return Json{{"kind", "datastore_flag"}, {"key", d.key}}; },
      },
      c);
}

}  // namespace

StateMachine machine_from_json(const Json& doc, JsonReader& r, const SceneModel& scene) {
  StateMachine machine;
  if (!r.check_object(doc)) return machine;
  r.expect_keys(doc, {"initial", "states"});
  machine.initial = r.required_string(doc, "initial");
  const Json* states = r.field(doc, "states", true);
  if (states == nullptr) return machine;
  if (!states->is_array()) {
    r.fail("states", "expected an array");
    return machine;
  }
  for (std::size_t i = 0; i < states->size(); ++i) {
    const Json& s = (*states)[i];
    auto scope = r.scope("states[" + std::to_string(i) + "]");
    if (!r.check_object(s)) continue;
    r.expect_keys(s, {"name", "tasks", "criteria", "timeout", "next", "terminal"});
    StateDef state;
    state.name = r.required_string(s, "name");
    state.timeout = r.optional_number(s, "timeout", 0.0);
    state.next = r.optional_string(s, "next", "");
    state.terminal = r.optional_bool(s, "terminal", false);
    if (const Json* tasks = r.field(s, "tasks", false)) {
      if (!tasks->is_array()) r.fail("tasks", "expected an array");
      for (std::size_t k = 0; tasks->is_array() && k < tasks->size(); ++k) {
        auto inner = r.scope("tasks[" + std::to_string(k) + "]");
        if (r.check_object((*tasks)[k])) state.tasks.push_back(read_task(r, (*tasks)[k], scene));
      }
    }
    if (const Json* criteria = r.field(s, "criteria", false)) {
      if (!criteria->is_array()) r.fail("criteria", "expected an array");
      for (std::size_t k = 0; criteria->is_array() && k < criteria->size(); ++k) {
        auto inner = r.scope("criteria[" + std::to_string(k) + "]");
        if (r.check_object((*criteria)[k])) state.criteria.push_back(read_criterion(r, (*criteria)[k]));
      }
    }
    machine.states.push_back(std::move(state));
  }
  return machine;
}

Json machine_to_json(const StateMachine& machine) {
  Json states = Json::array();
  for (const auto& s : machine.states) {
    Json tasks = Json::array();
    for (const auto& t : s.tasks) {
      tasks.push_back({{"type", "posture"},
                       {"targets", t.targets},
                       {"stiffness", t.stiffness},
                       {"damping_ratio", t.damping_ratio},
                       {"weight", t.weight}});
    }
    Json criteria = Json::array();
    for (const auto& c : s.criteria) criteria.push_back(criterion_to_json(c));
    Json state{{"name", s.name}, {"tasks", tasks}, {"criteria", criteria}};
    if (s.timeout > 0.0) state["timeout"] = s.timeout;
    if (!s.next.empty()) state["next"] = s.next;
    if (s.terminal) state["terminal"] = true;
    states.push_back(std::move(state));
  }
  return Json{{"initial", machine.initial}, {"states", states}};
}

}  // namespace simbridge
