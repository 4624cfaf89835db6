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

#include "simbridge/wire.hpp"

#include <algorithm>
#include <cmath>

namespace simbridge {

namespace {

double finite(double x) { return std::isfinite(x) ? x : 0.0; }

}  // namespace

Json encode_hello(const Scenario& scenario) {
  Json objects = Json::array();
  for (const auto& o : scenario.scene.objects()) objects.push_back(o.name);
  Json states = Json::array();
  if (scenario.machine) states = scenario.machine->state_names();
  return Json{{"type", "hello"},
              {"scenario", scenario.name},
              {"joints", scenario.scene.joint_names()},
              {"objects", objects},
              {"states", states},
              {"telemetry_rate_hz", scenario.config.telemetry_rate_hz}};
}

Json encode_state(const Snapshot& s, std::uint64_t seq) {
  Json joints = Json::object();
  for (std::size_t i = 0; i < s.joints.size(); ++i) {
    const JointTelemetry& j = s.joints[i];
    const std::string name = s.joint_names ? (*s.joint_names)[i] : std::to_string(i);
    joints[name] = {{"q", finite(j.q)},         {"qd", finite(j.qd)},
                    {"tau", finite(j.tau)},     {"q_ref", finite(j.q_ref)},
                    {"qd_ref", finite(j.qd_ref)}, {"kp", finite(j.gains.kp)},
                    {"kd", finite(j.gains.kd)}};
  }
  Json objects = Json::object();
  for (std::size_t k = 0; k < s.objects.size(); ++k) {
    const ObjectTelemetry& o = s.objects[k];
    const std::string name = s.object_names ? (*s.object_names)[k] : std::to_string(k);
    objects[name] = {{"z", finite(o.z)}, {"vz", finite(o.vz)}, {"grasped", o.grasped}};
  }
  Json fsm = nullptr;
  if (s.fsm) {
    fsm = {{"state", s.fsm->current},
           {"elapsed", finite(s.t - s.fsm->entered_at)},
           {"terminal", s.fsm->terminal}};
  }
  return Json{{"type", "state"},
              {"seq", seq},
              {"t", finite(s.t)},
              {"scenario", s.scenario ? s.scenario->name : ""},
              {"epoch", s.epoch},
              {"substep", s.substep},
              {"speed", finite(s.speed)},
              {"paused", s.paused},
              {"controller_ticks", s.controller_ticks},
              {"commands_applied", s.commands_applied},
              {"joints", joints},
              {"fsm", fsm},
              {"objects", objects}};
}

std::variant<CommandMessage, WireError> decode_message(std::string_view text) {
  Json doc;
  try {
    doc = parse_json(text);
  } catch (const ParseError& e) {
    return WireError{"malformed", e.what(), nullptr};
  }
  if (!doc.is_object()) return WireError{"malformed", "message must be a JSON object", nullptr};

  Json id = nullptr;
  if (auto it = doc.find("id"); it != doc.end()) {
    if (!it->is_string() && !it->is_number_integer()) {
      return WireError{"type_mismatch", "id must be a string or an integer", nullptr};
    }
    id = *it;
  }
  auto type = doc.find("type");
  if (type == doc.end()) return WireError{"missing_type", "missing type", id};
  if (!type->is_string() || type->get<std::string>() != "cmd") {
    return WireError{"unknown_type", "unknown message type " + type->dump(), id};
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "type" && key != "id" && key != "cmd") {
      return WireError{"unknown_field", "unknown field \"" + key + "\"", id};
    }
  }
  if (id.is_null()) return WireError{"missing_field", "missing id", id};
  auto cmd = doc.find("cmd");
  if (cmd == doc.end()) return WireError{"missing_field", "missing cmd", id};
  try {
    return CommandMessage{id, command_from_json(*cmd)};
  } catch (const CodecError& e) {
    return WireError{e.code(), e.what(), id};
  }
}

Json encode_ack(const Json& id, const EnqueueResult& result, std::uint64_t seq) {
  Json ack{{"type", "ack"}, {"id", id}, {"accepted", result.accepted}, {"seq", seq}};
  if (!result.accepted) ack["reason"] = result.reason;
  return ack;
}

Json encode_error(const WireError& error) {
  Json j{{"type", "error"}, {"code", error.code}, {"message", error.message}};
  if (!error.id.is_null()) j["id"] = error.id;
  return j;
}

// ---------------------------------------------------------------------------

TelemetryDecimator::TelemetryDecimator(double dt_sim, double rate_hz) {
  const double ratio = (1.0 / dt_sim) / rate_hz;
  period_ = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(ratio + 1e-9)));
}

bool TelemetryDecimator::should_emit(const Snapshot& s) {
  const bool changed = !last_substep_ || s.commands_applied != last_commands_ ||
                       s.epoch != last_epoch_ || s.paused != last_paused_ ||
                       s.speed != last_speed_ || s.substep < *last_substep_;
  if (!changed && s.substep - *last_substep_ < period_) return false;
  last_substep_ = s.substep;
  last_commands_ = s.commands_applied;
  last_epoch_ = s.epoch;
  last_paused_ = s.paused;
  last_speed_ = s.speed;
  return true;
}

void ClientQueue::push(std::shared_ptr<const std::string> message) {
  std::lock_guard lock(mutex_);
  if (capacity_ > 0 && queue_.size() >= capacity_) {
    queue_.pop_front();
    ++dropped_;
  }
  queue_.push_back(std::move(message));
}

std::optional<std::shared_ptr<const std::string>> ClientQueue::pop() {
  std::lock_guard lock(mutex_);
  if (queue_.empty()) return std::nullopt;
  auto message = std::move(queue_.front());
  queue_.pop_front();
  return message;
}

std::size_t ClientQueue::size() const {
  std::lock_guard lock(mutex_);
  return queue_.size();
}

std::uint64_t ClientQueue::dropped() const {
  std::lock_guard lock(mutex_);
  return dropped_;
}

void TelemetryHub::publish(const Snapshot& snapshot) {
  std::lock_guard lock(mutex_);
  if (snapshot.scenario && snapshot.scenario != decimator_scenario_) {
    decimator_scenario_ = snapshot.scenario;
    decimator_.emplace(snapshot.scenario->config.dt_sim, snapshot.scenario->config.telemetry_rate_hz);
  }
  if (decimator_ && !decimator_->should_emit(snapshot)) return;
  auto message = std::make_shared<const std::string>(encode_state(snapshot, ++seq_).dump());
  latest_ = message;
  for (const auto& [id, sink] : sinks_) sink(message);
}

std::uint64_t TelemetryHub::subscribe(Sink sink) {
  std::lock_guard lock(mutex_);
  const std::uint64_t id = next_id_++;
  sinks_.emplace(id, std::move(sink));
  return id;
}

void TelemetryHub::unsubscribe(std::uint64_t id) {
  std::lock_guard lock(mutex_);
  sinks_.erase(id);
}

std::size_t TelemetryHub::subscribers() const {
  std::lock_guard lock(mutex_);
  return sinks_.size();
}

std::uint64_t TelemetryHub::seq() const {
  std::lock_guard lock(mutex_);
  return seq_;
}

std::shared_ptr<const std::string> TelemetryHub::latest() const {
  std::lock_guard lock(mutex_);
  return latest_;
}

}  // namespace simbridge
