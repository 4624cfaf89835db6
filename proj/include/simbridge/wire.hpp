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

#ifndef SIMBRIDGE_WIRE_HPP_
#define SIMBRIDGE_WIRE_HPP_

// WebSocket message codec and telemetry fan-out.
//
// Server to client:
//   {"type":"hello", "scenario", "joints", "objects", "states", "telemetry_rate_hz"}
//   {"type":"state", "seq", "t", "scenario", "epoch", "substep", "speed", "paused",
//    "controller_ticks", "commands_applied",
//    "joints": {name: {q, qd, tau, q_ref, qd_ref, kp, kd}},
//    "fsm": {state, elapsed, terminal} | null,
//    "objects": {name: {z, vz, grasped}}}
//   {"type":"ack", "id", "accepted", "reason"?, "seq"}
//   {"type":"error", "code", "message", "id"?}
// Client to server:
//   {"type":"cmd", "id": <string|integer>, "cmd": {"name": ..., params}}
//
// Non-finite numbers are sent as 0.

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>

#include "simbridge/bridge.hpp"

namespace simbridge {

Json encode_hello(const Scenario& scenario);
Json encode_state(const Snapshot& snapshot, std::uint64_t seq);

struct CommandMessage {
  Json id;
  Command cmd;
};

struct WireError {
  std::string code;  // malformed, missing_type, unknown_type, missing_field, or a command codec code
  std::string message;
  Json id;           // null when unknown
};

std::variant<CommandMessage, WireError> decode_message(std::string_view text);

Json encode_ack(const Json& id, const EnqueueResult& result, std::uint64_t seq);
Json encode_error(const WireError& error);

// Emits every N-th substep, N = max(1, floor((1/dt_sim) / rate_hz)), and
// immediately whenever commands, epoch, pause or speed changed.
class TelemetryDecimator {
 public:
  TelemetryDecimator(double dt_sim, double rate_hz);

  bool should_emit(const Snapshot& snapshot);
  std::uint64_t period() const { return period_; }

 private:
  std::uint64_t period_;
  std::optional<std::uint64_t> last_substep_;
  std::uint64_t last_commands_ = 0;
  std::uint64_t last_epoch_ = 0;
  bool last_paused_ = false;
  double last_speed_ = 0.0;
};

// Bounded per-client message queue; the oldest pending message is dropped
// when full.
class ClientQueue {
 public:
  explicit ClientQueue(std::size_t capacity) : capacity_(capacity) {}

  void push(std::shared_ptr<const std::string> message);
  std::optional<std::shared_ptr<const std::string>> pop();
  std::size_t size() const;
  std::uint64_t dropped() const;

 private:
  mutable std::mutex mutex_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  std::size_t capacity_;
  std::uint64_t dropped_ = 0;
};

// Encodes each emitted snapshot once and hands the same buffer to every
// subscriber. seq is global and strictly increasing.
class TelemetryHub {
 public:
  using Sink = std::function<void(const std::shared_ptr<const std::string>&)>;

  // Call from the loop thread for every published snapshot.
  void publish(const Snapshot& snapshot);

  // Returns a subscription id. The sink runs on the publishing thread.
  std::uint64_t subscribe(Sink sink);
  void unsubscribe(std::uint64_t id);
  std::size_t subscribers() const;

  std::uint64_t seq() const;
  // Last encoded state message, if any.
  std::shared_ptr<const std::string> latest() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::uint64_t, Sink> sinks_;
  std::uint64_t next_id_ = 1;
  std::uint64_t seq_ = 0;
  std::shared_ptr<const std::string> latest_;
  std::optional<TelemetryDecimator> decimator_;
  std::shared_ptr<const Scenario> decimator_scenario_;
};

}  // namespace simbridge

#endif  // SIMBRIDGE_WIRE_HPP_
