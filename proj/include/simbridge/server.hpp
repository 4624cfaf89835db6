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

#ifndef SIMBRIDGE_SERVER_HPP_
#define SIMBRIDGE_SERVER_HPP_

// HTTP + WebSocket endpoint on a single port.
//
//   GET  /healthz        liveness, current sim time
//   GET  /api/scenario   the running scenario, descriptions inlined
//   POST /api/scenario   load a scenario document (400 parse, 422 invalid)
//   GET  /api/report     run report so far
//   GET  /ws             WebSocket upgrade; see wire.hpp for messages

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "simbridge/bridge.hpp"
#include "simbridge/wire.hpp"

namespace simbridge {

inline constexpr unsigned short kDefaultPort = 8765;

struct ServerOptions {
  std::string host = "127.0.0.1";
  unsigned short port = kDefaultPort;  // 0 picks a free port
  std::size_t client_queue = 64;       // pending messages per WebSocket client
  std::filesystem::path scenario_dir;  // base for "file" robots in POSTed scenarios
};

struct HttpResult {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Routing for the plain HTTP endpoints, independent of the socket layer.
HttpResult handle_http(Bridge& bridge, std::string_view method, std::string_view target,
                       std::string_view body, const std::filesystem::path& scenario_dir);

class Server {
 public:
  Server(Bridge& bridge, TelemetryHub& hub, ServerOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts serving on a background thread. Throws std::runtime_error
  // when the address cannot be bound.
  void start();
  void stop();
  unsigned short port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace simbridge

#endif  // SIMBRIDGE_SERVER_HPP_
