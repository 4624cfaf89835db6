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


#include <chrono>
#include <map>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <doctest.h>

#include "simbridge/demo.hpp"
#include "simbridge/server.hpp"
#include "test_support.hpp"

using namespace simbridge;
using namespace simbridge::testing;

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

Scenario small_scenario(std::string name = "small") {
  JointSpec j = free_joint("j", 0.1);
  j.damping = 0.2;
  j.pos_limits = {-1.0, 1.0};
  j.vel_limit = 2.0;
  RobotDescription d = robot("arm", {j}, {servo("j", 10, 1)});
  return plain_scenario(single_scene(d, "arm"), std::move(name));
}

// Loop thread plus server, torn down in reverse order.
struct LiveBridge {
  explicit LiveBridge(Scenario s) : bridge(std::move(s)) {
    bridge.set_snapshot_observer([this](const std::shared_ptr<const Snapshot>& snap) { hub.publish(*snap); });
    ServerOptions o;
    o.port = 0;
    server.emplace(bridge, hub, o);
    server->start();
    loop = std::thread([this] { bridge.run(StopCondition{}); });
  }
  ~LiveBridge() {
    bridge.request_stop();
    loop.join();
    server->stop();
  }

  TelemetryHub hub;
  Bridge bridge;
  std::optional<Server> server;
  std::thread loop;
};

struct HttpReply {
  int status;
  Json body;
};

HttpReply http_request(unsigned short port, http::verb verb, const std::string& target,
                       const std::string& body = "") {
  net::io_context ioc;
  beast::tcp_stream stream(ioc);
  stream.connect(tcp::endpoint(net::ip::make_address("127.0.0.1"), port));
  http::request<http::string_body> req{verb, target, 11};
  req.set(http::field::host, "127.0.0.1");
  req.body() = body;
  req.prepare_payload();
  http::write(stream, req);
  beast::flat_buffer buffer;
  http::response<http::string_body> res;
  http::read(stream, buffer, res);
  beast::error_code ec;
  stream.socket().shutdown(tcp::socket::shutdown_both, ec);
  return {static_cast<int>(res.result_int()), parse_json(res.body())};
}

class WsClient {
 public:
  explicit WsClient(unsigned short port) : ws_(ioc_) {
    net::connect(beast::get_lowest_layer(ws_),
                 std::array{tcp::endpoint(net::ip::make_address("127.0.0.1"), port)});
    ws_.handshake("127.0.0.1", "/ws");
  }
  ~WsClient() {
    beast::error_code ec;
    ws_.close(websocket::close_code::normal, ec);
  }

  Json read() {
    beast::flat_buffer buffer;
    ws_.read(buffer);
    return parse_json(beast::buffers_to_string(buffer.data()));
  }
  std::string read_raw() {
    beast::flat_buffer buffer;
    ws_.read(buffer);
    return beast::buffers_to_string(buffer.data());
  }
  void send(const std::string& text) { ws_.write(net::buffer(text)); }

  // Reads until a message of `type` arrives.
  Json read_until(const std::string& type) {
    for (int i = 0; i < 10000; ++i) {
      Json j = read();
      if (j.at("type") == type) return j;
    }
    FAIL("no message of type " << type);
    return {};
  }

 private:
  net::io_context ioc_;
  websocket::stream<tcp::socket> ws_;
};

}  // namespace

TEST_SUITE("server") {

TEST_CASE("health and report endpoints") {
  Bridge bridge(small_scenario());
  for (int i = 0; i < 10; ++i) bridge.iterate();
  const HttpResult h = handle_http(bridge, "GET", "/healthz", "", {});
  CHECK(h.status == 200);
  const Json hj = parse_json(h.body);
  CHECK(hj.at("status") == "ok");
  CHECK(hj.at("t").get<double>() == doctest::Approx(0.01));
  CHECK(hj.at("scenario") == "small");

  const HttpResult r = handle_http(bridge, "GET", "/api/report?x=1", "", {});
  CHECK(r.status == 200);
  CHECK(parse_json(r.body).at("substeps") == 10);
  CHECK(handle_http(bridge, "POST", "/api/report", "", {}).status == 405);
  CHECK(handle_http(bridge, "DELETE", "/healthz", "", {}).status == 405);
  CHECK(handle_http(bridge, "GET", "/nope", "", {}).status == 404);
}

TEST_CASE("scenario endpoint serves and loads scenarios") {
  Bridge bridge(small_scenario());
  const HttpResult get = handle_http(bridge, "GET", "/api/scenario", "", {});
  REQUIRE(get.status == 200);
  CHECK(get.content_type == "application/json");
  const Scenario echoed = parse_scenario(get.body, {});
  CHECK(echoed.scene.joint_names() == std::vector<std::string>{"arm/j"});

  const std::string replacement = scenario_to_json(small_scenario("other")).dump();
  const HttpResult post = handle_http(bridge, "POST", "/api/scenario", replacement, {});
  CHECK(post.status == 200);
  CHECK(parse_json(post.body).at("scenario") == "other");
  CHECK(bridge.scenario()->name == "other");

  const HttpResult bad = handle_http(bridge, "POST", "/api/scenario", "{\n  \"name\": ,\n}", {});
  CHECK(bad.status == 400);
  CHECK(parse_json(bad.body).at("line") == 2);

  Json invalid = scenario_to_json(small_scenario());
  invalid["config"]["dt_sim"] = -1.0;
  const HttpResult unprocessable = handle_http(bridge, "POST", "/api/scenario", invalid.dump(), {});
  CHECK(unprocessable.status == 422);
  CHECK_FALSE(parse_json(unprocessable.body).at("problems").empty());
  CHECK(bridge.scenario()->name == "other");
  CHECK(handle_http(bridge, "PUT", "/api/scenario", "", {}).status == 405);
}

TEST_CASE("live http over a socket") {
  Scenario s = small_scenario();
  s.config.realtime_factor = 1.0;
  LiveBridge live(std::move(s));
  const unsigned short port = live.server->port();
  REQUIRE(port != 0);
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  const HttpReply h = http_request(port, http::verb::get, "/healthz");
  CHECK(h.status == 200);
  CHECK(h.body.at("t").get<double>() > 0.0);
  CHECK(http_request(port, http::verb::get, "/missing").status == 404);
  const HttpReply post = http_request(port, http::verb::post, "/api/scenario",
                                      scenario_to_json(small_scenario("swapped")).dump());
  CHECK(post.status == 200);
  CHECK(http_request(port, http::verb::get, "/api/scenario").body.at("name") == "swapped");
}

TEST_CASE("websocket hello, telemetry and command acks") {
  Scenario s = small_scenario();
  s.config.realtime_factor = 1.0;
  LiveBridge live(std::move(s));
  WsClient client(live.server->port());

  const Json hello = client.read();
  CHECK(hello.at("type") == "hello");
  CHECK(hello.at("joints") == Json::array({"arm/j"}));

  const Json first = client.read_until("state");
  CHECK(first.at("joints").contains("arm/j"));

  client.send(R"({"type":"cmd","id":"g1","cmd":{"name":"set_gains","joint":"arm/j","kp":33,"kd":2}})");
  const Json ack = client.read_until("ack");
  CHECK(ack.at("id") == "g1");
  CHECK(ack.at("accepted") == true);

  Json state;
  for (int i = 0; i < 200; ++i) {
    state = client.read_until("state");
    if (state.at("joints").at("arm/j").at("kp") == 33.0) break;
  }
  CHECK(state.at("joints").at("arm/j").at("kp") == 33.0);
  CHECK(state.at("commands_applied").get<int>() >= 1);

  client.send(R"({"type":"cmd","id":7,"cmd":{"name":"set_gains","joint":"arm/x","kp":1,"kd":1}})");
  const Json refused = client.read_until("ack");
  CHECK(refused.at("id") == 7);
  CHECK(refused.at("accepted") == false);
  CHECK(refused.at("reason").get<std::string>().find("arm/x") != std::string::npos);

  client.send("{not json");
  const Json err = client.read_until("error");
  CHECK(err.at("code") == "malformed");
}

TEST_CASE("websocket clients see the same telemetry stream") {
  Scenario s = small_scenario();
  s.config.realtime_factor = 1.0;
  LiveBridge live(std::move(s));
  WsClient a(live.server->port());
  WsClient b(live.server->port());
  std::map<std::uint64_t, std::string> seen_a;
  std::map<std::uint64_t, std::string> seen_b;
  std::uint64_t last_a = 0;
  for (int i = 0; i < 30; ++i) {
    const std::string ma = a.read_raw();
    const std::string mb = b.read_raw();
    const Json ja = parse_json(ma);
    const Json jb = parse_json(mb);
    if (ja.at("type") == "state") {
      const auto seq = ja.at("seq").get<std::uint64_t>();
      CHECK(seq > last_a);  // arrival order
      last_a = seq;
      seen_a[seq] = ma;
    }
    if (jb.at("type") == "state") seen_b[jb.at("seq").get<std::uint64_t>()] = mb;
  }
  int common = 0;
  for (const auto& [seq, text] : seen_a) {
    if (auto it = seen_b.find(seq); it != seen_b.end()) {
      CHECK(it->second == text);
      ++common;
    }
  }
  CHECK(common >= 10);
}

TEST_CASE("a taken port is reported") {
  Bridge bridge(small_scenario());
  TelemetryHub hub;
  ServerOptions o;
  o.port = 0;
  Server first(bridge, hub, o);
  first.start();
  o.port = first.port();
  Server second(bridge, hub, o);
  CHECK_THROWS_AS(second.start(), std::runtime_error);
}

}  // TEST_SUITE
