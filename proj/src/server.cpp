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

#include "simbridge/server.hpp"

#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace simbridge {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

HttpResult json_result(int status, const Json& body) { return HttpResult{status, body.dump(), "application/json"}; }

// Subscriptions owned by live WebSocket sessions, so stop() can detach them
// all before the io context goes away.
class Subscriptions {
 public:
  explicit Subscriptions(TelemetryHub& hub) : hub_(hub) {}

  std::uint64_t add(TelemetryHub::Sink sink) {
    std::lock_guard lock(mutex_);
    if (closed_) return 0;
    const std::uint64_t id = hub_.subscribe(std::move(sink));
    ids_.insert(id);
    return id;
  }

  void remove(std::uint64_t id) {
    std::lock_guard lock(mutex_);
    if (ids_.erase(id) > 0) hub_.unsubscribe(id);
  }

  void close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
    for (auto id : ids_) hub_.unsubscribe(id);
    ids_.clear();
  }

  TelemetryHub& hub() { return hub_; }

 private:
  TelemetryHub& hub_;
  std::mutex mutex_;
  std::set<std::uint64_t> ids_;
  bool closed_ = false;
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, Bridge& bridge, Subscriptions& subs, std::size_t capacity)
      : ws_(std::move(socket)), bridge_(bridge), subs_(subs), queue_(capacity) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    queue_.push(std::make_shared<const std::string>(encode_hello(*bridge_.scenario()).dump()));
    if (auto latest = subs_.hub().latest()) queue_.push(latest);
    std::weak_ptr<WsSession> weak = weak_from_this();
    sub_ = subs_.add([weak](const std::shared_ptr<const std::string>& message) {
      if (auto self = weak.lock()) {
        self->queue_.push(message);
        net::post(self->ws_.get_executor(), [self] { self->flush(); });
      }
    });
    flush();
    do_read();
  }

  void flush() {
    if (writing_ || closed_) return;
    auto next = queue_.pop();
    if (!next) return;
    writing_ = true;
    current_ = std::move(*next);
    ws_.text(true);
    ws_.async_write(net::buffer(*current_),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      self->writing_ = false;
                      self->current_.reset();
                      if (ec) {
                        self->shutdown();
                        return;
                      }
                      self->flush();
                    });
  }

  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      shutdown();
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    Json reply;
    auto decoded = decode_message(text);
    if (auto* msg = std::get_if<CommandMessage>(&decoded)) {
      reply = encode_ack(msg->id, bridge_.enqueue(std::move(msg->cmd)), subs_.hub().seq());
    } else {
      reply = encode_error(std::get<WireError>(decoded));
    }
    queue_.push(std::make_shared<const std::string>(reply.dump()));
    flush();
    do_read();
  }

  void shutdown() {
    if (closed_) return;
    closed_ = true;
    subs_.remove(sub_);
  }

  websocket::stream<beast::tcp_stream> ws_;
  Bridge& bridge_;
  Subscriptions& subs_;
  ClientQueue queue_;
  beast::flat_buffer buffer_;
  std::shared_ptr<const std::string> current_;
  std::uint64_t sub_ = 0;
  bool writing_ = false;
  bool closed_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, Bridge& bridge, Subscriptions& subs, const ServerOptions& options)
      : stream_(std::move(socket)), bridge_(bridge), subs_(subs), options_(options) {}

  void run() { do_read(); }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      beast::error_code ignored;
      stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
      return;
    }
    const std::string target(req_.target());
    if (websocket::is_upgrade(req_)) {
      if (target == "/ws") {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), bridge_, subs_, options_.client_queue)
            ->run(std::move(req_));
        return;
      }
    }

    HttpResult result;
    if (req_.method() == http::verb::options) {
      result = HttpResult{204, "", "text/plain"};
    } else {
      result = handle_http(bridge_, std::string(req_.method_string()), target, req_.body(),
                           options_.scenario_dir);
    }
    auto res = std::make_shared<http::response<http::string_body>>(
        static_cast<http::status>(result.status), req_.version());
    res->set(http::field::server, "simbridge");
    res->set(http::field::content_type, result.content_type);
    res->set(http::field::access_control_allow_origin, "*");
    res->set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
    res->set(http::field::access_control_allow_headers, "Content-Type");
    res->keep_alive(req_.keep_alive());
    res->body() = std::move(result.body);
    res->prepare_payload();
    http::async_write(stream_, *res,
                      [self = shared_from_this(), res](beast::error_code wec, std::size_t) {
                        if (wec) return;
                        if (!res->keep_alive()) {
                          beast::error_code ignored;
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
                          return;
                        }
                        self->do_read();
                      });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  Bridge& bridge_;
  Subscriptions& subs_;
  const ServerOptions& options_;
};

}  // namespace

HttpResult handle_http(Bridge& bridge, std::string_view method, std::string_view target,
                       std::string_view body, const std::filesystem::path& scenario_dir) {
  const std::string_view path = target.substr(0, target.find('?'));
  auto not_allowed = [&] {
    return json_result(405, Json{{"error", "method not allowed"}, {"path", path}});
  };

  if (path == "/healthz") {
    if (method != "GET") return not_allowed();
    auto snap = bridge.snapshot();
    return json_result(200, Json{{"status", "ok"},
                                 {"t", snap ? snap->t : 0.0},
                                 {"scenario", bridge.scenario()->name}});
  }
  if (path == "/api/report") {
    if (method != "GET") return not_allowed();
    return json_result(200, report_to_json(bridge.report()));
  }
  if (path == "/api/scenario") {
    if (method == "GET") return json_result(200, scenario_to_json(*bridge.scenario()));
    if (method != "POST") return not_allowed();
    try {
      Scenario next = parse_scenario(body, scenario_dir);
      const std::string name = next.name;
      bridge.load(std::move(next));
      return json_result(200, Json{{"ok", true}, {"scenario", name}});
    } catch (const ParseError& e) {
      return json_result(400, Json{{"error", "parse"},
                                   {"message", e.what()},
                                   {"line", e.line()},
                                   {"column", e.column()}});
    } catch (const ValidationError& e) {
      return json_result(422, Json{{"error", "validation"}, {"problems", e.problems()}});
    }
  }
  return json_result(404, Json{{"error", "not found"}, {"path", path}});
}

struct Server::Impl {
  Impl(Bridge& b, TelemetryHub& h, ServerOptions o)
      : bridge(b), subs(h), options(std::move(o)), acceptor(ioc) {}

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        if (ec == net::error::operation_aborted) return;
      } else {
        std::make_shared<HttpSession>(std::move(socket), bridge, subs, options)->run();
      }
      accept();
    });
  }

  Bridge& bridge;
  Subscriptions subs;
  ServerOptions options;
  net::io_context ioc{1};
  tcp::acceptor acceptor;
  std::thread thread;
  unsigned short bound_port = 0;
  bool running = false;
};

Server::Server(Bridge& bridge, TelemetryHub& hub, ServerOptions options)
    : impl_(std::make_unique<Impl>(bridge, hub, std::move(options))) {}

Server::~Server() { stop(); }

void Server::start() {
  Impl& s = *impl_;
  if (s.running) return;
  beast::error_code ec;
  const auto address = net::ip::make_address(s.options.host, ec);
  if (ec) throw std::runtime_error("invalid host \"" + s.options.host + "\": " + ec.message());
  const tcp::endpoint endpoint(address, s.options.port);
  s.acceptor.open(endpoint.protocol(), ec);
  if (!ec) s.acceptor.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) s.acceptor.bind(endpoint, ec);
  if (!ec) s.acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    throw std::runtime_error("cannot listen on " + s.options.host + ":" +
                             std::to_string(s.options.port) + ": " + ec.message());
  }
  s.bound_port = s.acceptor.local_endpoint().port();
  s.accept();
  s.running = true;
  s.thread = std::thread([&s] { s.ioc.run(); });
}

void Server::stop() {
  Impl& s = *impl_;
  if (!s.running) return;
  s.running = false;
  s.subs.close();
  net::post(s.ioc, [&s] {
    beast::error_code ignored;
    s.acceptor.close(ignored);
  });
  s.ioc.stop();
  if (s.thread.joinable()) s.thread.join();
}

unsigned short Server::port() const { return impl_->bound_port; }

}  // namespace simbridge
