#include "erd/service/server.hpp"

#include <sys/socket.h>

#include <atomic>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace erd::service {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;
using nlohmann::json;

std::string mime_type(const std::string& path) {
  const auto ext = std::filesystem::path(path).extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
  if (ext == ".css") return "text/css; charset=utf-8";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".map" || ext == ".txt") return "text/plain; charset=utf-8";
  return "application/octet-stream";
}

struct Server::Impl {
  SessionManager& sessions;
  ServerOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::thread accept_thread;
  std::mutex mutex;
  std::condition_variable stopped_cv;
  bool stopped = false;
  bool running = false;
  std::uint16_t bound_port = 0;
  std::vector<std::thread> connections;
  std::vector<std::shared_ptr<tcp::socket>> sockets;

  Impl(SessionManager& s, ServerOptions o) : sessions(s), options(std::move(o)) {}

  void accept_next() {
    auto socket = std::make_shared<tcp::socket>(ioc);
    acceptor.async_accept(*socket, [this, socket](beast::error_code ec) {
      if (ec) return;  // acceptor closed
      {
        std::lock_guard lock(mutex);
        if (stopped) return;
        sockets.push_back(socket);
        connections.emplace_back([this, socket] { serve(socket); });
      }
      accept_next();
    });
  }

  http::response<http::string_body> respond(const http::request<http::string_body>& req) {
    http::response<http::string_body> res{http::status::ok, req.version()};
    res.set(http::field::server, "erd");
    res.set(http::field::access_control_allow_origin, "*");
    res.keep_alive(req.keep_alive());
    auto send_json = [&](http::status status, const json& body) {
      res.result(status);
      res.set(http::field::content_type, "application/json");
      res.body() = body.dump(-1, ' ', false, json::error_handler_t::replace);
    };
    const std::string target(req.target());

    if (target == "/api/sessions") {
      if (req.method() != http::verb::post) {
        send_json(http::status::method_not_allowed, {{"error", "use POST"}});
      } else {
        json request = {{"type", "create"}, {"request_id", nullptr}};
        if (!req.body().empty()) {
          try {
            request["payload"] = json::parse(req.body());
          } catch (const json::parse_error& e) {
            request = nullptr;
            send_json(http::status::bad_request,
                      {{"type", "error"},
                       {"request_id", nullptr},
                       {"payload", {{"code", code::kBadRequest}, {"message", e.what()}, {"details", json::array()}}}});
          }
        }
        if (!request.is_null()) {
          const json out = sessions.handle(request);
          send_json(out.at("type") == "error" ? http::status::bad_request : http::status::ok, out);
        }
      }
    } else if (target == "/api/health") {
      send_json(http::status::ok,
                {{"status", "ok"}, {"sessions", sessions.size()}, {"protocol_version", kProtocolVersion}});
    } else if (req.method() == http::verb::get && !options.static_dir.empty()) {
      std::string rel = target.substr(0, target.find('?'));
      if (rel == "/" || rel.empty()) rel = "/index.html";
      const auto root = std::filesystem::weakly_canonical(options.static_dir);
      const auto file = std::filesystem::weakly_canonical(root / rel.substr(1));
      const auto [r, f] = std::mismatch(root.begin(), root.end(), file.begin(), file.end());
      std::ifstream in(file, std::ios::binary);
      if (r != root.end() || !std::filesystem::is_regular_file(file) || !in) {
        res.result(http::status::not_found);
        res.set(http::field::content_type, "text/plain; charset=utf-8");
        res.body() = "not found\n";
      } else {
        std::ostringstream body;
        body << in.rdbuf();
        res.set(http::field::content_type, mime_type(file.string()));
        res.body() = body.str();
      }
    } else {
      res.result(http::status::not_found);
      res.set(http::field::content_type, "text/plain; charset=utf-8");
      res.body() = "not found\n";
    }
    res.prepare_payload();
    return res;
  }

  void serve_websocket(tcp::socket& socket, const http::request<http::string_body>& req) {
    websocket::stream<tcp::socket&> ws(socket);
    ws.read_message_max(1 << 20);
    beast::error_code ec;
    ws.accept(req, ec);
    if (ec) return;
    beast::flat_buffer buffer;
    while (true) {
      buffer.clear();
      ws.read(buffer, ec);
      if (ec) return;  // closed or shut down
      const std::string reply = sessions.handle_text(beast::buffers_to_string(buffer.data()));
      ws.text(true);
      ws.write(net::buffer(reply), ec);
      if (ec) return;
    }
  }

  void serve(std::shared_ptr<tcp::socket> socket) {
    beast::error_code ec;
    beast::flat_buffer buffer;
    while (true) {
      http::request<http::string_body> req;
      http::read(*socket, buffer, req, ec);
      if (ec) break;
      if (websocket::is_upgrade(req)) {
        if (req.target() == "/ws") serve_websocket(*socket, req);
        break;
      }
      auto res = respond(req);
      http::write(*socket, res, ec);
      if (ec || !res.keep_alive()) break;
    }
    socket->shutdown(tcp::socket::shutdown_send, ec);
    std::lock_guard lock(mutex);
    std::erase(sockets, socket);
  }
};

Server::Server(SessionManager& sessions, ServerOptions options)
    : impl_(std::make_unique<Impl>(sessions, std::move(options))) {}

Server::~Server() { stop(); }

void Server::start() {
  auto& d = *impl_;
  const tcp::endpoint endpoint(net::ip::make_address(d.options.address), d.options.port);
  d.acceptor.open(endpoint.protocol());
  d.acceptor.set_option(net::socket_base::reuse_address(true));
  d.acceptor.bind(endpoint);
  d.acceptor.listen();
  d.bound_port = d.acceptor.local_endpoint().port();
  d.running = true;
  d.accept_next();
  d.accept_thread = std::thread([&d] { d.ioc.run(); });
}

void Server::stop() {
  auto& d = *impl_;
  std::vector<std::thread> connections;
  {
    std::lock_guard lock(d.mutex);
    if (d.stopped || !d.running) {
      d.stopped = true;
      d.stopped_cv.notify_all();
      return;
    }
    d.stopped = true;
    // wake blocked reads; each connection thread then exits on its own
    for (const auto& s : d.sockets) ::shutdown(s->native_handle(), SHUT_RDWR);
    connections.swap(d.connections);
  }
  net::post(d.ioc, [&d] {
    beast::error_code ec;
    d.acceptor.close(ec);
  });
  if (d.accept_thread.joinable()) d.accept_thread.join();
  for (auto& t : connections) t.join();
  d.stopped_cv.notify_all();
}

void Server::wait() {
  std::unique_lock lock(impl_->mutex);
  impl_->stopped_cv.wait(lock, [this] { return impl_->stopped; });
}

std::uint16_t Server::port() const { return impl_->bound_port; }

}  // namespace erd::service
