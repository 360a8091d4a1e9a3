#pragma once

// HTTP + WebSocket front end for SessionManager.
//
//   POST /api/sessions   body = create payload, response = create response
//   GET  /ws             WebSocket upgrade; one JSON request per text frame,
//                        one JSON response frame per request
//   GET  /<path>         static file under the configured directory
//                        ("/" serves index.html)

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "erd/service/session.hpp"

namespace erd::service {

struct ServerOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8765;  // 0 picks a free port
  std::filesystem::path static_dir;  // empty disables static files
};

class Server {
 public:
  Server(SessionManager& sessions, ServerOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Bind and start accepting on a background thread. Throws
  /// std::system_error when the address cannot be bound.
  void start();
  /// Stop accepting, close open connections and join all threads.
  void stop();
  /// Block until stop() is called from elsewhere.
  void wait();

  std::uint16_t port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Content type for a static file name, by extension.
std::string mime_type(const std::string& path);

}  // namespace erd::service
