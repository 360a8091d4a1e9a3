#pragma once

// Live environment sessions driven by JSON messages. The transport (see
// server.hpp) only moves text; every protocol rule lives here so it can be
// exercised without a network.

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include <json.hpp>

#include "erd/core/env.hpp"
#include "erd/instance/instance.hpp"

namespace erd::service {

inline constexpr int kProtocolVersion = 1;

/// Error codes carried in error payloads.
namespace code {
inline constexpr const char* kBadRequest = "bad-request";
inline constexpr const char* kNotFound = "not-found";
inline constexpr const char* kInvalidInstance = "invalid-instance";
inline constexpr const char* kInvalidAction = "invalid-action";
inline constexpr const char* kEpisodeOver = "episode-over";
inline constexpr const char* kInternal = "internal";
}  // namespace code

class SessionManager {
 public:
  SessionManager();

  /// Handle one request document; always returns exactly one response and
  /// never throws. Responses echo request_id.
  nlohmann::json handle(const nlohmann::json& request);
  /// Same, starting from raw text (malformed JSON gives a bad-request error).
  std::string handle_text(std::string_view text);

  std::size_t size() const;

 private:
  struct Session {
    std::mutex mutex;
    std::string id;
    InstanceConfig instance;
    ReturnBounds bounds;
    bool meta_enabled = false;
    EnvState state;
    double cumulative_reward = 0.0;
    long long history = 0;  // primitives over the session lifetime
    int abandoned = 0;      // episodes reset before finishing
    std::chrono::system_clock::time_point created;
  };

  nlohmann::json create(const nlohmann::json& request);
  nlohmann::json reset(Session& s, const nlohmann::json& request);
  nlohmann::json step(Session& s, const nlohmann::json& request);
  nlohmann::json observe(const Session& s) const;
  std::shared_ptr<Session> find(const std::string& id) const;
  std::string next_id();

  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t id_seed_;
  std::uint64_t counter_ = 0;
};

/// Instance described by a create payload: {"instance": {...}},
/// {"generate": {"buttons": n, "seed": s}}, {"preset": "baseline" |
/// "ordered2"}, or nothing (the baseline preset). Throws ConfigError,
/// ParseError or VersionError.
InstanceConfig instance_from_payload(const nlohmann::json& payload);

}  // namespace erd::service
