#include "erd/service/session.hpp"

#include <cstdio>
#include <random>

#include "erd/agents/training.hpp"
#include "erd/errors.hpp"
#include "erd/instance/generator.hpp"
#include "erd/instance/serialization.hpp"
#include "erd/meta/meta_actions.hpp"
#include "erd/rng.hpp"

namespace erd::service {

using nlohmann::json;

namespace {

struct ProtocolError {
  const char* code;
  std::string message;
  json details = json::array();
};

json error_response(const json& request_id, const std::string& session_id, const ProtocolError& e) {
  json out;
  out["type"] = "error";
  out["request_id"] = request_id;
  if (!session_id.empty()) out["session_id"] = session_id;
  out["payload"] = {{"code", e.code}, {"message", e.message}, {"details", e.details}};
  return out;
}

json geometry(const InstanceConfig& inst) {
  const Rect exit = inst.room.exit_region();
  json buttons = json::array();
  for (const auto& b : inst.layout.buttons) buttons.push_back({{"x", b.center.x}, {"y", b.center.y}, {"radius", b.radius}});
  json edges = json::array();
  for (const auto& e : inst.dag.edges) edges.push_back({e.parent, e.child});
  return {{"room", {{"width", inst.room.width}, {"depth", inst.room.depth}}},
          {"exit", {{"wall", to_string(inst.room.exit_wall)}, {"x0", exit.x0}, {"x1", exit.x1}, {"y0", exit.y0}, {"y1", exit.y1}}},
          {"buttons", buttons},
          {"dag", {{"edges", edges}, {"goal_index", inst.dag.goal_index}}},
          {"num_joints", inst.num_joints},
          {"max_episode_steps", inst.max_episode_steps}};
}

std::uint64_t random_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

const std::string& string_field(const json& obj, const char* key) {
  static const std::string empty;
  if (!obj.is_object() || !obj.contains(key)) return empty;
  if (!obj.at(key).is_string()) throw ProtocolError{code::kBadRequest, std::string(key) + " must be a string"};
  return obj.at(key).get_ref<const std::string&>();
}

std::uint64_t seed_field(const json& payload, std::uint64_t fallback) {
  if (!payload.is_object() || !payload.contains("episode_seed")) return fallback;
  const auto& v = payload.at("episode_seed");
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0))
    throw ProtocolError{code::kBadRequest, "episode_seed must be a non-negative integer"};
  return v.get<std::uint64_t>();
}

}  // namespace

InstanceConfig instance_from_payload(const json& payload) {
  if (!payload.is_null() && !payload.is_object()) throw ConfigError("create payload must be an object");
  const bool has_instance = payload.contains("instance");
  const bool has_generate = payload.contains("generate");
  const bool has_preset = payload.contains("preset");
  if (has_instance + has_generate + has_preset > 1)
    throw ConfigError("give at most one of instance, generate, preset");
  if (has_instance) {
    const auto& doc = payload.at("instance");
    // a string is taken as the document text, which keeps line numbers in errors
    if (doc.is_string()) return instance::deserialize(doc.get<std::string>());
    return instance::from_json(doc);
  }
  if (has_generate) {
    const auto& g = payload.at("generate");
    if (!g.is_object()) throw ConfigError("generate must be an object");
    SchematicParams params;
    try {
      params.num_buttons = g.value("buttons", params.num_buttons);
      return instance::generate(params, g.value("seed", std::uint64_t{0}));
    } catch (const json::exception&) {
      throw ConfigError("generate.buttons and generate.seed must be integers");
    }
  }
  if (has_preset) {
    const auto& p = payload.at("preset");
    if (p == "baseline") return instance::baseline_one_button();
    if (p == "ordered2") return instance::ordered_two_button();
    throw ConfigError("unknown preset " + p.dump() + " (expected \"baseline\" or \"ordered2\")");
  }
  return instance::baseline_one_button();
}

SessionManager::SessionManager() : id_seed_(random_seed()) {}

std::size_t SessionManager::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::string SessionManager::next_id() {
  char buf[24];
  std::snprintf(buf, sizeof buf, "s-%016llx",
                static_cast<unsigned long long>(rng::derive(id_seed_, ++counter_)));
  return buf;
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

json SessionManager::observe(const Session& s) const {
  const EnvState& st = s.state;
  const bool done = st.exited || st.steps_taken >= s.instance.max_episode_steps;
  json legal = json::array();
  if (!done)
    for (const Action& a : meta::legal_actions(st, s.instance, s.meta_enabled)) legal.push_back(to_string(a));
  return {{"x", st.pose.x},
          {"y", st.pose.y},
          {"z", st.pose.z},
          {"heading", st.pose.heading},
          {"pitch", st.pose.pitch},
          {"roll", st.pose.roll},
          {"joints", st.joints},
          {"bits", std::vector<bool>(st.puzzle)},
          {"unlocked", puzzle::is_unlocked(st.puzzle, s.instance.dag)},
          {"steps", st.steps_taken},
          {"cumulative_reward", s.cumulative_reward},
          {"normalized", normalize_return(s.cumulative_reward, s.bounds)},
          {"exited", st.exited},
          {"done", done},
          {"episode_seed", st.episode_seed},
          {"legal_actions", legal}};
}

json SessionManager::create(const json& request) {
  const json payload = request.value("payload", json::object());
  InstanceConfig inst;
  try {
    inst = instance_from_payload(payload);
  } catch (const ParseError& e) {
    throw ProtocolError{code::kInvalidInstance, e.what(), json::array({{{"field", e.field()}, {"line", e.line()}}})};
  } catch (const std::exception& e) {
    throw ProtocolError{code::kInvalidInstance, e.what()};
  }
  if (auto problems = instance::validate(inst); !problems.empty())
    throw ProtocolError{code::kInvalidInstance, "instance failed validation", problems};

  auto s = std::make_shared<Session>();
  s->instance = inst;
  s->bounds = meta::return_bounds(inst);
  s->meta_enabled = payload.is_object() && payload.value("meta_actions", false);
  const std::uint64_t seed = seed_field(payload, 0);
  s->state = erd::reset(inst, seed);
  s->created = std::chrono::system_clock::now();
  {
    std::lock_guard lock(mutex_);
    s->id = next_id();
    sessions_[s->id] = s;
  }
  json actions = json::array();
  const ActionSpace space(inst.num_joints, inst.num_buttons, s->meta_enabled);
  for (int i = 0; i < space.size(); ++i) actions.push_back(to_string(space.at(i)));
  json out;
  out["type"] = "state";
  out["session_id"] = s->id;
  out["payload"] = {{"protocol_version", kProtocolVersion},
                    {"instance_id", agents::instance_id(inst)},
                    {"geometry", geometry(inst)},
                    {"actions", actions},
                    {"return_bounds", {{"min", s->bounds.min}, {"max", s->bounds.max}}},
                    {"state", observe(*s)}};
  return out;
}

json SessionManager::reset(Session& s, const json& request) {
  const json payload = request.value("payload", json::object());
  const std::uint64_t seed = seed_field(payload, s.state.episode_seed);
  const bool finished = s.state.exited || s.state.steps_taken >= s.instance.max_episode_steps;
  const bool abandoned = !finished && s.state.steps_taken > 0;
  if (abandoned) ++s.abandoned;
  s.state = erd::reset(s.instance, seed);
  s.cumulative_reward = 0.0;
  json out;
  out["type"] = "state";
  out["session_id"] = s.id;
  out["payload"] = {{"abandoned_previous", abandoned}, {"abandoned_total", s.abandoned}, {"state", observe(s)}};
  return out;
}

json SessionManager::step(Session& s, const json& request) {
  const json payload = request.value("payload", json::object());
  const std::string& name = string_field(payload, "action");
  if (name.empty()) throw ProtocolError{code::kBadRequest, "step needs payload.action"};
  const auto action = parse_action(name);
  const ActionSpace space(s.instance.num_joints, s.instance.num_buttons, s.meta_enabled);
  if (!action || !space.contains(*action)) throw ProtocolError{code::kInvalidAction, "unknown action '" + name + "'"};
  if (s.state.exited || s.state.steps_taken >= s.instance.max_episode_steps)
    throw ProtocolError{code::kEpisodeOver, "episode is over; send reset to start a new one"};
  if (action->is_meta() && !meta::meta_applicable(s.state, action->arg, s.instance))
    throw ProtocolError{code::kInvalidAction, "meta-action " + name + " is not applicable here"};

  Transition t;
  try {
    t = meta::dispatch(s.state, *action, s.instance);
  } catch (const PlanningError& e) {
    throw ProtocolError{code::kInvalidAction, e.what()};
  }
  s.state = t.next;
  s.cumulative_reward += t.reward;
  s.history += t.info.primitives;
  json out;
  out["type"] = t.done ? "done" : "state";
  out["session_id"] = s.id;
  out["payload"] = {{"transition",
                     {{"action", name},
                      {"reward", t.reward},
                      {"done", t.done},
                      {"cause", to_string(t.info.cause)},
                      {"primitives", t.info.primitives},
                      {"touched", t.info.touched},
                      {"pressed", t.info.pressed}}},
                    {"state", observe(s)}};
  return out;
}

json SessionManager::handle(const json& request) {
  json request_id = nullptr;
  std::string session_id;
  try {
    if (!request.is_object()) throw ProtocolError{code::kBadRequest, "message must be a JSON object"};
    if (request.contains("request_id")) request_id = request.at("request_id");
    const std::string& type = string_field(request, "type");
    session_id = string_field(request, "session_id");
    if (request.contains("payload") && !request.at("payload").is_object() && !request.at("payload").is_null())
      throw ProtocolError{code::kBadRequest, "payload must be an object"};

    json out;
    if (type == "create") {
      out = create(request);
    } else if (type == "reset" || type == "step" || type == "state") {
      if (session_id.empty()) throw ProtocolError{code::kBadRequest, type + " needs session_id"};
      const auto s = find(session_id);
      if (!s) throw ProtocolError{code::kNotFound, "no session " + session_id};
      std::lock_guard lock(s->mutex);
      if (type == "reset") {
        out = reset(*s, request);
      } else if (type == "step") {
        out = step(*s, request);
      } else {
        out["type"] = "state";
        out["session_id"] = s->id;
        out["payload"] = {{"state", observe(*s)}, {"history", s->history}, {"abandoned_total", s->abandoned}};
      }
    } else if (type.empty()) {
      throw ProtocolError{code::kBadRequest, "message needs a type"};
    } else {
      throw ProtocolError{code::kBadRequest, "unknown message type '" + type + "'"};
    }
    out["request_id"] = request_id;
    return out;
  } catch (const ProtocolError& e) {
    return error_response(request_id, session_id, e);
  } catch (const json::exception& e) {
    return error_response(request_id, session_id, {code::kBadRequest, e.what()});
  } catch (const std::exception& e) {
    return error_response(request_id, session_id, {code::kInternal, e.what()});
  }
}

std::string SessionManager::handle_text(std::string_view text) {
  json request;
  try {
    request = json::parse(text);
  } catch (const json::parse_error& e) {
    return error_response(nullptr, "", {code::kBadRequest, std::string("malformed JSON: ") + e.what()}).dump(-1, ' ', false, json::error_handler_t::replace);
  }
  return handle(request).dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace erd::service
