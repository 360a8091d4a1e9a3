#include "erd/instance/serialization.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "erd/errors.hpp"

namespace erd::instance {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json pose_json(const Pose& p) {
  return {{"x", p.x}, {"y", p.y}, {"z", p.z}, {"heading", p.heading}, {"pitch", p.pitch}, {"roll", p.roll}};
}

int line_of(std::string_view source, std::size_t offset) {
  if (source.empty()) return 0;
  offset = std::min(offset, source.size());
  int line = 1;
  for (std::size_t i = 0; i < offset; ++i)
    if (source[i] == '\n') ++line;
  return line;
}

// Reads one JSON object, tracking which keys were consumed.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::string_view source)
      : obj_(obj), path_(std::move(path)), source_(source) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  const json& field(const std::string& key) {
    const auto it = obj_.find(key);
    if (it == obj_.end()) fail(child(key), "missing required field");
    used_.push_back(key);
    return *it;
  }

  double number(const std::string& key) {
    const json& v = field(key);
    if (!v.is_number()) fail(child(key), "expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key) {
    const json& v = field(key);
    if (!v.is_number_integer()) fail(child(key), "expected an integer");
    return v.get<int>();
  }

  std::uint64_t uint64(const std::string& key) {
    const json& v = field(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      fail(child(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key) {
    const json& v = field(key);
    if (!v.is_boolean()) fail(child(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = field(key);
    if (!v.is_string()) fail(child(key), "expected a string");
    return v.get<std::string>();
  }

  const json& array(const std::string& key) {
    const json& v = field(key);
    if (!v.is_array()) fail(child(key), "expected an array");
    return v;
  }

  Reader object(const std::string& key) { return Reader(field(key), child(key), source_); }

  /// Reject keys that were never read.
  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) fail(child(key), "unknown field");
    }
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] void fail(const std::string& field_path, const std::string& what) const {
    const auto leaf = field_path.substr(field_path.find_last_of('.') + 1);
    const auto pos = source_.find("\"" + leaf.substr(0, leaf.find('[')) + "\"");
    throw ParseError(field_path, what, pos == std::string_view::npos ? 0 : line_of(source_, pos));
  }

  std::string_view source() const { return source_; }

 private:
  const json& obj_;
  std::string path_;
  std::string_view source_;
  std::vector<std::string> used_;
};

Pose read_pose(Reader r) {
  Pose p;
  p.x = r.number("x");
  p.y = r.number("y");
  p.z = r.number("z");
  p.heading = r.number("heading");
  p.pitch = r.number("pitch");
  p.roll = r.number("roll");
  r.finish();
  return p;
}

std::vector<double> read_doubles(Reader& r, const std::string& key) {
  std::vector<double> out;
  const json& arr = r.array(key);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) r.fail(r.child(key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

}  // namespace

ordered_json to_json(const InstanceConfig& inst) {
  ordered_json doc;
  doc["schema_version"] = inst.schema_version;
  doc["instance_seed"] = inst.instance_seed;
  doc["room"] = {{"width", inst.room.width},
                 {"depth", inst.room.depth},
                 {"exit_wall", std::string(to_string(inst.room.exit_wall))},
                 {"exit_center_offset", inst.room.exit_center_offset},
                 {"exit_half_width", inst.room.exit_half_width}};
  doc["start_pose"] = pose_json(inst.start_pose);
  doc["num_buttons"] = inst.num_buttons;
  ordered_json edges = ordered_json::array();
  for (const auto& e : inst.dag.edges) edges.push_back({e.parent, e.child});
  doc["dag"] = {{"num_buttons", inst.dag.num_buttons}, {"edges", edges}, {"goal_index", inst.dag.goal_index}};
  ordered_json buttons = ordered_json::array();
  for (const auto& b : inst.layout.buttons)
    buttons.push_back({{"x", b.center.x}, {"y", b.center.y}, {"radius", b.radius}});
  doc["layout"] = {{"buttons", buttons}};
  doc["num_joints"] = inst.num_joints;
  doc["arm"] = {{"enabled", inst.arm.enabled},
                {"link_lengths", inst.arm.link_lengths},
                {"mount_height", inst.arm.mount_height}};
  doc["max_episode_steps"] = inst.max_episode_steps;
  doc["step_reward"] = inst.step_reward;
  doc["exit_reward"] = inst.exit_reward;
  doc["movement_noise_std"] = inst.movement_noise_std;
  doc["dag_edge_probability"] = inst.dag_edge_probability;
  doc["continuous_puzzle_dims"] = inst.continuous_puzzle_dims;
  return doc;
}

InstanceConfig from_json(const json& doc, std::string_view source) {
  Reader top(doc, "", source);
  InstanceConfig inst;
  // version first, so a future document fails with a version error rather
  // than a confusing field error
  inst.schema_version = top.integer("schema_version");
  if (inst.schema_version != kSchemaVersion) throw VersionError(inst.schema_version, kSchemaVersion);
  inst.instance_seed = top.uint64("instance_seed");

  {
    Reader r = top.object("room");
    inst.room.width = r.number("width");
    inst.room.depth = r.number("depth");
    const std::string wall = r.string("exit_wall");
    if (!parse_wall(wall, inst.room.exit_wall)) r.fail(r.child("exit_wall"), "expected one of N, S, E, W");
    inst.room.exit_center_offset = r.number("exit_center_offset");
    inst.room.exit_half_width = r.number("exit_half_width");
    r.finish();
  }
  inst.start_pose = read_pose(top.object("start_pose"));
  inst.num_buttons = top.integer("num_buttons");
  {
    Reader r = top.object("dag");
    inst.dag.num_buttons = r.integer("num_buttons");
    const json& edges = r.array("edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const json& e = edges[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
        r.fail(r.child("edges") + "[" + std::to_string(i) + "]", "expected [parent, child]");
      inst.dag.edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    inst.dag.goal_index = r.integer("goal_index");
    r.finish();
  }
  {
    Reader r = top.object("layout");
    const json& buttons = r.array("buttons");
    for (std::size_t i = 0; i < buttons.size(); ++i) {
      Reader b(buttons[i], r.child("buttons") + "[" + std::to_string(i) + "]", source);
      puzzle::Button button;
      button.center.x = b.number("x");
      button.center.y = b.number("y");
      button.radius = b.number("radius");
      b.finish();
      inst.layout.buttons.push_back(button);
    }
    r.finish();
  }
  inst.num_joints = top.integer("num_joints");
  {
    Reader r = top.object("arm");
    inst.arm.enabled = r.boolean("enabled");
    inst.arm.link_lengths = read_doubles(r, "link_lengths");
    inst.arm.mount_height = r.number("mount_height");
    r.finish();
  }
  inst.max_episode_steps = top.integer("max_episode_steps");
  inst.step_reward = top.number("step_reward");
  inst.exit_reward = top.number("exit_reward");
  inst.movement_noise_std = top.number("movement_noise_std");
  inst.dag_edge_probability = top.number("dag_edge_probability");
  inst.continuous_puzzle_dims = read_doubles(top, "continuous_puzzle_dims");
  top.finish();
  return inst;
}

std::string serialize(const InstanceConfig& instance) { return to_json(instance).dump(2) + "\n"; }

InstanceConfig deserialize(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("", e.what(), line_of(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  return from_json(doc, text);
}

InstanceConfig load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open instance file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

void save_instance(const InstanceConfig& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write instance file " + path.string());
  out << serialize(instance);
}

}  // namespace erd::instance
