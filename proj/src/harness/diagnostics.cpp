#include "erd/harness/diagnostics.hpp"

#include <istream>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "erd/core/env.hpp"
#include "erd/errors.hpp"
#include "erd/instance/serialization.hpp"

namespace erd::harness {

using nlohmann::json;
using nlohmann::ordered_json;

DiagnosticsWriter::DiagnosticsWriter(std::ostream& out, const InstanceConfig& instance, int learner, int trial)
    : out_(out), instance_(instance), learner_(learner), trial_(trial) {}

void DiagnosticsWriter::episode_begin(int episode, const EnvState& initial) {
  t_ = 0;
  ordered_json line;
  line["event"] = "begin";
  line["learner"] = learner_;
  line["trial"] = trial_;
  line["episode"] = episode;
  line["seed"] = initial.episode_seed;
  line["instance"] = instance::to_json(instance_);
  out_ << line.dump() << '\n';
}

void DiagnosticsWriter::primitive(const EnvState& before, const Action& action, const Transition& t) {
  ordered_json line;
  line["event"] = "step";
  line["t"] = ++t_;
  line["action"] = to_string(action);
  line["reward"] = t.reward;
  line["x"] = t.next.pose.x;
  line["y"] = t.next.pose.y;
  line["heading"] = t.next.pose.heading;
  line["joints"] = t.next.joints;
  line["bits"] = std::vector<bool>(t.next.puzzle);
  ordered_json touched = ordered_json::array();
  for (int b : t.info.touched) {
    ordered_json entry;
    entry["button"] = b;
    entry["eligible"] = puzzle::press_eligible(instance_.dag, before.puzzle, b);
    touched.push_back(entry);
  }
  line["touched"] = touched;
  line["done"] = t.done;
  line["cause"] = std::string(to_string(t.info.cause));
  out_ << line.dump() << '\n';
}

void DiagnosticsWriter::episode_end(int, const agents::EpisodeRecord& record) {
  ordered_json line;
  line["event"] = "end";
  line["steps"] = record.steps;
  line["cumulative_reward"] = record.cumulative_reward;
  line["exited"] = record.exited;
  line["truncated"] = record.truncated;
  out_ << line.dump() << '\n';
}

namespace {

template <typename T>
T field(const json& line, const char* key, int line_no) {
  if (!line.contains(key)) throw ParseError(key, "missing in diagnostics line", line_no);
  try {
    return line.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(key, "has the wrong type", line_no);
  }
}

}  // namespace

ReplayReport replay(std::istream& log) {
  ReplayReport report;
  std::optional<InstanceConfig> inst;
  EnvState state;
  double cumulative = 0.0;
  int episode_steps = 0;
  std::string text;
  int line_no = 0;
  auto mismatch = [&](const std::string& what) {
    report.mismatches.push_back("line " + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(log, text)) {
    ++line_no;
    if (text.empty() || text.front() != '{') continue;
    json line;
    try {
      line = json::parse(text);
    } catch (const json::parse_error&) {
      continue;
    }
    if (!line.is_object() || !line.contains("event")) continue;
    const auto event = field<std::string>(line, "event", line_no);

    if (event == "begin") {
      if (!line.contains("instance")) throw ParseError("instance", "missing in begin line", line_no);
      inst = instance::from_json(line.at("instance"));
      state = reset(*inst, field<std::uint64_t>(line, "seed", line_no));
      cumulative = 0.0;
      episode_steps = 0;
      ++report.episodes;
    } else if (event == "step") {
      if (!inst) throw ParseError("event", "step line before any begin line", line_no);
      const auto name = field<std::string>(line, "action", line_no);
      const auto action = parse_action(name);
      if (!action || action->is_meta()) throw ParseError("action", "not a primitive action: " + name, line_no);
      if (state.exited || state.steps_taken >= inst->max_episode_steps) {
        mismatch("step after the episode ended");
        continue;
      }
      const Transition t = step(state, *action, *inst);
      ++report.steps;
      ++episode_steps;
      cumulative += t.reward;
      if (t.reward != field<double>(line, "reward", line_no))
        mismatch("reward " + std::to_string(t.reward) + " but log says " + line.at("reward").dump());
      if (t.next.pose.x != field<double>(line, "x", line_no) || t.next.pose.y != field<double>(line, "y", line_no) ||
          t.next.pose.heading != field<double>(line, "heading", line_no))
        mismatch("pose differs after " + name);
      if (t.next.joints != field<std::vector<double>>(line, "joints", line_no)) mismatch("joints differ");
      if (t.next.puzzle != field<std::vector<bool>>(line, "bits", line_no)) mismatch("puzzle bits differ");
      if (t.done != field<bool>(line, "done", line_no)) mismatch("done flag differs");
      state = t.next;
    } else if (event == "end") {
      if (!inst) throw ParseError("event", "end line before any begin line", line_no);
      if (episode_steps != field<int>(line, "steps", line_no)) mismatch("episode step count differs");
      if (cumulative != field<double>(line, "cumulative_reward", line_no)) mismatch("cumulative reward differs");
      if (state.exited != field<bool>(line, "exited", line_no)) mismatch("exit flag differs");
    } else {
      throw ParseError("event", "unknown event '" + event + "'", line_no);
    }
  }
  return report;
}

}  // namespace erd::harness
