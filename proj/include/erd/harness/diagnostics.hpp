#pragma once

// Debug-mode diagnostics. One JSON object per line:
//
//   {"event":"begin","learner":0,"trial":0,"episode":0,"seed":...,"instance":{...}}
//   {"event":"step","t":1,"action":"MoveForward","reward":-1,"x":..,"y":..,"heading":..,
//    "joints":[..],"bits":[..],"touched":[{"button":0,"eligible":true}],"done":false,"cause":"none"}
//   {"event":"end","steps":8,"cumulative_reward":92,"exited":true,"truncated":false}
//
// A "step" line describes one primitive and the state after it, so an
// episode of n primitives produces n + 2 lines. Each begin line carries
// the full instance so any episode can be replayed on its own.

#include <iosfwd>
#include <mutex>
#include <string>
#include <vector>

#include "erd/agents/training.hpp"

namespace erd::harness {

class DiagnosticsWriter : public agents::TrainingListener {
 public:
  DiagnosticsWriter(std::ostream& out, const InstanceConfig& instance, int learner, int trial);

  void episode_begin(int episode, const EnvState& initial) override;
  void primitive(const EnvState& before, const Action& action, const Transition& t) override;
  void episode_end(int episode, const agents::EpisodeRecord& record) override;

 private:
  std::ostream& out_;
  const InstanceConfig& instance_;
  int learner_;
  int trial_;
  int t_ = 0;
};

struct ReplayReport {
  int episodes = 0;
  long long steps = 0;
  std::vector<std::string> mismatches;  // empty when every step reproduced
  bool ok() const { return mismatches.empty(); }
};

/// Re-simulate every episode in a diagnostics log and compare rewards,
/// states and episode totals line by line. Lines that are not JSON objects
/// with an "event" field are skipped, so a log mixed with other stderr
/// output still replays. Throws ParseError on a malformed diagnostics line.
ReplayReport replay(std::istream& log);

}  // namespace erd::harness
