#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "erd/agents/tabular.hpp"
#include "erd/instance/instance.hpp"

namespace erd::agents {

enum class ActionMode { Primitives, WithMeta };

std::string_view to_string(ActionMode mode);
bool parse_action_mode(std::string_view text, ActionMode& out);

struct EpisodeRecord {
  std::string instance_id;
  std::uint64_t seed = 0;           // episode seed passed to reset
  std::vector<int> actions;         // agent decisions, ActionSpace indices
  std::vector<double> rewards;      // one per decision
  double cumulative_reward = 0.0;
  bool exited = false;
  int steps = 0;                    // primitive steps
  long long start_timestep = 0;     // training clock when the episode began
  double normalized = 0.0;          // percent, see meta::normalize_return
  bool truncated = false;           // cut off by the training budget
};

/// Hooks for per-step diagnostics. Default implementations do nothing.
class TrainingListener {
 public:
  virtual ~TrainingListener() = default;
  virtual void episode_begin(int /*episode*/, const EnvState& /*initial*/) {}
  virtual void primitive(const EnvState& /*before*/, const Action& /*action*/, const Transition& /*t*/) {}
  virtual void episode_end(int /*episode*/, const EpisodeRecord& /*record*/) {}
};

std::string instance_id(const InstanceConfig& instance);

/// Run episodes back to back until `learner.training_timesteps` primitive
/// steps have been spent. The last episode is kept with `truncated` set if
/// the budget ran out mid-episode (a meta-action may overrun the budget by
/// its own length). Fully deterministic in the seeds.
std::vector<EpisodeRecord> run_training(const InstanceConfig& instance, const LearnerConfig& learner,
                                        ActionMode mode, TrainingListener* listener = nullptr);

/// Trailing window of complete (non-truncated) episodes.
std::vector<EpisodeRecord> final_complete_episodes(const std::vector<EpisodeRecord>& records, std::size_t count);

}  // namespace erd::agents
