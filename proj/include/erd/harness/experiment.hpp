#pragma once

// Batch experiments: several learners, several seeded trials each, results
// written as CSV.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "erd/agents/training.hpp"
#include "erd/instance/instance.hpp"

namespace erd::harness {

enum class RunMode { Release, Debug };

std::string_view to_string(RunMode mode);
bool parse_run_mode(std::string_view text, RunMode& out);

struct ExperimentConfig {
  InstanceConfig instance;
  std::vector<agents::LearnerConfig> learners;  // seeds are ignored, see trial_seed()
  int trials = 10;
  int training_timesteps = 20000;
  agents::ActionMode action_mode = agents::ActionMode::Primitives;
  RunMode mode = RunMode::Release;
  std::filesystem::path output_dir = "results";
  std::uint64_t master_seed = 0;
};

/// Config file layout (JSON):
///
///   {
///     "instance": { ...instance document... }      one of these three
///     "instance_file": "path/relative/to/config.json"
///     "generate": {"buttons": 2, "seed": 7}
///     "learners": [{"algorithm": "QLearning", "alpha": 0.1, "gamma": 0.99,
///                   "epsilon": {"initial": 1.0, "final": 0.05, "decay_steps": 10000}}],
///     "trials": 10, "training_timesteps": 20000,
///     "action_mode": "primitives" | "with-meta",
///     "mode": "release" | "debug",
///     "output_dir": "results", "master_seed": 0
///   }
///
/// Everything except the instance source is optional. A learner without an
/// epsilon block decays over half of training_timesteps. Unknown keys are
/// rejected with ConfigError.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Fully resolved config (instance inline, every default spelled out);
/// parse_experiment_config(to_json(c)) == c.
nlohmann::ordered_json to_json(const ExperimentConfig& config);

std::vector<std::string> config_violations(const ExperimentConfig& config);

/// Seed of one trial, derived from the master seed only.
std::uint64_t trial_seed(std::uint64_t master_seed, int learner_index, int trial);

/// The learner exactly as run_training sees it for one trial.
agents::LearnerConfig trial_learner(const ExperimentConfig& config, int learner_index, int trial);

struct SeriesPoint {
  int episode = 0;
  int n_trials = 0;
  double mean_start_timestep = 0.0;
  double mean_reward = 0.0;
  double stderr_reward = 0.0;
  double mean_normalized = 0.0;
  double stderr_normalized = 0.0;
  double exit_rate = 0.0;
};

struct MeanStderr {
  std::vector<double> mean;
  std::vector<double> standard_error;
};

/// Align series by index, truncate to the shortest, and compute the mean
/// and sample standard error (0 for a single series). Throws UsageError on
/// empty input.
MeanStderr aggregate_values(const std::vector<std::vector<double>>& series);

/// Per-episode cross-trial series over complete (non-truncated) episodes.
std::vector<SeriesPoint> aggregate(const std::vector<std::vector<agents::EpisodeRecord>>& trials);

struct LearnerResult {
  agents::LearnerConfig learner;
  std::vector<std::vector<agents::EpisodeRecord>> trials;  // by trial index
  std::vector<SeriesPoint> summary;
};

struct ExperimentResult {
  std::vector<LearnerResult> learners;
  std::vector<std::string> failures;  // "learner L trial T: message"
  bool complete() const { return failures.empty(); }
};

/// Run every (learner, trial) pair and aggregate. Release mode runs trials
/// on worker threads; Debug mode runs them in order and writes diagnostic
/// lines to `diagnostics` (ignored in Release mode). Results never depend
/// on the mode or on scheduling.
ExperimentResult run(const ExperimentConfig& config, std::ostream* diagnostics = nullptr);

/// Write results.csv, summary.csv, config.echo and MANIFEST into
/// config.output_dir (created if needed).
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result);

inline constexpr const char* kResultsHeader =
    "learner,algorithm,trial,episode,start_timestep,end_timestep,steps,cumulative_reward,normalized,exited,truncated";
inline constexpr const char* kSummaryHeader =
    "learner,algorithm,episode,n_trials,mean_start_timestep,mean_cumulative_reward,stderr_cumulative_reward,"
    "mean_normalized,stderr_normalized,exit_rate";

void write_results_csv(std::ostream& out, const ExperimentResult& result);
void write_summary_csv(std::ostream& out, const ExperimentResult& result);

}  // namespace erd::harness
