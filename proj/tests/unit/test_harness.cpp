#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "erd/core/env.hpp"
#include "erd/errors.hpp"
#include "erd/harness/diagnostics.hpp"
#include "erd/harness/experiment.hpp"
#include "erd/instance/generator.hpp"
#include "erd/instance/serialization.hpp"

using namespace erd;
using namespace erd::harness;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(const std::string& dir_name) {
  ExperimentConfig c = parse_experiment_config(nlohmann::json{{"generate", {{"buttons", 2}, {"seed", 4}}},
                                                              {"trials", 3},
                                                              {"training_timesteps", 3000},
                                                              {"master_seed", 9}});
  c.output_dir = fs::temp_directory_path() / dir_name;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

}  // namespace

TEST(Aggregate, SingleSeriesHasZeroStderr) {
  const auto a = aggregate_values({{1.0, 2.0, 3.0}});
  EXPECT_EQ(a.mean, (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(a.standard_error, (std::vector<double>{0, 0, 0}));
}

TEST(Aggregate, MeanAndStderrByHand) {
  const auto a = aggregate_values({{40.0}, {60.0}});
  EXPECT_DOUBLE_EQ(a.mean[0], 50.0);
  // sample sd = sqrt(200) = 14.142..., stderr = sd / sqrt(2) = 10
  EXPECT_NEAR(a.standard_error[0], 10.0, 1e-12);
}

TEST(Aggregate, TruncatesToShortestAndRejectsEmpty) {
  EXPECT_EQ(aggregate_values({{1, 2, 3}, {5}}).mean, std::vector<double>{3});
  EXPECT_THROW(aggregate_values({}), UsageError);
}

TEST(Aggregate, MatchesTwoPassRecomputation) {
  rng::Rng r(12);
  std::vector<std::vector<double>> series(7);
  for (auto& s : series)
    for (int i = 0; i < 50 + static_cast<int>(r.below(20)); ++i) s.push_back(r.uniform(-1000.0, 100.0));
  const auto a = aggregate_values(series);
  ASSERT_EQ(a.mean.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) {
    // textbook two-pass formulas, as a spreadsheet would compute them
    long double sum = 0;
    for (const auto& s : series) sum += s[i];
    const long double mean = sum / series.size();
    long double ss = 0;
    for (const auto& s : series) ss += (s[i] - mean) * (s[i] - mean);
    const long double se = std::sqrt(ss / (series.size() - 1)) / std::sqrt(static_cast<long double>(series.size()));
    EXPECT_NEAR(a.mean[i], static_cast<double>(mean), 1e-9);
    EXPECT_NEAR(a.standard_error[i], static_cast<double>(se), 1e-9);
  }
}

TEST(Aggregate, SkipsTruncatedEpisodes) {
  agents::EpisodeRecord done;
  done.cumulative_reward = 50;
  done.exited = true;
  agents::EpisodeRecord cut = done;
  cut.truncated = true;
  const auto s = aggregate({{done, done, cut}, {done, done}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].exit_rate, 1.0);
  EXPECT_EQ(s[1].n_trials, 2);
}

TEST(Config, DefaultsAndEchoRoundTrip) {
  const auto c = small_config("erd_cfg");
  ASSERT_EQ(c.learners.size(), 3u);
  EXPECT_EQ(c.learners[0].epsilon.decay_steps, 1500);
  EXPECT_EQ(c.action_mode, agents::ActionMode::Primitives);
  const auto echo = to_json(c);
  const auto back = parse_experiment_config(nlohmann::json::parse(echo.dump()));
  EXPECT_EQ(to_json(back).dump(), echo.dump());
  EXPECT_EQ(back.instance, c.instance);
}

TEST(Config, Rejections) {
  const nlohmann::json base{{"generate", {{"buttons", 1}, {"seed", 0}}}};
  auto with = [&](const char* key, nlohmann::json v) {
    auto d = base;
    d[key] = v;
    return d;
  };
  EXPECT_THROW(parse_experiment_config(with("colour", "red")), ConfigError);
  EXPECT_THROW(parse_experiment_config(with("trials", 0)), ConfigError);
  EXPECT_THROW(parse_experiment_config(with("mode", "fast")), ConfigError);
  EXPECT_THROW(parse_experiment_config(with("action_mode", "both")), ConfigError);
  EXPECT_THROW(parse_experiment_config(with("learners", nlohmann::json::array({{{"algorithm", "DQN"}}}))),
               ConfigError);
  EXPECT_THROW(parse_experiment_config(with("instance_file", "x.json")), ConfigError);
  EXPECT_THROW(parse_experiment_config(nlohmann::json::object()), ConfigError);
}

TEST(Config, InstanceFileRelativeToConfig) {
  const fs::path dir = fs::temp_directory_path() / "erd_cfg_dir";
  fs::create_directories(dir);
  instance::save_instance(instance::ordered_two_button(), dir / "room.json");
  std::ofstream(dir / "exp.json") << R"({"instance_file": "room.json", "trials": 2})";
  const auto c = load_experiment_config(dir / "exp.json");
  EXPECT_EQ(c.instance, instance::ordered_two_button());
  EXPECT_EQ(c.trials, 2);
  fs::remove_all(dir);
}

TEST(TrialSeeds, DistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (int l = 0; l < 3; ++l)
    for (int t = 0; t < 10; ++t) seen.insert(trial_seed(5, l, t));
  EXPECT_EQ(seen.size(), 30u);
  EXPECT_EQ(trial_seed(5, 1, 2), trial_seed(5, 1, 2));
  EXPECT_NE(trial_seed(5, 1, 2), trial_seed(6, 1, 2));
}

TEST(Run, OutputsAreByteIdenticalAcrossRunsAndModes) {
  auto c = small_config("erd_run_a");
  const auto a = run(c);
  write_outputs(c, a);
  auto c2 = small_config("erd_run_b");
  write_outputs(c2, run(c2));
  auto c3 = small_config("erd_run_c");
  c3.mode = RunMode::Debug;
  std::ostringstream log;
  write_outputs(c3, run(c3, &log));

  const std::string results = slurp(c.output_dir / "results.csv");
  EXPECT_EQ(results, slurp(c2.output_dir / "results.csv"));
  EXPECT_EQ(results, slurp(c3.output_dir / "results.csv"));
  EXPECT_EQ(slurp(c.output_dir / "summary.csv"), slurp(c3.output_dir / "summary.csv"));

  // one row per episode, steps add up to the budget in every trial
  const auto rows = lines(results);
  ASSERT_EQ(rows.front(), kResultsHeader);
  std::size_t episodes = 0;
  for (const auto& lr : a.learners)
    for (const auto& t : lr.trials) {
      episodes += t.size();
      long long steps = 0;
      for (const auto& e : t) steps += e.steps;
      EXPECT_EQ(steps, 3000);
    }
  EXPECT_EQ(rows.size(), episodes + 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    ASSERT_EQ(cells.size(), 11u);
    EXPECT_EQ(std::stoll(cells[5]) - std::stoll(cells[4]), std::stoll(cells[6]));
  }
  EXPECT_EQ(lines(slurp(c.output_dir / "summary.csv")).front(), kSummaryHeader);
  EXPECT_EQ(lines(slurp(c.output_dir / "MANIFEST")).front(), "status: complete");
  const auto echoed = parse_experiment_config(nlohmann::json::parse(slurp(c.output_dir / "config.echo")));
  EXPECT_EQ(echoed.instance, c.instance);

  // the debug log replays exactly
  std::istringstream in(log.str());
  const auto report = replay(in);
  EXPECT_TRUE(report.ok()) << report.mismatches.front();
  EXPECT_EQ(report.episodes, static_cast<int>(episodes));
  EXPECT_EQ(report.steps, 3LL * 3 * 3000);
  for (auto* cfg : {&c, &c2, &c3}) fs::remove_all(cfg->output_dir);
}

TEST(Run, ReleaseModeWritesNoDiagnostics) {
  auto c = small_config("erd_release");
  std::ostringstream log;
  run(c, &log);
  EXPECT_TRUE(log.str().empty());
}

TEST(Run, SingleShortTrialIsQuick) {
  auto c = small_config("erd_quick");
  c.trials = 1;
  c.training_timesteps = 1000;
  c.learners.resize(1);
  const auto start = std::chrono::steady_clock::now();
  const auto r = run(c);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 5.0);
  ASSERT_EQ(r.learners.size(), 1u);
  ASSERT_EQ(r.learners[0].trials.size(), 1u);
}

TEST(Run, ManifestRecordsFailures) {
  auto c = small_config("erd_failed");
  ExperimentResult r;
  r.learners.resize(1);
  r.learners[0].trials.resize(2);
  r.learners[0].trials[0].push_back(agents::EpisodeRecord{});
  r.failures.push_back("learner 0 trial 1: out of memory");
  write_outputs(c, r);
  const auto m = lines(slurp(c.output_dir / "MANIFEST"));
  EXPECT_EQ(m.front(), "status: incomplete");
  EXPECT_NE(std::find(m.begin(), m.end(), "learner 0 QLearning: 1/2 trials"), m.end());
  EXPECT_NE(std::find(m.begin(), m.end(), "failed: learner 0 trial 1: out of memory"), m.end());
  fs::remove_all(c.output_dir);
}

TEST(Diagnostics, OptimalEpisodeIsStepsPlusTwoLines) {
  const auto inst = instance::baseline_one_button();
  std::ostringstream out;
  DiagnosticsWriter w(out, inst, 0, 0);
  EnvState s = reset(inst, 0);
  w.episode_begin(0, s);
  agents::EpisodeRecord rec;
  while (!s.exited) {
    const Transition t = step(s, Action::forward(), inst);
    w.primitive(s, Action::forward(), t);
    rec.cumulative_reward += t.reward;
    ++rec.steps;
    s = t.next;
  }
  rec.exited = true;
  w.episode_end(0, rec);
  const auto ls = lines(out.str());
  ASSERT_EQ(rec.steps, 8);
  EXPECT_EQ(ls.size(), 10u);
  const auto end = nlohmann::json::parse(ls.back());
  EXPECT_EQ(end["cumulative_reward"], 92);
  EXPECT_EQ(nlohmann::json::parse(ls[4])["touched"][0]["button"], 0);

  // replay tolerates foreign lines but catches a doctored reward
  std::istringstream mixed("warning: something\n" + out.str());
  EXPECT_TRUE(replay(mixed).ok());
  auto doctored = nlohmann::json::parse(ls[3]);
  doctored["reward"] = 5;
  std::string text;
  for (std::size_t i = 0; i < ls.size(); ++i) text += (i == 3 ? doctored.dump() : ls[i]) + "\n";
  std::istringstream bad(text);
  EXPECT_FALSE(replay(bad).ok());
  std::istringstream broken(ls[0] + "\n{\"event\":\"step\"}\n");
  EXPECT_THROW(replay(broken), ParseError);
}
