#include "erd/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "erd/errors.hpp"
#include "erd/harness/diagnostics.hpp"
#include "erd/instance/generator.hpp"
#include "erd/instance/serialization.hpp"
#include "erd/rng.hpp"

namespace erd::harness {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(RunMode mode) { return mode == RunMode::Debug ? "debug" : "release"; }

bool parse_run_mode(std::string_view text, RunMode& out) {
  if (text == "release") out = RunMode::Release;
  else if (text == "debug") out = RunMode::Debug;
  else return false;
  return true;
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
T read(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

agents::LearnerConfig parse_learner(const json& doc, int training_timesteps, const std::string& where) {
  reject_unknown(doc, {"algorithm", "alpha", "gamma", "epsilon"}, where);
  agents::LearnerConfig l;
  const auto name = read<std::string>(doc, "algorithm", "", where);
  if (!agents::parse_algorithm(name, l.algorithm))
    throw ConfigError(where + ".algorithm must be QLearning, Sarsa or RandomPolicy (got '" + name + "')");
  l.alpha = read(doc, "alpha", l.alpha, where);
  l.gamma = read(doc, "gamma", l.gamma, where);
  l.training_timesteps = training_timesteps;
  l.epsilon.decay_steps = training_timesteps / 2;
  if (doc.contains("epsilon")) {
    const auto& e = doc.at("epsilon");
    const std::string ew = where + ".epsilon";
    reject_unknown(e, {"initial", "final", "decay_steps"}, ew);
    l.epsilon.initial = read(e, "initial", l.epsilon.initial, ew);
    l.epsilon.final = read(e, "final", l.epsilon.final, ew);
    l.epsilon.decay_steps = read(e, "decay_steps", l.epsilon.decay_steps, ew);
  }
  return l;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& doc, const std::filesystem::path& base_dir) {
  reject_unknown(doc,
                 {"instance", "instance_file", "generate", "learners", "trials", "training_timesteps", "action_mode",
                  "mode", "output_dir", "master_seed"},
                 "experiment config");
  ExperimentConfig c;
  const int sources = static_cast<int>(doc.contains("instance")) + static_cast<int>(doc.contains("instance_file")) +
                      static_cast<int>(doc.contains("generate"));
  if (sources != 1) throw ConfigError("experiment config needs exactly one of instance, instance_file, generate");
  if (doc.contains("instance")) {
    c.instance = instance::from_json(doc.at("instance"));
  } else if (doc.contains("instance_file")) {
    std::filesystem::path p = read<std::string>(doc, "instance_file", "", "experiment config");
    if (p.is_relative()) p = base_dir / p;
    c.instance = instance::load_instance(p);
  } else {
    const auto& g = doc.at("generate");
    reject_unknown(g, {"buttons", "seed"}, "generate");
    SchematicParams params;
    params.num_buttons = read(g, "buttons", params.num_buttons, "generate");
    c.instance = instance::generate(params, read<std::uint64_t>(g, "seed", 0, "generate"));
  }

  c.trials = read(doc, "trials", c.trials, "experiment config");
  c.training_timesteps = read(doc, "training_timesteps", c.training_timesteps, "experiment config");
  const auto action_mode = read<std::string>(doc, "action_mode", "primitives", "experiment config");
  if (!agents::parse_action_mode(action_mode, c.action_mode))
    throw ConfigError("action_mode must be primitives or with-meta (got '" + action_mode + "')");
  const auto mode = read<std::string>(doc, "mode", "release", "experiment config");
  if (!parse_run_mode(mode, c.mode)) throw ConfigError("mode must be release or debug (got '" + mode + "')");
  c.output_dir = read<std::string>(doc, "output_dir", c.output_dir.string(), "experiment config");
  c.master_seed = read<std::uint64_t>(doc, "master_seed", c.master_seed, "experiment config");

  if (doc.contains("learners")) {
    const auto& list = doc.at("learners");
    if (!list.is_array()) throw ConfigError("learners must be an array");
    for (std::size_t i = 0; i < list.size(); ++i)
      c.learners.push_back(parse_learner(list[i], c.training_timesteps, "learners[" + std::to_string(i) + "]"));
  } else {
    for (const char* name : {"QLearning", "Sarsa", "RandomPolicy"})
      c.learners.push_back(parse_learner(json{{"algorithm", name}}, c.training_timesteps, "learners"));
  }
  if (auto problems = config_violations(c); !problems.empty()) throw ConfigError(problems.front());
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open experiment config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("experiment config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_experiment_config(doc, path.parent_path());
}

ordered_json to_json(const ExperimentConfig& c) {
  ordered_json doc;
  doc["instance"] = instance::to_json(c.instance);
  ordered_json learners = ordered_json::array();
  for (const auto& l : c.learners) {
    ordered_json e;
    e["algorithm"] = std::string(agents::to_string(l.algorithm));
    e["alpha"] = l.alpha;
    e["gamma"] = l.gamma;
    e["epsilon"] = {{"initial", l.epsilon.initial}, {"final", l.epsilon.final}, {"decay_steps", l.epsilon.decay_steps}};
    learners.push_back(e);
  }
  doc["learners"] = learners;
  doc["trials"] = c.trials;
  doc["training_timesteps"] = c.training_timesteps;
  doc["action_mode"] = std::string(agents::to_string(c.action_mode));
  doc["mode"] = std::string(to_string(c.mode));
  doc["output_dir"] = c.output_dir.string();
  doc["master_seed"] = c.master_seed;
  return doc;
}

std::vector<std::string> config_violations(const ExperimentConfig& c) {
  std::vector<std::string> out;
  if (c.trials < 1) out.push_back("trials must be at least 1");
  if (c.training_timesteps < 1) out.push_back("training_timesteps must be at least 1");
  if (c.learners.empty()) out.push_back("at least one learner is required");
  for (std::size_t i = 0; i < c.learners.size(); ++i) {
    auto l = c.learners[i];
    l.training_timesteps = c.training_timesteps;
    for (const auto& p : agents::config_violations(l)) out.push_back("learners[" + std::to_string(i) + "]: " + p);
  }
  for (const auto& p : instance::validate(c.instance)) out.push_back("instance: " + p);
  return out;
}

std::uint64_t trial_seed(std::uint64_t master_seed, int learner_index, int trial) {
  return rng::derive(rng::derive(master_seed, 100 + static_cast<std::uint64_t>(learner_index)),
                     static_cast<std::uint64_t>(trial));
}

agents::LearnerConfig trial_learner(const ExperimentConfig& config, int learner_index, int trial) {
  agents::LearnerConfig l = config.learners.at(static_cast<std::size_t>(learner_index));
  l.training_timesteps = config.training_timesteps;
  l.seed = trial_seed(config.master_seed, learner_index, trial);
  return l;
}

MeanStderr aggregate_values(const std::vector<std::vector<double>>& series) {
  if (series.empty()) throw UsageError("aggregate needs at least one series");
  std::size_t len = series.front().size();
  for (const auto& s : series) len = std::min(len, s.size());
  const double n = static_cast<double>(series.size());
  MeanStderr out;
  out.mean.resize(len);
  out.standard_error.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    double sum = 0.0;
    for (const auto& s : series) sum += s[i];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& s : series) ss += (s[i] - mean) * (s[i] - mean);
    out.mean[i] = mean;
    out.standard_error[i] = series.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  }
  return out;
}

std::vector<SeriesPoint> aggregate(const std::vector<std::vector<agents::EpisodeRecord>>& trials) {
  if (trials.empty()) throw UsageError("aggregate needs at least one trial");
  std::vector<std::vector<double>> start, reward, normalized, exited;
  for (const auto& trial : trials) {
    auto& s = start.emplace_back();
    auto& r = reward.emplace_back();
    auto& n = normalized.emplace_back();
    auto& e = exited.emplace_back();
    for (const auto& rec : trial) {
      if (rec.truncated) continue;
      s.push_back(static_cast<double>(rec.start_timestep));
      r.push_back(rec.cumulative_reward);
      n.push_back(rec.normalized);
      e.push_back(rec.exited ? 1.0 : 0.0);
    }
  }
  const auto s = aggregate_values(start);
  const auto r = aggregate_values(reward);
  const auto n = aggregate_values(normalized);
  const auto e = aggregate_values(exited);
  std::vector<SeriesPoint> out(s.mean.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].episode = static_cast<int>(i);
    out[i].n_trials = static_cast<int>(trials.size());
    out[i].mean_start_timestep = s.mean[i];
    out[i].mean_reward = r.mean[i];
    out[i].stderr_reward = r.standard_error[i];
    out[i].mean_normalized = n.mean[i];
    out[i].stderr_normalized = n.standard_error[i];
    out[i].exit_rate = e.mean[i];
  }
  return out;
}

ExperimentResult run(const ExperimentConfig& config, std::ostream* diagnostics) {
  if (auto problems = config_violations(config); !problems.empty())
    throw ConfigError("invalid experiment config: " + problems.front());

  const int num_learners = static_cast<int>(config.learners.size());
  ExperimentResult result;
  result.learners.resize(static_cast<std::size_t>(num_learners));
  std::vector<std::string> errors(static_cast<std::size_t>(num_learners * config.trials));
  for (int l = 0; l < num_learners; ++l) {
    result.learners[l].learner = config.learners[l];
    result.learners[l].learner.training_timesteps = config.training_timesteps;
    result.learners[l].trials.resize(static_cast<std::size_t>(config.trials));
  }

  auto run_task = [&](int task, agents::TrainingListener* listener) {
    const int l = task / config.trials;
    const int t = task % config.trials;
    try {
      result.learners[l].trials[t] =
          agents::run_training(config.instance, trial_learner(config, l, t), config.action_mode, listener);
    } catch (const std::exception& e) {
      errors[task] = "learner " + std::to_string(l) + " trial " + std::to_string(t) + ": " + e.what();
    }
  };

  const int tasks = num_learners * config.trials;
  if (config.mode == RunMode::Debug) {
    for (int task = 0; task < tasks; ++task) {
      if (diagnostics) {
        DiagnosticsWriter writer(*diagnostics, config.instance, task / config.trials, task % config.trials);
        run_task(task, &writer);
      } else {
        run_task(task, nullptr);
      }
    }
  } else {
    const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, tasks);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int task = next++; task < tasks; task = next++) run_task(task, nullptr);
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& e : errors)
    if (!e.empty()) result.failures.push_back(e);
  for (auto& lr : result.learners) {
    std::vector<std::vector<agents::EpisodeRecord>> done;
    for (const auto& trial : lr.trials)
      if (!trial.empty()) done.push_back(trial);
    if (!done.empty()) lr.summary = aggregate(done);
  }
  return result;
}

void write_results_csv(std::ostream& out, const ExperimentResult& result) {
  out << kResultsHeader << '\n';
  for (std::size_t l = 0; l < result.learners.size(); ++l) {
    const auto& lr = result.learners[l];
    const std::string_view name = agents::to_string(lr.learner.algorithm);
    for (std::size_t t = 0; t < lr.trials.size(); ++t)
      for (std::size_t e = 0; e < lr.trials[t].size(); ++e) {
        const auto& r = lr.trials[t][e];
        out << l << ',' << name << ',' << t << ',' << e << ',' << r.start_timestep << ','
            << r.start_timestep + r.steps << ',' << r.steps << ',' << fmt(r.cumulative_reward) << ','
            << fmt(r.normalized) << ',' << (r.exited ? 1 : 0) << ',' << (r.truncated ? 1 : 0) << '\n';
      }
  }
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
  out << kSummaryHeader << '\n';
  for (std::size_t l = 0; l < result.learners.size(); ++l) {
    const auto& lr = result.learners[l];
    const std::string_view name = agents::to_string(lr.learner.algorithm);
    for (const auto& p : lr.summary)
      out << l << ',' << name << ',' << p.episode << ',' << p.n_trials << ',' << fmt(p.mean_start_timestep) << ','
          << fmt(p.mean_reward) << ',' << fmt(p.stderr_reward) << ',' << fmt(p.mean_normalized) << ','
          << fmt(p.stderr_normalized) << ',' << fmt(p.exit_rate) << '\n';
  }
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result) {
  const auto& dir = config.output_dir;
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("results.csv");
    write_results_csv(f, result);
  }
  {
    auto f = open("summary.csv");
    write_summary_csv(f, result);
  }
  {
    auto f = open("config.echo");
    f << to_json(config).dump(2) << '\n';
  }
  auto f = open("MANIFEST");
  f << "status: " << (result.complete() ? "complete" : "incomplete") << '\n';
  f << "files: results.csv summary.csv config.echo\n";
  for (std::size_t l = 0; l < result.learners.size(); ++l) {
    const auto& lr = result.learners[l];
    int finished = 0;
    for (const auto& t : lr.trials) finished += !t.empty();
    f << "learner " << l << ' ' << agents::to_string(lr.learner.algorithm) << ": " << finished << '/'
      << lr.trials.size() << " trials\n";
  }
  for (const auto& e : result.failures) f << "failed: " << e << '\n';
}

}  // namespace erd::harness
