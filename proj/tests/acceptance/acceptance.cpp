// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "erd/agents/training.hpp"
#include "erd/harness/experiment.hpp"
#include "erd/instance/generator.hpp"
#include "erd/instance/serialization.hpp"
#include "erd/meta/meta_actions.hpp"
#include "erd/meta/planner.hpp"
#include "erd/puzzle/button_puzzle.hpp"
#include "../support/cases.hpp"
#include "../support/oracles.hpp"

using namespace erd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int number, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = limit_seconds <= 0 || secs < limit_seconds;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  char timing[64];
  if (limit_seconds > 0)
    std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", secs, limit_seconds);
  else
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
  std::printf("%s criterion %d (%s): %s [%s]\n", pass ? "PASS" : "FAIL", number, title, o.detail.c_str(), timing);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

harness::ExperimentConfig experiment(const InstanceConfig& inst, agents::ActionMode mode, int steps,
                                     std::initializer_list<agents::Algorithm> algorithms) {
  harness::ExperimentConfig c;
  c.instance = inst;
  c.trials = 10;
  c.training_timesteps = steps;
  c.action_mode = mode;
  c.master_seed = 2024;
  for (auto a : algorithms) {
    agents::LearnerConfig l;
    l.algorithm = a;
    l.training_timesteps = steps;
    l.epsilon.decay_steps = steps / 2;
    c.learners.push_back(l);
  }
  return c;
}

struct Window {
  int episodes = 0;
  double exit_rate = 0;
  double mean_normalized = 0;
  double optimal_rate = 0;
};

// Final 100 complete episodes of every trial, pooled.
Window final_window(const harness::LearnerResult& lr, int optimal_steps) {
  Window w;
  int exits = 0, optimal = 0;
  double normalized = 0;
  for (const auto& trial : lr.trials)
    for (const auto& e : agents::final_complete_episodes(trial, 100)) {
      ++w.episodes;
      exits += e.exited;
      optimal += e.exited && e.steps == optimal_steps;
      normalized += e.normalized;
    }
  if (w.episodes > 0) {
    w.exit_rate = 100.0 * exits / w.episodes;
    w.mean_normalized = normalized / w.episodes;
    w.optimal_rate = 100.0 * optimal / w.episodes;
  }
  return w;
}

Outcome reward_constants() {
  // random walks in the canonical room and in small generated rooms, so
  // both step-cap and exit endings occur
  SchematicParams small;
  small.room_width = 6.0;
  small.room_depth = 6.0;
  int exits = 0, capped = 0;
  for (int i = 0; i < 1000; ++i) {
    const InstanceConfig inst =
        i % 2 ? instance::baseline_one_button() : instance::generate(small, static_cast<std::uint64_t>(i));
    const ActionSpace space(inst.num_joints, inst.num_buttons, false);
    rng::Rng r(static_cast<std::uint64_t>(i) * 31 + 7);
    EnvState s = reset(inst, static_cast<std::uint64_t>(i));
    double total = 0;
    while (true) {
      const Transition t = step(s, space.at(static_cast<int>(r.below(static_cast<std::uint64_t>(space.size())))), inst);
      const double expected = t.next.exited ? 99.0 : -1.0;
      if (t.reward != expected) return {false, fmt("episode %.0f: step reward %g", i, t.reward)};
      total += t.reward;
      s = t.next;
      if (t.done) break;
    }
    if (s.steps_taken > 1000 || (!s.exited && s.steps_taken != 1000))
      return {false, fmt("episode %.0f ended after %.0f steps", i, s.steps_taken)};
    if (total != 100.0 * s.exited - s.steps_taken)
      return {false, fmt("episode %.0f: cumulative %g", i, total)};
    exits += s.exited;
    capped += !s.exited;
  }
  return {true, fmt("1000 episodes, %.0f exits, %.0f capped, every return = 100*exited - steps", exits, capped)};
}

Outcome optimal_route_magnitude() {
  const auto inst = instance::baseline_one_button();
  EnvState s = reset(inst, 0);
  const Transition a = meta::execute_meta(s, 0, inst);
  const Transition b = meta::execute_meta(a.next, kExitTarget, inst);
  const double total = a.reward + b.reward;
  return {b.next.exited && total >= 85 && total <= 95, fmt("[Meta(0), Meta(exit)] raw reward %g", total)};
}

Outcome hierarchy_necessity() {
  const auto inst = instance::ordered_two_button();
  const auto c = experiment(inst, agents::ActionMode::Primitives, 20000,
                            {agents::Algorithm::QLearning, agents::Algorithm::Sarsa, agents::Algorithm::RandomPolicy});
  const auto result = harness::run(c);
  if (!result.complete()) return {false, result.failures.front()};
  const int opt = meta::optimal_route(inst).steps;
  bool ok = true;
  std::string detail;
  for (const auto& lr : result.learners) {
    const Window w = final_window(lr, opt);
    ok = ok && w.exit_rate == 0.0 && w.mean_normalized <= 10.0;
    detail += std::string(agents::to_string(lr.learner.algorithm)) +
              fmt(" exit %.1f%% normalized %.2f%%; ", w.exit_rate, w.mean_normalized);
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

Outcome meta_recovery() {
  const auto inst = instance::ordered_two_button();
  const auto c = experiment(inst, agents::ActionMode::WithMeta, 20000,
                            {agents::Algorithm::QLearning, agents::Algorithm::Sarsa, agents::Algorithm::RandomPolicy});
  const auto result = harness::run(c);
  if (!result.complete()) return {false, result.failures.front()};
  const int opt = meta::optimal_route(inst).steps;
  bool ok = false;
  std::string detail;
  for (const auto& lr : result.learners) {
    const Window w = final_window(lr, opt);
    if (lr.learner.algorithm == agents::Algorithm::QLearning) ok = w.exit_rate >= 80.0 && w.mean_normalized >= 80.0;
    detail += std::string(agents::to_string(lr.learner.algorithm)) +
              fmt(" exit %.1f%% normalized %.2f%%; ", w.exit_rate, w.mean_normalized);
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

Outcome primitive_learning() {
  const auto inst = instance::baseline_one_button();
  const int steps = 3'000'000;
  const auto c = experiment(inst, agents::ActionMode::Primitives, steps,
                            {agents::Algorithm::QLearning, agents::Algorithm::Sarsa});
  const auto result = harness::run(c);
  if (!result.complete()) return {false, result.failures.front()};
  const int opt = meta::optimal_route(inst).steps;
  bool ok = true;
  std::string detail = fmt("%.0f steps x 10 trials; ", steps);
  for (const auto& lr : result.learners) {
    const Window w = final_window(lr, opt);
    ok = ok && w.optimal_rate >= 25.0;
    detail += std::string(agents::to_string(lr.learner.algorithm)) +
              fmt(" optimal %.1f%% of %.0f episodes; ", w.optimal_rate, w.episodes);
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

Outcome puzzle_soundness() {
  long long sequences = 0;
  for (int n = 1; n <= 4; ++n)
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
      const auto dag = puzzle::generate_dag(n, seed);
      if (!puzzle::dag_violations(dag).empty()) return {false, fmt("n=%.0f seed %.0f violates", n, seed)};
      if (dag.goal_index < 0 || dag.goal_index >= n) return {false, fmt("n=%.0f seed %.0f goal", n, seed)};
      puzzle::PuzzleBits bits(static_cast<std::size_t>(n), false);
      for (int b : puzzle::solve_order(dag)) bits = puzzle::apply_press(bits, b, dag);
      if (!puzzle::is_unlocked(bits, dag)) return {false, fmt("n=%.0f seed %.0f solve_order fails", n, seed)};

      std::vector<std::vector<int>> parents(static_cast<std::size_t>(n));
      std::vector<std::pair<int, int>> edges;
      for (const auto& e : dag.edges) {
        parents[e.child].push_back(e.parent);
        edges.emplace_back(e.parent, e.child);
      }
      bool sound = true;
      oracle::for_each_press_sequence(
          n, edges, n, [&](const std::vector<int>&, const std::vector<bool>& before, int b, const std::vector<bool>&) {
            ++sequences;
            const auto after = puzzle::apply_press(before, b, dag);
            for (int i = 0; i < n; ++i) {
              if (before[i] && !after[i]) sound = false;  // latching
              if (!after[i]) continue;
              for (int p : parents[i])
                if (!after[p]) sound = false;
            }
          });
      if (!sound) return {false, fmt("n=%.0f seed %.0f: a bit set before its parents", n, seed)};
    }
  return {true, fmt("40000 DAGs, %.0f press transitions checked", static_cast<double>(sequences))};
}

Outcome planner_quality() {
  rng::Rng r(99);
  int worst = 0;
  for (int i = 0; i < 100; ++i) {
    const auto c = cases::random_planning_case(r);
    const auto region = meta::target_region(c.instance, c.target);
    const auto plan = meta::plan(c.pose, region, c.instance.room);
    Pose p = c.pose;
    for (const auto& a : plan.actions) p = apply_movement(p, a, c.instance.room);
    if (!region.contains(p.position())) return {false, fmt("case %.0f ends outside the target", i)};
    const auto best = oracle::shortest_route(cases::oracle_start(c.pose), cases::oracle_target(c.instance, c.target),
                                             {c.instance.room.width, c.instance.room.depth});
    if (!best) return {false, fmt("case %.0f: oracle found no route", i)};
    if (plan.length > *best + 4) return {false, fmt("case %.0f: %.0f vs optimal %.0f", i, plan.length, *best)};
    worst = std::max(worst, plan.length - *best);
  }
  return {true, fmt("100 cases, worst excess over lattice optimum %.0f", worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  auto c = experiment(instance::ordered_two_button(), agents::ActionMode::WithMeta, 5000,
                      {agents::Algorithm::QLearning, agents::Algorithm::Sarsa, agents::Algorithm::RandomPolicy});
  c.output_dir = fs::temp_directory_path() / "erd_acceptance_a";
  harness::write_outputs(c, harness::run(c));
  auto d = c;
  d.output_dir = fs::temp_directory_path() / "erd_acceptance_b";
  harness::write_outputs(d, harness::run(d));
  const std::string a = slurp(c.output_dir / "results.csv"), b = slurp(d.output_dir / "results.csv");
  fs::remove_all(c.output_dir);
  fs::remove_all(d.output_dir);
  if (a.empty() || a != b) return {false, "results.csv differs between runs"};

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SchematicParams p;
    p.num_buttons = 1 + static_cast<int>(seed % 4);
    p.num_joints = static_cast<int>(seed % 3);
    p.randomize_start = seed % 2 == 1;
    const auto inst = instance::generate(p, seed);
    const std::string text = instance::serialize(inst);
    const auto back = instance::deserialize(text);
    if (!(back == inst) || instance::serialize(back) != text)
      return {false, fmt("instance %.0f does not round-trip", static_cast<double>(seed))};
  }
  return {true, fmt("results.csv identical (%.0f bytes); 100 instances round-trip", static_cast<double>(a.size()))};
}

Outcome throughput() {
  const auto inst = instance::ordered_two_button();
  const ActionSpace space(inst.num_joints, inst.num_buttons, false);
  rng::Rng r(1);
  EnvState s = reset(inst, 0);
  const long long n = 3'000'000;
  long long episodes = 0;
  const auto start = std::chrono::steady_clock::now();
  for (long long i = 0; i < n; ++i) {
    const Transition t = step(s, space.at(static_cast<int>(r.below(6))), inst);
    s = t.done ? reset(inst, static_cast<std::uint64_t>(++episodes)) : t.next;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double rate = static_cast<double>(n) / secs;
  return {rate >= 100000.0, fmt("%.0f primitive steps/s over %.0f steps", rate, static_cast<double>(n))};
}

}  // namespace

int main() {
  criterion(1, "reward constants", 5, reward_constants);
  criterion(2, "optimal route magnitude", 1, optimal_route_magnitude);
  criterion(3, "primitives only, 2-button ordered", 60, hierarchy_necessity);
  criterion(4, "meta-actions, 2-button ordered", 60, meta_recovery);
  criterion(5, "primitives only, 1-button", 60, primitive_learning);
  criterion(6, "puzzle soundness", 30, puzzle_soundness);
  criterion(7, "planner quality", 30, planner_quality);
  criterion(8, "determinism", 0, determinism);
  criterion(9, "throughput", 0, throughput);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
