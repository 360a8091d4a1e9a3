#include "erd/agents/training.hpp"

#include <cstdio>
#include <stdexcept>

#include "erd/core/env.hpp"
#include "erd/errors.hpp"
#include "erd/meta/meta_actions.hpp"

namespace erd::agents {

std::string_view to_string(ActionMode mode) { return mode == ActionMode::WithMeta ? "with-meta" : "primitives"; }

bool parse_action_mode(std::string_view text, ActionMode& out) {
  if (text == "primitives" || text == "off") out = ActionMode::Primitives;
  else if (text == "with-meta" || text == "on") out = ActionMode::WithMeta;
  else return false;
  return true;
}

std::string instance_id(const InstanceConfig& instance) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "erd-%016llx", static_cast<unsigned long long>(instance.instance_seed));
  return buf;
}

namespace {

std::vector<int> legal_indices(const EnvState& s, const InstanceConfig& inst, const ActionSpace& space) {
  std::vector<int> out;
  if (!space.meta_enabled()) {
    // every primitive is always legal
    out.resize(static_cast<std::size_t>(space.primitive_count()));
    for (int i = 0; i < space.primitive_count(); ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
  }
  for (const Action& a : meta::legal_actions(s, inst, true)) out.push_back(space.index_of(a));
  return out;
}

}  // namespace

std::vector<EpisodeRecord> run_training(const InstanceConfig& instance, const LearnerConfig& learner, ActionMode mode,
                                        TrainingListener* listener) {
  if (auto problems = config_violations(learner); !problems.empty())
    throw ConfigError("invalid learner config: " + problems.front());
  const bool with_meta = mode == ActionMode::WithMeta;
  const ActionSpace space(instance.num_joints, instance.num_buttons, with_meta);
  const ReturnBounds bounds = meta::return_bounds(instance);
  const std::string id = instance_id(instance);

  QTable table(space.size());
  rng::Rng rng(rng::derive(learner.seed, 0));
  const bool learns = learner.algorithm != Algorithm::RandomPolicy;
  auto choose = [&](const DiscretizedKey& key, const std::vector<int>& legal, long long clock) {
    const double eps = learns ? learner.epsilon.at(clock) : 1.0;
    return select_action(table, key, legal, eps, rng);
  };

  meta::PrimitiveObserver observer;
  if (listener)
    observer = [listener](const EnvState& before, const Action& a, const Transition& t) {
      listener->primitive(before, a, t);
    };

  std::vector<EpisodeRecord> records;
  long long clock = 0;
  for (int episode = 0; clock < learner.training_timesteps; ++episode) {
    EpisodeRecord rec;
    rec.instance_id = id;
    rec.seed = rng::derive(learner.seed, 1000 + static_cast<std::uint64_t>(episode));
    rec.start_timestep = clock;
    EnvState s = reset(instance, rec.seed);
    if (listener) listener->episode_begin(episode, s);

    DiscretizedKey key = discretize(s);
    std::vector<int> legal = legal_indices(s, instance, space);
    int a = choose(key, legal, clock);
    while (true) {
      const Transition t = meta::dispatch(s, space.at(a), instance, observer);
      clock += t.info.primitives;
      rec.actions.push_back(a);
      rec.rewards.push_back(t.reward);
      rec.cumulative_reward += t.reward;

      const DiscretizedKey next_key = discretize(t.next);
      if (t.done) {
        if (learns) q_update(table, key, a, t.reward, next_key, {}, true, learner);
        s = t.next;
        break;
      }
      if (with_meta) legal = legal_indices(t.next, instance, space);
      const std::vector<int>& next_legal = legal;
      int next_a = 0;
      if (learner.algorithm == Algorithm::Sarsa) {
        next_a = choose(next_key, next_legal, clock);
        sarsa_update(table, key, a, t.reward, next_key, next_a, false, learner);
      } else {
        if (learns) q_update(table, key, a, t.reward, next_key, next_legal, false, learner);
        next_a = choose(next_key, next_legal, clock);
      }
      s = t.next;
      key = next_key;
      a = next_a;
      if (clock >= learner.training_timesteps) {
        rec.truncated = true;
        break;
      }
    }

    rec.exited = s.exited;
    rec.steps = s.steps_taken;
    const double expected = (rec.exited ? instance.exit_reward : 0.0) + instance.step_reward * rec.steps;
    if (rec.cumulative_reward != expected)
      throw std::logic_error("reward accounting violated: cumulative " + std::to_string(rec.cumulative_reward) +
                             " != " + std::to_string(expected));
    rec.normalized = normalize_return(rec.cumulative_reward, bounds);
    if (listener) listener->episode_end(episode, rec);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<EpisodeRecord> final_complete_episodes(const std::vector<EpisodeRecord>& records, std::size_t count) {
  std::vector<EpisodeRecord> complete;
  for (const auto& r : records)
    if (!r.truncated) complete.push_back(r);
  if (complete.size() > count) complete.erase(complete.begin(), complete.end() - static_cast<std::ptrdiff_t>(count));
  return complete;
}

}  // namespace erd::agents
