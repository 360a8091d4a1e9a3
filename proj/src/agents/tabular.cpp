#include "erd/agents/tabular.hpp"

#include <algorithm>
#include <cmath>

#include "erd/errors.hpp"

namespace erd::agents {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::QLearning: return "QLearning";
    case Algorithm::Sarsa: return "Sarsa";
    case Algorithm::RandomPolicy: return "RandomPolicy";
  }
  return "?";
}

bool parse_algorithm(std::string_view text, Algorithm& out) {
  if (text == "QLearning") out = Algorithm::QLearning;
  else if (text == "Sarsa") out = Algorithm::Sarsa;
  else if (text == "RandomPolicy") out = Algorithm::RandomPolicy;
  else return false;
  return true;
}

double EpsilonSchedule::at(long long step) const {
  if (decay_steps <= 0 || step >= decay_steps) return final;
  const double frac = static_cast<double>(step) / static_cast<double>(decay_steps);
  return initial + (final - initial) * frac;
}

std::vector<std::string> config_violations(const LearnerConfig& c) {
  std::vector<std::string> out;
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) out.push_back("alpha must lie in (0, 1]");
  if (!(c.gamma >= 0.0 && c.gamma <= 1.0)) out.push_back("gamma must lie in [0, 1]");
  const auto& e = c.epsilon;
  if (!(e.initial >= 0.0 && e.initial <= 1.0 && e.final >= 0.0 && e.final <= 1.0))
    out.push_back("epsilon values must lie in [0, 1]");
  if (e.final > e.initial) out.push_back("epsilon schedule must be non-increasing");
  if (e.decay_steps < 0) out.push_back("epsilon decay_steps must be non-negative");
  if (c.training_timesteps < 1) out.push_back("training_timesteps must be at least 1");
  return out;
}

std::size_t DiscretizedKeyHash::operator()(const DiscretizedKey& k) const noexcept {
  std::uint64_t h = rng::splitmix64(static_cast<std::uint64_t>(k.cell_x) * 0x100000001B3ULL ^
                                    static_cast<std::uint64_t>(k.cell_y));
  h = rng::splitmix64(h ^ static_cast<std::uint64_t>(k.heading_bucket));
  h = rng::splitmix64(h ^ k.puzzle);
  for (int j : k.joint_buckets) h = rng::splitmix64(h ^ static_cast<std::uint64_t>(j));
  return static_cast<std::size_t>(h);
}

DiscretizedKey discretize(const EnvState& state) {
  DiscretizedKey k;
  k.cell_x = static_cast<int>(std::floor(state.pose.x));
  k.cell_y = static_cast<int>(std::floor(state.pose.y));
  k.heading_bucket = std::clamp(static_cast<int>(std::floor(state.pose.heading / kTurnStep)), 0, 35);
  for (std::size_t i = 0; i < state.puzzle.size() && i < 64; ++i)
    if (state.puzzle[i]) k.puzzle |= std::uint64_t{1} << i;
  k.joint_buckets.reserve(state.joints.size());
  for (double a : state.joints)
    k.joint_buckets.push_back(static_cast<int>(std::floor((a + kJointLimit) / kJointStep)));
  return k;
}

const std::vector<double>* QTable::row(const DiscretizedKey& key) const {
  const auto it = rows_.find(key);
  return it == rows_.end() ? nullptr : &it->second;
}

double QTable::get(const DiscretizedKey& key, int action) const {
  const auto* r = row(key);
  return r ? (*r)[static_cast<std::size_t>(action)] : 0.0;
}

void QTable::set(const DiscretizedKey& key, int action, double value) {
  if (action < 0 || action >= num_actions_) throw UsageError("action index out of range for q-table");
  auto [it, inserted] = rows_.try_emplace(key);
  if (inserted) it->second.assign(static_cast<std::size_t>(num_actions_), 0.0);
  it->second[static_cast<std::size_t>(action)] = value;
}

double QTable::max_over(const DiscretizedKey& key, std::span<const int> actions) const {
  const auto* r = row(key);
  if (!r || actions.empty()) return 0.0;
  double best = (*r)[static_cast<std::size_t>(actions[0])];
  for (int a : actions) best = std::max(best, (*r)[static_cast<std::size_t>(a)]);
  return best;
}

int select_action(const QTable& table, const DiscretizedKey& key, std::span<const int> legal, double epsilon,
                  rng::Rng& rng) {
  if (legal.empty()) throw UsageError("select_action needs at least one legal action");
  if (epsilon > 0.0 && rng.uniform() < epsilon) return legal[rng.below(legal.size())];
  int best = legal[0];
  double best_q = table.get(key, best);
  for (int a : legal.subspan(1)) {
    const double q = table.get(key, a);
    if (q > best_q) best = a, best_q = q;
  }
  return best;
}

void q_update(QTable& table, const DiscretizedKey& key, int action, double reward, const DiscretizedKey& next_key,
              std::span<const int> next_legal, bool terminal, const LearnerConfig& config) {
  const double q = table.get(key, action);
  const double target = reward + (terminal ? 0.0 : config.gamma * table.max_over(next_key, next_legal));
  table.set(key, action, q + config.alpha * (target - q));
}

void sarsa_update(QTable& table, const DiscretizedKey& key, int action, double reward, const DiscretizedKey& next_key,
                  int next_action, bool terminal, const LearnerConfig& config) {
  const double q = table.get(key, action);
  const double target = reward + (terminal ? 0.0 : config.gamma * table.get(next_key, next_action));
  table.set(key, action, q + config.alpha * (target - q));
}

}  // namespace erd::agents
