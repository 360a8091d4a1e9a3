#pragma once

// Tabular value learners over a quantised Escape Room state.

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "erd/core/types.hpp"
#include "erd/rng.hpp"

namespace erd::agents {

enum class Algorithm { QLearning, Sarsa, RandomPolicy };

std::string_view to_string(Algorithm algorithm);
bool parse_algorithm(std::string_view text, Algorithm& out);

/// Linear decay from `initial` to `final` over `decay_steps` primitive steps.
struct EpsilonSchedule {
  double initial = 1.0;
  double final = 0.05;
  int decay_steps = 10000;

  double at(long long step) const;
};

struct LearnerConfig {
  Algorithm algorithm = Algorithm::QLearning;
  double alpha = 0.1;
  double gamma = 0.99;
  EpsilonSchedule epsilon;
  int training_timesteps = 20000;
  std::uint64_t seed = 0;
};

/// Empty when the config is usable; otherwise one message per problem.
std::vector<std::string> config_violations(const LearnerConfig& config);

/// 1 m position cells, 10 degree heading buckets, puzzle bits verbatim and,
/// when the agent has joints, 10 degree joint buckets.
struct DiscretizedKey {
  int cell_x = 0;
  int cell_y = 0;
  int heading_bucket = 0;
  std::uint64_t puzzle = 0;  // bit i = button i
  std::vector<int> joint_buckets;

  friend bool operator==(const DiscretizedKey&, const DiscretizedKey&) = default;
};

struct DiscretizedKeyHash {
  std::size_t operator()(const DiscretizedKey& k) const noexcept;
};

DiscretizedKey discretize(const EnvState& state);

/// Q-values keyed by discretised state; missing entries read as 0.
class QTable {
 public:
  explicit QTable(int num_actions) : num_actions_(num_actions) {}

  int num_actions() const { return num_actions_; }
  std::size_t size() const { return rows_.size(); }

  double get(const DiscretizedKey& key, int action) const;
  void set(const DiscretizedKey& key, int action, double value);
  /// Largest Q over `actions` (0 for an unseen state).
  double max_over(const DiscretizedKey& key, std::span<const int> actions) const;
  bool contains(const DiscretizedKey& key) const { return rows_.count(key) != 0; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [key, row] : rows_) fn(key, row);
  }

 private:
  const std::vector<double>* row(const DiscretizedKey& key) const;

  int num_actions_;
  std::unordered_map<DiscretizedKey, std::vector<double>, DiscretizedKeyHash> rows_;
};

/// Epsilon-greedy over `legal` action indices: with probability epsilon a
/// uniform legal action, otherwise the greedy one with the lowest index
/// winning ties. `legal` must be non-empty and ascending.
int select_action(const QTable& table, const DiscretizedKey& key, std::span<const int> legal, double epsilon,
                  rng::Rng& rng);

/// Q <- Q + alpha * (r + gamma * max_a' Q(s', a') - Q); bootstrap 0 when terminal.
void q_update(QTable& table, const DiscretizedKey& key, int action, double reward, const DiscretizedKey& next_key,
              std::span<const int> next_legal, bool terminal, const LearnerConfig& config);

/// Q <- Q + alpha * (r + gamma * Q(s', a') - Q); bootstrap 0 when terminal.
void sarsa_update(QTable& table, const DiscretizedKey& key, int action, double reward, const DiscretizedKey& next_key,
                  int next_action, bool terminal, const LearnerConfig& config);

}  // namespace erd::agents
