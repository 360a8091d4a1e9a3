#include "erd/puzzle/button_puzzle.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "erd/errors.hpp"
#include "erd/rng.hpp"

namespace erd::puzzle {

std::vector<int> ButtonDag::parents_of(int button) const {
  std::vector<int> out;
  for (const auto& e : edges)
    if (e.child == button) out.push_back(e.parent);
  std::sort(out.begin(), out.end());
  return out;
}

bool Button::contains(Point2 p) const {
  const double dx = p.x - center.x;
  const double dy = p.y - center.y;
  return dx * dx + dy * dy <= radius * radius;
}

ButtonDag generate_dag(int num_buttons, std::uint64_t seed, const DagOptions& options) {
  if (num_buttons < 1)
    throw ConfigError("num_buttons must be at least 1 (got " + std::to_string(num_buttons) + ")");
  if (num_buttons > options.max_buttons)
    throw ConfigError("num_buttons " + std::to_string(num_buttons) + " exceeds max_buttons " +
                      std::to_string(options.max_buttons));
  if (!(options.edge_probability >= 0.0 && options.edge_probability <= 1.0))
    throw ConfigError("dag_edge_probability must lie in [0, 1]");

  rng::Rng rng(seed);
  std::vector<int> order(num_buttons);
  std::iota(order.begin(), order.end(), 0);
  for (int i = num_buttons - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }

  ButtonDag dag;
  dag.num_buttons = num_buttons;
  for (int i = 0; i < num_buttons; ++i)
    for (int j = i + 1; j < num_buttons; ++j)
      if (rng.bernoulli(options.edge_probability)) dag.edges.push_back({order[i], order[j]});
  dag.goal_index = order.back();
  return dag;
}

std::vector<std::string> dag_violations(const ButtonDag& dag) {
  std::vector<std::string> out;
  if (dag.num_buttons < 1) {
    out.push_back("size: dag must have at least one button");
    return out;
  }
  if (dag.goal_index < 0 || dag.goal_index >= dag.num_buttons)
    out.push_back("goal: goal_index " + std::to_string(dag.goal_index) + " out of range");
  std::set<std::pair<int, int>> seen;
  bool edges_ok = true;
  for (const auto& e : dag.edges) {
    if (e.parent < 0 || e.parent >= dag.num_buttons || e.child < 0 || e.child >= dag.num_buttons) {
      out.push_back("edge: (" + std::to_string(e.parent) + ", " + std::to_string(e.child) +
                    ") references a missing button");
      edges_ok = false;
    } else if (e.parent == e.child) {
      out.push_back("edge: self-edge on button " + std::to_string(e.parent));
      edges_ok = false;
    } else if (!seen.insert({e.parent, e.child}).second) {
      out.push_back("duplicate edge: (" + std::to_string(e.parent) + ", " +
                    std::to_string(e.child) + ")");
    }
  }
  if (edges_ok && !topological_order(dag))
    out.push_back("acyclicity: dependency graph contains a cycle");
  return out;
}

std::optional<std::vector<int>> topological_order(const ButtonDag& dag) {
  const int n = dag.num_buttons;
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> children(n);
  for (const auto& e : dag.edges) {
    children[e.parent].push_back(e.child);
    ++indegree[e.child];
  }
  // lowest-index-first Kahn
  std::set<int> ready;
  for (int i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.insert(i);
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    const int node = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(node);
    for (int c : children[node])
      if (--indegree[c] == 0) ready.insert(c);
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  return order;
}

namespace {

void check_index(const ButtonDag& dag, int button) {
  if (button < 0 || button >= dag.num_buttons)
    throw UsageError("button index " + std::to_string(button) + " out of range [0, " +
                     std::to_string(dag.num_buttons) + ")");
}

}  // namespace

bool press_eligible(const ButtonDag& dag, const PuzzleBits& bits, int button) {
  check_index(dag, button);
  if (bits.size() != static_cast<std::size_t>(dag.num_buttons))
    throw UsageError("puzzle bit-vector size does not match the dag");
  if (bits[button]) return false;
  for (const auto& e : dag.edges)
    if (e.child == button && !bits[e.parent]) return false;
  return true;
}

PuzzleBits apply_press(const PuzzleBits& bits, int button, const ButtonDag& dag) {
  if (button < 0 || button >= dag.num_buttons || bits.size() != static_cast<std::size_t>(dag.num_buttons))
    return bits;
  if (!press_eligible(dag, bits, button)) return bits;
  PuzzleBits out = bits;
  out[button] = true;
  return out;
}

std::vector<int> detect_touches(Point2 point, const ButtonLayout& layout) {
  std::vector<int> out;
  for (std::size_t i = 0; i < layout.buttons.size(); ++i)
    if (layout.buttons[i].contains(point)) out.push_back(static_cast<int>(i));
  return out;
}

bool is_unlocked(const PuzzleBits& bits, const ButtonDag& dag) {
  if (bits.size() != static_cast<std::size_t>(dag.num_buttons))
    throw UsageError("puzzle bit-vector size does not match the dag");
  return bits[dag.goal_index];
}

std::vector<int> solve_order(const ButtonDag& dag) {
  if (auto problems = dag_violations(dag); !problems.empty())
    throw ValidationError("cannot solve puzzle: " + problems.front());
  const auto order = topological_order(dag);

  std::vector<bool> needed(dag.num_buttons, false);
  needed[dag.goal_index] = true;
  // walk the order backwards so every child is settled before its parents
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    if (!needed[*it]) continue;
    for (const auto& e : dag.edges)
      if (e.child == *it) needed[e.parent] = true;
  }
  std::vector<int> out;
  for (int node : *order)
    if (needed[node]) out.push_back(node);
  return out;
}

}  // namespace erd::puzzle
