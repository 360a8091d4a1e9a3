#pragma once

// Button Puzzle: binary buttons whose presses are gated by a dependency DAG.
// A button latches on once pressed while all of its parents are on; one
// designated goal button unlocks the room's exit.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "erd/core/geometry.hpp"

namespace erd::puzzle {

using PuzzleBits = std::vector<bool>;

inline constexpr int kDefaultMaxButtons = 4;
inline constexpr double kDefaultEdgeProbability = 0.5;

struct Edge {
  int parent = 0;
  int child = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct ButtonDag {
  int num_buttons = 0;
  std::vector<Edge> edges;
  int goal_index = 0;

  std::vector<int> parents_of(int button) const;
  friend bool operator==(const ButtonDag&, const ButtonDag&) = default;
};

struct Button {
  Point2 center;
  double radius = 0.5;

  bool contains(Point2 p) const;
  friend bool operator==(const Button&, const Button&) = default;
};

struct ButtonLayout {
  std::vector<Button> buttons;
  friend bool operator==(const ButtonLayout&, const ButtonLayout&) = default;
};

struct DagOptions {
  int max_buttons = kDefaultMaxButtons;
  double edge_probability = kDefaultEdgeProbability;
};

/// Shuffle a button order, add each forward edge with `edge_probability`,
/// make the last button of the order the goal. Deterministic in `seed`.
ButtonDag generate_dag(int num_buttons, std::uint64_t seed, const DagOptions& options = {});

/// Structural problems with a DAG (empty when well-formed). Messages start
/// with a category: "size", "goal", "edge", "duplicate edge", "acyclicity".
std::vector<std::string> dag_violations(const ButtonDag& dag);

/// Topological order of all nodes, lowest index first among ready nodes;
/// std::nullopt when the graph has a cycle.
std::optional<std::vector<int>> topological_order(const ButtonDag& dag);

bool press_eligible(const ButtonDag& dag, const PuzzleBits& bits, int button);

/// Sets the bit when eligible; any other press leaves `bits` unchanged.
PuzzleBits apply_press(const PuzzleBits& bits, int button, const ButtonDag& dag);

/// Indices of buttons whose disc contains `point`, ascending.
std::vector<int> detect_touches(Point2 point, const ButtonLayout& layout);

bool is_unlocked(const PuzzleBits& bits, const ButtonDag& dag);

/// Ancestors of the goal in topological order (lowest index first among
/// ready nodes), followed by the goal. Buttons unrelated to the goal are
/// left out. Throws ValidationError when the DAG is cyclic or malformed.
std::vector<int> solve_order(const ButtonDag& dag);

}  // namespace erd::puzzle
