#pragma once

#include <cstdint>
#include <vector>

#include "erd/core/geometry.hpp"
#include "erd/puzzle/button_puzzle.hpp"

namespace erd {

inline constexpr int kSchemaVersion = 1;

/// Serial arm on the agent base. Links articulate in the vertical plane
/// containing the heading; joint angles are elevations relative to the
/// previous link. When `enabled`, button touches are detected at the end
/// effector's floor projection instead of the base position.
struct ArmConfig {
  bool enabled = false;
  std::vector<double> link_lengths;
  double mount_height = 0.5;
  friend bool operator==(const ArmConfig&, const ArmConfig&) = default;
};

/// One concrete Escape Room instance.
struct InstanceConfig {
  int schema_version = kSchemaVersion;
  std::uint64_t instance_seed = 0;
  RoomGeometry room;
  Pose start_pose;
  int num_buttons = 1;
  puzzle::ButtonDag dag;
  puzzle::ButtonLayout layout;
  int num_joints = 0;
  ArmConfig arm;
  int max_episode_steps = 1000;
  double step_reward = -1.0;
  double exit_reward = 100.0;
  double movement_noise_std = 0.0;
  double dag_edge_probability = puzzle::kDefaultEdgeProbability;
  /// Reserved for puzzles with continuous dimensions; no shipped puzzle uses it.
  std::vector<double> continuous_puzzle_dims;

  friend bool operator==(const InstanceConfig&, const InstanceConfig&) = default;
};

/// Schematic parameters: everything `generate` needs besides the seed.
struct SchematicParams {
  int num_buttons = 1;
  int max_buttons = puzzle::kDefaultMaxButtons;
  double room_width = 10.0;
  double room_depth = 10.0;
  Wall exit_wall = Wall::East;
  double exit_half_width = 1.0;
  double dag_edge_probability = puzzle::kDefaultEdgeProbability;
  double min_radius = 0.4;
  double max_radius = 0.8;
  double interior_margin = 1.0;
  int num_joints = 0;
  bool arm_enabled = false;
  double link_length = 0.5;
  int max_episode_steps = 1000;
  double movement_noise_std = 0.0;
  bool randomize_start = false;
  int max_attempts = 10000;
};

}  // namespace erd
