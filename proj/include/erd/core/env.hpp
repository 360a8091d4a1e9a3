#pragma once

// Escape Room MDP dynamics. Every function here is pure: the same inputs
// always produce the same outputs, and no state is kept between calls.

#include <cstdint>
#include <span>
#include <vector>

#include "erd/core/types.hpp"
#include "erd/instance/instance.hpp"

namespace erd {

/// Start-of-episode state: the instance's start pose, joints at 0, all
/// buttons off. Throws ConfigError naming the first structural problem.
EnvState reset(const InstanceConfig& instance, std::uint64_t episode_seed);

/// One primitive step: movement or joint update, then press detection,
/// then the exit check. Reward is step_reward, plus exit_reward on the
/// step that exits. Meta actions are not handled here (see meta::dispatch).
Transition step(const EnvState& state, const Action& action, const InstanceConfig& instance);

/// Translate or rotate for one of the six movement actions, then clamp to
/// the room. `distance` is the displacement of a translation.
Pose apply_movement(const Pose& pose, const Action& action, const RoomGeometry& room,
                    double distance = kMoveDistance);

/// Move joint `joint_index` by direction * 10 degrees, clamped to +-180.
std::vector<double> apply_joint(std::span<const double> joints, int joint_index, int direction);

/// End-effector position. The chain is mounted `arm.mount_height` above the
/// base and bends in the vertical plane of the heading; each joint angle is
/// an elevation relative to the previous link.
Point3 forward_kinematics(const Pose& pose, std::span<const double> joints, const ArmConfig& arm);

/// Point used for press detection: the base, or the effector's floor
/// projection when the arm is enabled.
Point2 touch_point(const Pose& pose, std::span<const double> joints, const InstanceConfig& instance);

/// Worst and best achievable cumulative rewards of an episode.
struct ReturnBounds {
  double min = 0.0;
  double max = 0.0;
};

/// Bounds from the episode cap and an optimal step count:
/// min = step_reward * cap, max = exit_reward + step_reward * optimal_steps.
ReturnBounds return_bounds(const InstanceConfig& instance, int optimal_steps);

/// 100 * (R - min) / (max - min), clamped to [0, 100].
/// Throws ConfigError when min >= max.
double normalize_return(double cumulative_reward, const ReturnBounds& bounds);

}  // namespace erd
