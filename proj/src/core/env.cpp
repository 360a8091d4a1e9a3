#include "erd/core/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "erd/errors.hpp"
#include "erd/instance/generator.hpp"
#include "erd/rng.hpp"

namespace erd {

EnvState reset(const InstanceConfig& instance, std::uint64_t episode_seed) {
  if (auto problems = instance::structural_violations(instance); !problems.empty())
    throw ConfigError("invalid instance: " + problems.front());
  EnvState s;
  s.pose = instance.start_pose;
  s.pose.heading = wrap_heading(s.pose.heading);
  s.joints.assign(static_cast<std::size_t>(instance.num_joints), 0.0);
  s.puzzle.assign(static_cast<std::size_t>(instance.num_buttons), false);
  s.steps_taken = 0;
  s.exited = false;
  s.episode_seed = episode_seed;
  return s;
}

Pose apply_movement(const Pose& pose, const Action& action, const RoomGeometry& room, double distance) {
  Pose out = pose;
  double angle = 0.0;
  switch (action.kind) {
    case ActionKind::MoveForward: angle = pose.heading; break;
    case ActionKind::MoveBack: angle = pose.heading + 180.0; break;
    case ActionKind::StrafeLeft: angle = pose.heading + 90.0; break;
    case ActionKind::StrafeRight: angle = pose.heading + 270.0; break;
    case ActionKind::TurnLeft:
      out.heading = wrap_heading(pose.heading + kTurnStep);
      return out;
    case ActionKind::TurnRight:
      out.heading = wrap_heading(pose.heading - kTurnStep);
      return out;
    default:
      throw UsageError("apply_movement called with non-movement action " + to_string(action));
  }
  const Point2 moved = room.clamp({pose.x + distance * cos_deg(angle), pose.y + distance * sin_deg(angle)});
  out.x = moved.x;
  out.y = moved.y;
  return out;
}

std::vector<double> apply_joint(std::span<const double> joints, int joint_index, int direction) {
  if (joint_index < 0 || static_cast<std::size_t>(joint_index) >= joints.size())
    throw UsageError("joint index " + std::to_string(joint_index) + " out of range [0, " +
                     std::to_string(joints.size()) + ")");
  if (direction != 1 && direction != -1) throw UsageError("joint direction must be +1 or -1");
  std::vector<double> out(joints.begin(), joints.end());
  out[joint_index] = std::clamp(out[joint_index] + direction * kJointStep, -kJointLimit, kJointLimit);
  return out;
}

Point3 forward_kinematics(const Pose& pose, std::span<const double> joints, const ArmConfig& arm) {
  if (arm.link_lengths.size() != joints.size())
    throw ConfigError("arm.link_lengths has " + std::to_string(arm.link_lengths.size()) +
                      " entries but there are " + std::to_string(joints.size()) + " joints");
  const double ux = cos_deg(pose.heading);
  const double uy = sin_deg(pose.heading);
  double reach = 0.0;  // along the heading
  double z = pose.z + arm.mount_height;
  double elevation = 0.0;
  for (std::size_t i = 0; i < joints.size(); ++i) {
    elevation += joints[i];
    reach += arm.link_lengths[i] * cos_deg(elevation);
    z += arm.link_lengths[i] * sin_deg(elevation);
  }
  return {pose.x + reach * ux, pose.y + reach * uy, z};
}

Point2 touch_point(const Pose& pose, std::span<const double> joints, const InstanceConfig& instance) {
  if (!instance.arm.enabled) return pose.position();
  const Point3 tip = forward_kinematics(pose, joints, instance.arm);
  return {tip.x, tip.y};
}

namespace {

double noisy_distance(const EnvState& state, double stddev) {
  if (stddev <= 0.0) return kMoveDistance;
  const std::uint64_t key = rng::derive(state.episode_seed, static_cast<std::uint64_t>(state.steps_taken));
  double u1 = static_cast<double>(rng::splitmix64(key) >> 11) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng::splitmix64(key + 1) >> 11) * 0x1.0p-53;
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double n = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return kMoveDistance + stddev * n;
}

}  // namespace

Transition step(const EnvState& state, const Action& action, const InstanceConfig& instance) {
  if (state.exited || state.steps_taken >= instance.max_episode_steps)
    throw UsageError("episode is over; reset before stepping again");
  if (action.is_meta()) throw UsageError("meta actions are executed by meta::execute_meta");

  Transition t;
  t.next = state;
  EnvState& next = t.next;
  if (action.is_movement()) {
    const bool translation = action.kind != ActionKind::TurnLeft && action.kind != ActionKind::TurnRight;
    const double distance = translation ? noisy_distance(state, instance.movement_noise_std) : kMoveDistance;
    next.pose = apply_movement(state.pose, action, instance.room, distance);
  } else {
    next.joints = apply_joint(state.joints, action.arg, action.kind == ActionKind::JointInc ? 1 : -1);
  }

  // presses fire on entry into a disc, in ascending button order
  const Point2 from = touch_point(state.pose, state.joints, instance);
  const Point2 to = touch_point(next.pose, next.joints, instance);
  for (std::size_t i = 0; i < instance.layout.buttons.size(); ++i) {
    const auto& button = instance.layout.buttons[i];
    if (!button.contains(to) || button.contains(from)) continue;
    const int b = static_cast<int>(i);
    t.info.touched.push_back(b);
    if (puzzle::press_eligible(instance.dag, next.puzzle, b)) {
      next.puzzle[b] = true;
      t.info.pressed.push_back(b);
    }
  }

  ++next.steps_taken;
  t.info.primitives = 1;
  t.reward = instance.step_reward;
  if (instance.room.exit_region().contains(next.pose.position()) && puzzle::is_unlocked(next.puzzle, instance.dag)) {
    next.exited = true;
    t.reward += instance.exit_reward;
    t.info.cause = TerminationCause::Exit;
  } else if (next.steps_taken >= instance.max_episode_steps) {
    t.info.cause = TerminationCause::StepCap;
  }
  t.done = next.exited || next.steps_taken >= instance.max_episode_steps;
  return t;
}

ReturnBounds return_bounds(const InstanceConfig& instance, int optimal_steps) {
  return {instance.step_reward * instance.max_episode_steps,
          instance.exit_reward + instance.step_reward * optimal_steps};
}

double normalize_return(double cumulative_reward, const ReturnBounds& bounds) {
  if (!(bounds.min < bounds.max))
    throw ConfigError("degenerate return bounds: min " + std::to_string(bounds.min) + " >= max " +
                      std::to_string(bounds.max));
  const double pct = 100.0 * (cumulative_reward - bounds.min) / (bounds.max - bounds.min);
  return std::clamp(pct, 0.0, 100.0);
}

}  // namespace erd
