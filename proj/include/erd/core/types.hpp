#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "erd/core/geometry.hpp"
#include "erd/puzzle/button_puzzle.hpp"

namespace erd {

using puzzle::PuzzleBits;

inline constexpr double kMoveDistance = 1.0;  // metres per move/strafe
inline constexpr double kTurnStep = 10.0;     // degrees per turn
inline constexpr double kJointStep = 10.0;    // degrees per joint actuation
inline constexpr double kJointLimit = 180.0;
inline constexpr int kNumMovementActions = 6;

enum class ActionKind : std::uint8_t {
  MoveForward,
  MoveBack,
  StrafeLeft,
  StrafeRight,
  TurnLeft,
  TurnRight,
  JointInc,
  JointDec,
  Meta,
};

/// Meta target id meaning "the exit" (button targets use the button index).
inline constexpr int kExitTarget = -1;

struct Action {
  ActionKind kind = ActionKind::MoveForward;
  int arg = 0;  // joint index for JointInc/JointDec, target id for Meta

  static constexpr Action forward() { return {ActionKind::MoveForward, 0}; }
  static constexpr Action back() { return {ActionKind::MoveBack, 0}; }
  static constexpr Action strafe_left() { return {ActionKind::StrafeLeft, 0}; }
  static constexpr Action strafe_right() { return {ActionKind::StrafeRight, 0}; }
  static constexpr Action turn_left() { return {ActionKind::TurnLeft, 0}; }
  static constexpr Action turn_right() { return {ActionKind::TurnRight, 0}; }
  static constexpr Action joint_inc(int j) { return {ActionKind::JointInc, j}; }
  static constexpr Action joint_dec(int j) { return {ActionKind::JointDec, j}; }
  static constexpr Action meta(int target) { return {ActionKind::Meta, target}; }

  bool is_movement() const { return kind <= ActionKind::TurnRight; }
  bool is_joint() const { return kind == ActionKind::JointInc || kind == ActionKind::JointDec; }
  bool is_meta() const { return kind == ActionKind::Meta; }

  friend bool operator==(const Action&, const Action&) = default;
};

std::string_view to_string(ActionKind kind);
std::optional<ActionKind> parse_action_kind(std::string_view name);
/// "MoveForward", "JointInc(1)", "Meta(0)", "Meta(exit)".
std::string to_string(const Action& action);
/// Inverse of to_string(const Action&); nullopt for anything else.
std::optional<Action> parse_action(std::string_view text);

/// Dense indexing of an instance's actions: the six movement actions, then
/// JointInc/JointDec per joint, then (when enabled) one meta-action per
/// button followed by the exit meta-action.
class ActionSpace {
 public:
  ActionSpace(int num_joints, int num_buttons, bool meta_enabled)
      : num_joints_(num_joints), num_buttons_(num_buttons), meta_enabled_(meta_enabled) {}

  int primitive_count() const { return kNumMovementActions + 2 * num_joints_; }
  int meta_count() const { return meta_enabled_ ? num_buttons_ + 1 : 0; }
  int size() const { return primitive_count() + meta_count(); }
  bool meta_enabled() const { return meta_enabled_; }

  Action at(int index) const;
  int index_of(const Action& action) const;
  bool contains(const Action& action) const;

 private:
  int num_joints_;
  int num_buttons_;
  bool meta_enabled_;
};

struct EnvState {
  Pose pose;
  std::vector<double> joints;
  PuzzleBits puzzle;
  int steps_taken = 0;
  bool exited = false;
  std::uint64_t episode_seed = 0;  // drives movement noise when enabled

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

enum class TerminationCause { None, Exit, StepCap };

std::string_view to_string(TerminationCause cause);

struct StepInfo {
  int primitives = 0;
  std::vector<int> touched;  // buttons newly entered during the transition
  std::vector<int> pressed;  // buttons whose bit turned on during the transition
  TerminationCause cause = TerminationCause::None;

  friend bool operator==(const StepInfo&, const StepInfo&) = default;
};

struct Transition {
  EnvState next;
  double reward = 0.0;
  bool done = false;
  StepInfo info;

  friend bool operator==(const Transition&, const Transition&) = default;
};

}  // namespace erd
