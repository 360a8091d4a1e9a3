#include "erd/core/types.hpp"

#include <array>

#include "erd/errors.hpp"

namespace erd {

namespace {

constexpr std::array<std::string_view, 9> kKindNames = {
    "MoveForward", "MoveBack", "StrafeLeft", "StrafeRight", "TurnLeft",
    "TurnRight",   "JointInc", "JointDec",   "Meta",
};

}  // namespace

std::string_view to_string(ActionKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<ActionKind> parse_action_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == name) return static_cast<ActionKind>(i);
  return std::nullopt;
}

std::string to_string(const Action& action) {
  std::string out(to_string(action.kind));
  if (action.is_joint()) out += "(" + std::to_string(action.arg) + ")";
  if (action.is_meta())
    out += action.arg == kExitTarget ? std::string("(exit)") : "(" + std::to_string(action.arg) + ")";
  return out;
}

std::optional<Action> parse_action(std::string_view text) {
  const auto open = text.find('(');
  const auto kind = parse_action_kind(text.substr(0, open));
  if (!kind) return std::nullopt;
  Action a{*kind, 0};
  const bool takes_arg = a.is_joint() || a.is_meta();
  if (open == std::string_view::npos) {
    if (takes_arg) return std::nullopt;
    return a;
  }
  if (!takes_arg || text.back() != ')') return std::nullopt;
  const std::string_view arg = text.substr(open + 1, text.size() - open - 2);
  if (a.is_meta() && arg == "exit") {
    a.arg = kExitTarget;
    return a;
  }
  if (arg.empty() || arg.size() > 6 || arg.find_first_not_of("0123456789") != std::string_view::npos)
    return std::nullopt;
  a.arg = std::stoi(std::string(arg));
  return a;
}

std::string_view to_string(TerminationCause cause) {
  switch (cause) {
    case TerminationCause::None: return "none";
    case TerminationCause::Exit: return "exit";
    case TerminationCause::StepCap: return "step-cap";
  }
  return "none";
}

Action ActionSpace::at(int index) const {
  if (index < 0 || index >= size())
    throw UsageError("action index " + std::to_string(index) + " out of range");
  if (index < kNumMovementActions) return {static_cast<ActionKind>(index), 0};
  if (index < primitive_count()) {
    const int j = (index - kNumMovementActions) / 2;
    return (index - kNumMovementActions) % 2 == 0 ? Action::joint_inc(j) : Action::joint_dec(j);
  }
  const int t = index - primitive_count();
  return Action::meta(t == num_buttons_ ? kExitTarget : t);
}

bool ActionSpace::contains(const Action& action) const {
  if (action.is_movement()) return true;
  if (action.is_joint()) return action.arg >= 0 && action.arg < num_joints_;
  return meta_enabled_ && (action.arg == kExitTarget || (action.arg >= 0 && action.arg < num_buttons_));
}

int ActionSpace::index_of(const Action& action) const {
  if (!contains(action)) throw UsageError("action " + to_string(action) + " not in action space");
  if (action.is_movement()) return static_cast<int>(action.kind);
  if (action.is_joint())
    return kNumMovementActions + 2 * action.arg + (action.kind == ActionKind::JointDec ? 1 : 0);
  return primitive_count() + (action.arg == kExitTarget ? num_buttons_ : action.arg);
}

}  // namespace erd
