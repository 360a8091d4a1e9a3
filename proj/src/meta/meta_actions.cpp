#include "erd/meta/meta_actions.hpp"

#include "erd/errors.hpp"

namespace erd::meta {

std::vector<MetaAction> meta_action_set(const InstanceConfig& instance) {
  std::vector<MetaAction> out;
  out.reserve(static_cast<std::size_t>(instance.num_buttons) + 1);
  for (int b = 0; b < instance.num_buttons; ++b) out.push_back({b});
  out.push_back({kExitTarget});
  return out;
}

TargetRegion target_region(const InstanceConfig& instance, int target) {
  if (target == kExitTarget) return TargetRegion::rect(instance.room.exit_region());
  if (target < 0 || target >= instance.num_buttons)
    throw UsageError("meta target " + std::to_string(target) + " out of range");
  const auto& b = instance.layout.buttons[static_cast<std::size_t>(target)];
  return TargetRegion::disc(b.center, b.radius);
}

namespace {

double reach_for(const EnvState& state, int target, const InstanceConfig& instance) {
  if (target == kExitTarget || !instance.arm.enabled) return 0.0;
  const Point3 tip = forward_kinematics(Pose{}, state.joints, instance.arm);
  return tip.x;  // heading 0 at the origin: x is the horizontal reach
}

Point2 touching(const EnvState& state, int target, const InstanceConfig& instance) {
  if (target == kExitTarget) return state.pose.position();
  return touch_point(state.pose, state.joints, instance);
}

void merge(Transition& total, const Transition& t) {
  total.next = t.next;
  total.reward += t.reward;
  total.done = t.done;
  total.info.primitives += t.info.primitives;
  total.info.touched.insert(total.info.touched.end(), t.info.touched.begin(), t.info.touched.end());
  total.info.pressed.insert(total.info.pressed.end(), t.info.pressed.begin(), t.info.pressed.end());
  total.info.cause = t.info.cause;
}

}  // namespace

bool meta_applicable(const EnvState& state, int target, const InstanceConfig& instance) {
  return !target_region(instance, target).contains(touching(state, target, instance));
}

Plan plan_meta(const EnvState& state, int target, const InstanceConfig& instance) {
  PlanOptions options;
  options.step_budget = instance.max_episode_steps;
  options.reach = reach_for(state, target, instance);
  return plan(state.pose, target_region(instance, target), instance.room, options);
}

Transition execute_meta(const EnvState& state, int target, const InstanceConfig& instance,
                        const PrimitiveObserver& observer) {
  if (state.exited || state.steps_taken >= instance.max_episode_steps)
    throw UsageError("episode is over; reset before stepping again");
  if (!meta_applicable(state, target, instance))
    throw UsageError("meta-action " + to_string(Action::meta(target)) + " is not applicable: target already reached");

  const TargetRegion region = target_region(instance, target);
  Transition total;
  total.next = state;
  // With movement noise the open-loop plan can fall short; replan from where
  // it actually ended. Without noise the first plan always lands.
  while (!total.done && !region.contains(touching(total.next, target, instance))) {
    const Plan p = plan_meta(total.next, target, instance);
    for (const Action& a : p.actions) {
      Transition t = step(total.next, a, instance);
      if (observer) observer(total.next, a, t);
      merge(total, t);
      if (total.done) break;
    }
    if (p.actions.empty()) break;
  }
  return total;
}

Transition dispatch(const EnvState& state, const Action& action, const InstanceConfig& instance,
                    const PrimitiveObserver& observer) {
  if (action.is_meta()) return execute_meta(state, action.arg, instance, observer);
  Transition t = step(state, action, instance);
  if (observer) observer(state, action, t);
  return t;
}

std::vector<Action> legal_actions(const EnvState& state, const InstanceConfig& instance, bool meta_enabled) {
  const ActionSpace space(instance.num_joints, instance.num_buttons, meta_enabled);
  std::vector<Action> out;
  out.reserve(static_cast<std::size_t>(space.size()));
  for (int i = 0; i < space.primitive_count(); ++i) out.push_back(space.at(i));
  if (meta_enabled)
    for (const auto& m : meta_action_set(instance))
      if (meta_applicable(state, m.target, instance)) out.push_back(Action::meta(m.target));
  return out;
}

Route optimal_route(const InstanceConfig& instance) {
  InstanceConfig quiet = instance;
  quiet.movement_noise_std = 0.0;
  EnvState s = reset(quiet, 0);
  Route route;
  auto record = [&route](const EnvState&, const Action& a, const Transition&) { route.actions.push_back(a); };

  std::vector<int> targets = puzzle::solve_order(quiet.dag);
  targets.push_back(kExitTarget);
  for (int target : targets) {
    if (target != kExitTarget && s.puzzle[static_cast<std::size_t>(target)]) continue;
    if (!meta_applicable(s, target, quiet))
      throw PlanningError("optimal route: agent already inside target " + to_string(Action::meta(target)) +
                          " before it could be pressed");
    const Transition t = execute_meta(s, target, quiet, record);
    s = t.next;
    if (t.done) break;
  }
  route.steps = s.steps_taken;
  route.exited = s.exited;
  if (!route.exited)
    throw PlanningError("optimal route does not exit within " + std::to_string(quiet.max_episode_steps) +
                        " steps");
  return route;
}

ReturnBounds return_bounds(const InstanceConfig& instance) {
  return erd::return_bounds(instance, optimal_route(instance).steps);
}

double normalize_return(double cumulative_reward, const InstanceConfig& instance) {
  return erd::normalize_return(cumulative_reward, return_bounds(instance));
}

}  // namespace erd::meta
