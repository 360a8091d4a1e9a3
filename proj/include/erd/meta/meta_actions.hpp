#pragma once

// Auto-generated navigation macros: one per button plus one for the exit.
// A meta-action plans from the current pose, runs the primitives through
// the ordinary step function and reports one aggregated transition.

#include <functional>
#include <vector>

#include "erd/core/env.hpp"
#include "erd/meta/planner.hpp"

namespace erd::meta {

struct MetaAction {
  int target = kExitTarget;  // button index, or kExitTarget
  friend bool operator==(const MetaAction&, const MetaAction&) = default;
};

/// Buttons ascending, exit last: n buttons give n + 1 meta-actions.
std::vector<MetaAction> meta_action_set(const InstanceConfig& instance);

TargetRegion target_region(const InstanceConfig& instance, int target);

/// True unless the agent already touches the target region, in which case
/// the plan would be empty and the action is withheld from the agent.
bool meta_applicable(const EnvState& state, int target, const InstanceConfig& instance);

Plan plan_meta(const EnvState& state, int target, const InstanceConfig& instance);

/// Called once per executed primitive with the state before it.
using PrimitiveObserver = std::function<void(const EnvState& before, const Action& action, const Transition& t)>;

/// Execute a meta-action. The reward is the sum of primitive rewards, the
/// step counter advances by the primitive count, and execution stops early
/// when the episode ends (exit or step cap). Throws UsageError when the
/// episode is over or the target is already touched, PlanningError when no
/// plan fits the remaining episode.
Transition execute_meta(const EnvState& state, int target, const InstanceConfig& instance,
                        const PrimitiveObserver& observer = {});

/// Route primitive actions to step() and meta actions to execute_meta().
Transition dispatch(const EnvState& state, const Action& action, const InstanceConfig& instance,
                    const PrimitiveObserver& observer = {});

/// Actions the agent may choose in `state`: every primitive, plus the
/// applicable meta-actions when enabled. Ordered as in ActionSpace.
std::vector<Action> legal_actions(const EnvState& state, const InstanceConfig& instance, bool meta_enabled);

struct Route {
  std::vector<Action> actions;  // primitives
  int steps = 0;
  bool exited = false;
};

/// Noise-free meta-action route from the start pose: the solve_order
/// buttons not yet on, then the exit. Throws PlanningError when it does
/// not fit within the episode cap.
Route optimal_route(const InstanceConfig& instance);

/// Bounds for normalisation using the optimal route's step count.
ReturnBounds return_bounds(const InstanceConfig& instance);

double normalize_return(double cumulative_reward, const InstanceConfig& instance);

}  // namespace erd::meta
