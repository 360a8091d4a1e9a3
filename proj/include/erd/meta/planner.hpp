#pragma once

#include <vector>

#include "erd/core/types.hpp"

namespace erd::meta {

/// Where a navigation plan must end: a button disc or the exit strip.
struct TargetRegion {
  enum class Shape { Disc, Box };

  Shape shape = Shape::Disc;
  Point2 center;       // disc centre; box centre for Box
  double radius = 0;   // Disc only
  Rect box;            // Box only

  static TargetRegion disc(Point2 center, double radius) { return {Shape::Disc, center, radius, {}}; }
  static TargetRegion rect(const Rect& r) { return {Shape::Box, r.center(), 0.0, r}; }

  bool contains(Point2 p) const;
  /// Distance from p to the region (0 inside).
  double distance_to(Point2 p) const;
};

struct Plan {
  std::vector<Action> actions;
  Pose predicted_end_pose;
  int length = 0;
};

struct PlanOptions {
  int step_budget = 1000;
  /// Horizontal reach of the touching point ahead of the base (end-effector
  /// reach when the arm is enabled; 0 plans for the base itself).
  double reach = 0.0;
};

/// Rotate-then-translate navigation plan from `pose` into `target`.
///
/// For every reachable heading (0..18 turns either way) the translations
/// available without turning form a unit lattice in the heading frame. The
/// plan picks the cheapest (turns + |forward| + |strafe|) lattice point that
/// lies inside the target, confirmed by simulating the moves with wall
/// clamping. If no heading offers a lattice hit, it tries one turn-and-step
/// detour followed by a lattice plan when the target is within 2 m, and
/// otherwise aligns with the bearing (5 degree tolerance), steps forward
/// once and tries again.
///
/// Returns an empty plan when the pose already touches the target. Throws
/// PlanningError when the plan would exceed `step_budget`.
Plan plan(const Pose& pose, const TargetRegion& target, const RoomGeometry& room,
          const PlanOptions& options = {});

}  // namespace erd::meta
