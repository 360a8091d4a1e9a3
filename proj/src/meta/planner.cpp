#include "erd/meta/planner.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>
#include <tuple>

#include "erd/core/env.hpp"
#include "erd/errors.hpp"

namespace erd::meta {

bool TargetRegion::contains(Point2 p) const {
  if (shape == Shape::Box) return box.contains(p);
  const double dx = p.x - center.x;
  const double dy = p.y - center.y;
  return dx * dx + dy * dy <= radius * radius;
}

double TargetRegion::distance_to(Point2 p) const {
  if (shape == Shape::Box) return box.distance_to(p);
  return std::max(0.0, std::hypot(p.x - center.x, p.y - center.y) - radius);
}

namespace {

constexpr double kAlignTolerance = 5.0;
constexpr int kMaxTurns = 18;

Point2 touching(const Pose& pose, double reach) {
  if (reach == 0.0) return pose.position();
  return {pose.x + reach * cos_deg(pose.heading), pose.y + reach * sin_deg(pose.heading)};
}

struct Candidate {
  std::vector<Action> actions;
  Pose end;
  std::tuple<int, int, int, double> key;  // cost, turns, |strafe|, distance to centre
};

Pose run(Pose pose, const std::vector<Action>& actions, const RoomGeometry& room) {
  for (const auto& a : actions) pose = apply_movement(pose, a, room);
  return pose;
}

std::vector<Action> sequence(int turns, int forward, int strafe, bool strafe_first) {
  std::vector<Action> out;
  const Action turn = turns >= 0 ? Action::turn_left() : Action::turn_right();
  for (int i = 0; i < std::abs(turns); ++i) out.push_back(turn);
  const Action fwd = forward >= 0 ? Action::forward() : Action::back();
  const Action side = strafe >= 0 ? Action::strafe_left() : Action::strafe_right();
  auto add = [&out](Action a, int n) {
    for (int i = 0; i < n; ++i) out.push_back(a);
  };
  if (strafe_first) {
    add(side, std::abs(strafe));
    add(fwd, std::abs(forward));
  } else {
    add(fwd, std::abs(forward));
    add(side, std::abs(strafe));
  }
  return out;
}

// Cheapest turn-first lattice plan that lands inside the target, if any.
std::optional<Candidate> best_lattice_plan(const Pose& pose, const TargetRegion& target,
                                           const RoomGeometry& room, double reach) {
  std::optional<Candidate> best;
  for (int t = 0; t <= kMaxTurns; ++t) {
    for (int sign : {1, -1}) {
      if (sign < 0 && (t == 0 || t == kMaxTurns)) continue;
      const int turns = sign * t;
      if (best && t >= std::get<0>(best->key)) continue;
      const double h = wrap_heading(pose.heading + turns * kTurnStep);
      const double ux = cos_deg(h), uy = sin_deg(h);
      // touching point after the turns, expressed in the heading frame
      const Point2 origin{pose.x + reach * ux, pose.y + reach * uy};
      auto frame = [&](Point2 p) {
        const double dx = p.x - origin.x, dy = p.y - origin.y;
        return Point2{dx * ux + dy * uy, -dx * uy + dy * ux};
      };
      double f0, f1, l0, l1;
      if (target.shape == TargetRegion::Shape::Disc) {
        const Point2 c = frame(target.center);
        f0 = c.x - target.radius, f1 = c.x + target.radius;
        l0 = c.y - target.radius, l1 = c.y + target.radius;
      } else {
        const Rect& b = target.box;
        const Point2 corners[4] = {frame({b.x0, b.y0}), frame({b.x0, b.y1}), frame({b.x1, b.y0}), frame({b.x1, b.y1})};
        f0 = f1 = corners[0].x;
        l0 = l1 = corners[0].y;
        for (const auto& c : corners) {
          f0 = std::min(f0, c.x), f1 = std::max(f1, c.x);
          l0 = std::min(l0, c.y), l1 = std::max(l1, c.y);
        }
      }
      const Point2 centre = frame(target.center);
      for (int k = static_cast<int>(std::floor(f0)); k <= static_cast<int>(std::ceil(f1)); ++k) {
        for (int m = static_cast<int>(std::floor(l0)); m <= static_cast<int>(std::ceil(l1)); ++m) {
          const int cost = t + std::abs(k) + std::abs(m);
          const double dist = std::hypot(k - centre.x, m - centre.y);
          const std::tuple<int, int, int, double> key{cost, t, std::abs(m), dist};
          if (best && key >= best->key) continue;
          const Point2 p{origin.x + k * ux - m * uy, origin.y + k * uy + m * ux};
          if (!target.contains(p)) continue;
          for (bool strafe_first : {false, true}) {
            auto actions = sequence(turns, k, m, strafe_first);
            const Pose end = run(pose, actions, room);
            if (target.contains(touching(end, reach))) {
              best = Candidate{std::move(actions), end, key};
              break;
            }
          }
        }
      }
    }
  }
  return best;
}

// One turn-and-step detour that shifts the lattice, then a lattice plan.
// Needed next to small discs that fall between the lattice points of
// every heading.
std::optional<Candidate> detour_plan(const Pose& pose, const TargetRegion& target, const RoomGeometry& room,
                                     double reach) {
  std::optional<Candidate> best;
  for (int turns = -kMaxTurns; turns <= kMaxTurns; ++turns) {
    for (const Action step : {Action::forward(), Action::back(), Action::strafe_left(), Action::strafe_right()}) {
      std::vector<Action> prefix = sequence(turns, 0, 0, false);
      const Pose turned = run(pose, prefix, room);
      const Pose mid = apply_movement(turned, step, room);
      if (mid == turned) continue;
      prefix.push_back(step);
      const int base = static_cast<int>(prefix.size());
      if (best && base >= std::get<0>(best->key)) continue;
      if (target.contains(touching(mid, reach))) {
        best = Candidate{prefix, mid, {base, std::abs(turns), 0, 0.0}};
        continue;
      }
      auto rest = best_lattice_plan(mid, target, room, reach);
      if (!rest) continue;
      const std::tuple<int, int, int, double> key{base + std::get<0>(rest->key), std::abs(turns), 0, 0.0};
      if (best && key >= best->key) continue;
      prefix.insert(prefix.end(), rest->actions.begin(), rest->actions.end());
      best = Candidate{std::move(prefix), rest->end, key};
    }
  }
  return best;
}

}  // namespace

Plan plan(const Pose& pose, const TargetRegion& target, const RoomGeometry& room, const PlanOptions& options) {
  Plan out;
  Pose cur = pose;
  while (!target.contains(touching(cur, options.reach))) {
    if (static_cast<int>(out.actions.size()) > options.step_budget) break;
    auto direct = best_lattice_plan(cur, target, room, options.reach);
    if (!direct && target.distance_to(touching(cur, options.reach)) < 2.0)
      direct = detour_plan(cur, target, room, options.reach);
    if (direct) {
      out.actions.insert(out.actions.end(), direct->actions.begin(), direct->actions.end());
      cur = direct->end;
      break;
    }
    // No lattice hit from here: close in along the bearing and retry.
    const Point2 from = touching(cur, options.reach);
    const double bearing = std::atan2(target.center.y - from.y, target.center.x - from.x) * 180.0 / M_PI;
    const double err = heading_difference(cur.heading, bearing);
    const Action a = std::abs(err) > kAlignTolerance ? (err > 0 ? Action::turn_left() : Action::turn_right())
                                                      : Action::forward();
    const Pose next = apply_movement(cur, a, room);
    if (a.kind == ActionKind::MoveForward && next == cur)
      throw PlanningError("planner blocked by a wall before reaching the target");
    out.actions.push_back(a);
    cur = next;
  }
  out.length = static_cast<int>(out.actions.size());
  if (out.length > options.step_budget)
    throw PlanningError("plan needs " + std::to_string(out.length) + " primitives, budget is " +
                        std::to_string(options.step_budget));
  out.predicted_end_pose = cur;
  return out;
}

}  // namespace erd::meta
