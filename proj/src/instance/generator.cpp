#include "erd/instance/generator.hpp"

#include <cmath>
#include <string>

#include "erd/errors.hpp"
#include "erd/meta/meta_actions.hpp"
#include "erd/rng.hpp"

namespace erd::instance {

namespace {


void check_params(const SchematicParams& p) {
  if (p.num_buttons < 1) throw ConfigError("num_buttons must be at least 1");
  if (p.num_buttons > p.max_buttons)
    throw ConfigError("num_buttons " + std::to_string(p.num_buttons) + " exceeds max_buttons " +
                      std::to_string(p.max_buttons));
  if (p.room_width < 4.0 || p.room_depth < 4.0) throw ConfigError("room must be at least 4 x 4 m");
  if (!(p.min_radius > 0.0 && p.min_radius <= p.max_radius)) throw ConfigError("radius range must satisfy 0 < min <= max");
  if (p.interior_margin < 0.0) throw ConfigError("interior_margin must be non-negative");
  if (p.num_joints < 0) throw ConfigError("num_joints must be non-negative");
  if (p.arm_enabled && p.num_joints < 1) throw ConfigError("an enabled arm needs at least one joint");
  if (p.max_episode_steps < 1) throw ConfigError("max_episode_steps must be at least 1");
  if (p.movement_noise_std < 0.0) throw ConfigError("movement_noise_std must be non-negative");
  if (p.max_attempts < 1) throw ConfigError("max_attempts must be at least 1");
}

}  // namespace

InstanceConfig generate(const SchematicParams& params, std::uint64_t seed) {
  check_params(params);

  InstanceConfig inst;
  inst.instance_seed = seed;
  inst.room.width = params.room_width;
  inst.room.depth = params.room_depth;
  inst.room.exit_wall = params.exit_wall;
  inst.room.exit_half_width = params.exit_half_width;
  inst.room.exit_center_offset = inst.room.wall_length(params.exit_wall) / 2.0;
  if (!(params.exit_half_width > 0.0) || 2.0 * params.exit_half_width > inst.room.wall_length(params.exit_wall))
    throw ConfigError("exit_half_width does not fit on the exit wall");

  inst.num_buttons = params.num_buttons;
  inst.dag_edge_probability = params.dag_edge_probability;
  inst.dag = puzzle::generate_dag(params.num_buttons, rng::derive(seed, rng::kDagStream),
                                  {params.max_buttons, params.dag_edge_probability});
  inst.num_joints = params.num_joints;
  inst.arm.enabled = params.arm_enabled;
  inst.arm.link_lengths.assign(static_cast<std::size_t>(params.num_joints), params.link_length);
  inst.max_episode_steps = params.max_episode_steps;
  inst.movement_noise_std = params.movement_noise_std;

  const Rect exit = inst.room.exit_region();
  const double lo_x = params.interior_margin, hi_x = params.room_width - params.interior_margin;
  const double lo_y = params.interior_margin, hi_y = params.room_depth - params.interior_margin;
  int attempts = 0;
  auto spend = [&]() {
    if (++attempts > params.max_attempts)
      throw GenerationError("could not place " + std::to_string(params.num_buttons) + " buttons within " +
                            std::to_string(params.max_attempts) + " attempts; use a larger room or fewer buttons");
  };

  inst.start_pose = Pose{params.room_width / 2.0, params.room_depth / 2.0, 0.0, 0.0, 0.0, 0.0};
  if (params.randomize_start) {
    rng::Rng start_rng(rng::derive(seed, rng::kStartStream));
    do {
      spend();
      inst.start_pose.x = start_rng.uniform(lo_x, hi_x);
      inst.start_pose.y = start_rng.uniform(lo_y, hi_y);
      inst.start_pose.heading = kTurnStep * static_cast<double>(start_rng.below(36));
    } while (exit.contains(inst.start_pose.position()));
  }

  rng::Rng layout_rng(rng::derive(seed, rng::kLayoutStream));
  const Point2 start = inst.start_pose.position();
  while (static_cast<int>(inst.layout.buttons.size()) < params.num_buttons) {
    spend();
    puzzle::Button b;
    b.center = {layout_rng.uniform(lo_x, hi_x), layout_rng.uniform(lo_y, hi_y)};
    b.radius = layout_rng.uniform(params.min_radius, params.max_radius);
    if (!(b.center.x > 0.0 && b.center.x < params.room_width && b.center.y > 0.0 && b.center.y < params.room_depth))
      continue;
    if (exit.distance_to(b.center) <= b.radius) continue;
    if (std::hypot(start.x - b.center.x, start.y - b.center.y) <= b.radius) continue;
    bool overlaps = false;
    for (const auto& other : inst.layout.buttons)
      if (std::hypot(other.center.x - b.center.x, other.center.y - b.center.y) <= other.radius + b.radius)
        overlaps = true;
    if (!overlaps) inst.layout.buttons.push_back(b);
  }
  return inst;
}

std::vector<std::string> structural_violations(const InstanceConfig& inst) {
  std::vector<std::string> out;
  auto add = [&out](std::string s) { out.push_back(std::move(s)); };

  if (inst.schema_version != kSchemaVersion)
    add("schema_version: expected " + std::to_string(kSchemaVersion) + ", found " + std::to_string(inst.schema_version));

  const RoomGeometry& room = inst.room;
  bool room_ok = true;
  if (!(room.width > 2.0 && room.depth > 2.0)) {
    add("room: width and depth must exceed 2 m");
    room_ok = false;
  }
  if (!(room.exit_half_width > 0.0) || room.exit_center_offset - room.exit_half_width < 0.0 ||
      room.exit_center_offset + room.exit_half_width > room.wall_length(room.exit_wall)) {
    add("room: exit strip does not lie on its wall");
    room_ok = false;
  }
  const Rect exit = room.exit_region();
  const Point2 start = inst.start_pose.position();
  if (!room.contains(start)) add("start_pose: outside the room");
  else if (room_ok && exit.contains(start)) add("start_pose: inside the exit region");

  if (inst.num_buttons < 1) add("num_buttons: must be at least 1");
  if (inst.dag.num_buttons != inst.num_buttons)
    add("cross-reference: dag has " + std::to_string(inst.dag.num_buttons) + " buttons, num_buttons is " +
        std::to_string(inst.num_buttons));
  if (static_cast<int>(inst.layout.buttons.size()) != inst.num_buttons)
    add("cross-reference: layout has " + std::to_string(inst.layout.buttons.size()) + " buttons, num_buttons is " +
        std::to_string(inst.num_buttons));
  for (auto& v : puzzle::dag_violations(inst.dag)) add(std::move(v));

  const auto& buttons = inst.layout.buttons;
  for (std::size_t i = 0; i < buttons.size(); ++i) {
    const auto& b = buttons[i];
    const std::string name = "button " + std::to_string(i);
    if (!(b.radius > 0.0)) {
      add("layout: " + name + " radius must be positive");
      continue;
    }
    if (!(b.center.x > 0.0 && b.center.x < room.width && b.center.y > 0.0 && b.center.y < room.depth))
      add("layout: " + name + " centre is not strictly inside the room");
    if (room_ok && exit.distance_to(b.center) <= b.radius) add("layout/exit overlap: " + name + " touches the exit strip");
    if (b.contains(start)) add("layout/start: " + name + " covers the start pose");
    for (std::size_t j = i + 1; j < buttons.size(); ++j) {
      const auto& o = buttons[j];
      if (std::hypot(o.center.x - b.center.x, o.center.y - b.center.y) <= o.radius + b.radius)
        add("layout/overlap: buttons " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
  }

  if (inst.num_joints < 0) add("num_joints: must be non-negative");
  else if (static_cast<int>(inst.arm.link_lengths.size()) != inst.num_joints)
    add("cross-reference: arm has " + std::to_string(inst.arm.link_lengths.size()) + " links, num_joints is " +
        std::to_string(inst.num_joints));
  for (double l : inst.arm.link_lengths)
    if (!(l > 0.0)) add("arm: link lengths must be positive");
  if (inst.arm.enabled && inst.num_joints < 1) add("arm: enabled arm needs at least one joint");

  if (inst.max_episode_steps < 1) add("max_episode_steps: must be at least 1");
  if (!(inst.exit_reward > 0.0 && inst.step_reward < 0.0)) add("rewards: require exit_reward > 0 > step_reward");
  if (!(inst.movement_noise_std >= 0.0)) add("movement_noise_std: must be non-negative");
  if (!(inst.dag_edge_probability >= 0.0 && inst.dag_edge_probability <= 1.0))
    add("dag_edge_probability: must lie in [0, 1]");
  if (!inst.continuous_puzzle_dims.empty())
    add("continuous_puzzle_dims: reserved, no shipped puzzle uses continuous dimensions");
  return out;
}

std::vector<std::string> validate(const InstanceConfig& inst) {
  auto out = structural_violations(inst);
  if (!out.empty()) return out;
  try {
    (void)puzzle::solve_order(inst.dag);
  } catch (const ValidationError& e) {
    out.push_back(std::string("solvability: ") + e.what());
    return out;
  }
  try {
    const auto route = meta::optimal_route(inst);
    if (route.steps >= inst.max_episode_steps)
      out.push_back("reachability: optimal route needs " + std::to_string(route.steps) +
                    " steps, episode cap is " + std::to_string(inst.max_episode_steps));
  } catch (const PlanningError& e) {
    out.push_back(std::string("reachability: ") + e.what());
  }
  return out;
}

InstanceConfig baseline_one_button() {
  InstanceConfig inst;
  inst.instance_seed = 0;
  inst.room = RoomGeometry{30.0, 30.0, Wall::East, 15.0, 1.0};
  // half-metre offsets keep forward moves on cell centres
  inst.start_pose = Pose{21.5, 15.5, 0.0, 0.0, 0.0, 0.0};
  inst.num_buttons = 1;
  inst.dag = puzzle::ButtonDag{1, {}, 0};
  inst.layout.buttons = {puzzle::Button{{25.5, 15.5}, 0.5}};
  return inst;
}

InstanceConfig ordered_two_button() {
  InstanceConfig inst = baseline_one_button();
  inst.instance_seed = 1;
  inst.num_buttons = 2;
  inst.dag = puzzle::ButtonDag{2, {{0, 1}}, 1};
  inst.layout.buttons.push_back(puzzle::Button{{5.5, 5.5}, 0.5});
  return inst;
}

}  // namespace erd::instance
