#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "erd/instance/instance.hpp"

namespace erd::instance {

/// Sample a concrete instance from the schematic. Pure in (params, seed):
/// the DAG, layout and start pose each draw from their own sub-stream of
/// `seed`. Throws ConfigError for out-of-range params and GenerationError
/// when rejection sampling runs out of attempts.
InstanceConfig generate(const SchematicParams& params, std::uint64_t seed);

/// Cheap checks: ranges, cross-references, DAG shape, layout geometry.
/// Each message starts with its category (e.g. "acyclicity: ...",
/// "layout/exit overlap: ...").
std::vector<std::string> structural_violations(const InstanceConfig& instance);

/// Everything in structural_violations plus solvability (solve_order) and
/// reachability (the meta-action route to every goal-chain button and the
/// exit fits inside the episode cap). Empty means valid.
std::vector<std::string> validate(const InstanceConfig& instance);

/// Hand-built instance of the one-button baseline: the button sits on the
/// straight line between the start pose and the exit, 8 moves in total.
InstanceConfig baseline_one_button();

/// The baseline plus a second button near the far corner; the two buttons
/// must be pressed in order (0 then 1) before the exit unlocks.
InstanceConfig ordered_two_button();

}  // namespace erd::instance
