// Rollouts under intended dynamics and per-world behavior classification.
#pragma once

#include <string>
#include <vector>

#include "atlas/planner.hpp"
#include "atlas/world.hpp"

namespace atlas {

// Deterministic trace of a policy under intended outcomes.
struct Trajectory {
  std::vector<int> visited;  // states, starting at world.start
  std::vector<int> actions;  // actions taken; size == visited.size() - 1
  bool terminated = false;   // reached an absorbing state before the horizon
  int steps = 0;             // transitions taken
};

// Domain-level behavior: stable small index plus a human-readable name.
// The index is the position in label_names(world); "wander" is reserved for
// rollouts that never reach a terminal.
struct BehaviorLabel {
  int index = 0;
  std::string name;

  bool operator==(const BehaviorLabel&) const = default;
};

// Follows the policy from the start state under intended outcomes until a
// terminal state or `horizon` steps (default 4 * num_states). Throws
// ValidationError on horizon < 1 or a malformed policy.
Trajectory rollout(const World& world, const Policy& policy, int horizon = -1);

// The closed label vocabulary of a world, ordered by label index. Index 0
// and 1 correspond to the two behaviors of each two-behavior map.
std::vector<std::string> label_names(const World& world);

// Classifies what the policy does in domain terms:
//  - big-small / cafe: which terminal the rollout reaches,
//  - cliff: "risky" when the rollout enters a cliff cell or passes through a
//    non-start non-terminal cell orthogonally adjacent to one, else "safe",
//  - wall: "through-wall" when the rollout crosses the penalized gap cell,
//  - chain: "disengage" when any action taken is disengage, else "exercise",
//  - riverswim / gamblers: named by the policy's action at the start state,
//  - cliff-disengage: "disengage" when that terminal is reached, otherwise
//    the underlying cliff rule.
// Gridworld rollouts that end without a terminal are labeled "wander".
BehaviorLabel classify_behavior(const World& world, const Policy& policy);

// Display color (hex) for a label: a fixed ordered palette keyed by index,
// except "wander", which is always gray.
std::string label_color(int index, const std::string& name);

// Palette export for renderers: JSON array of {index, name, color}.
std::string palette_json(const World& world);

}  // namespace atlas
