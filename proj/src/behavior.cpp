// Behavior classification: rollout features onto domain labels.

#include "atlas/behavior.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "atlas/errors.hpp"

namespace atlas {

namespace {

int find_label(const std::vector<std::string>& names, const std::string& name) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw PipelineError("classifier produced a label outside the world vocabulary: " + name);
}

BehaviorLabel make_label(const World& w, const std::string& name) {
  const std::vector<std::string> names = label_names(w);
  return {find_label(names, name), name};
}

// True if the trajectory enters a cliff cell or passes through a cell
// orthogonally adjacent to one. The start cell and terminal cells are
// exempt from the adjacency test: start sits next to the cliff row by
// construction and the goal adjoins its far end, so counting them would
// label every policy risky.
bool touches_cliff(const World& w, const Trajectory& traj) {
  const GridMeta& g = w.grid;
  for (std::size_t i = 0; i < traj.visited.size(); ++i) {
    const int s = traj.visited[i];
    const int cell = g.state_cell[s];
    if (cell < 0) continue;  // off-grid states (e.g. the disengage terminal)
    if (g.role[cell] == CellRole::kCliff) return true;
    if (s == w.start || w.is_terminal(s)) continue;
    const int row = cell / g.width;
    const int col = cell % g.width;
    constexpr int dr[4] = {-1, 0, 1, 0};
    constexpr int dc[4] = {0, 1, 0, -1};
    for (int k = 0; k < 4; ++k) {
      const int nr = row + dr[k];
      const int nc = col + dc[k];
      if (nr < 0 || nr >= g.height || nc < 0 || nc >= g.width) continue;
      if (g.role[g.cell(nr, nc)] == CellRole::kCliff) return true;
    }
  }
  return false;
}

// Reward paid on entry to the terminal the trajectory ended in.
double reached_prize(const World& w, const Trajectory& traj) {
  return w.entry_reward[static_cast<std::size_t>(traj.visited.back())];
}

}  // namespace

Trajectory rollout(const World& world, const Policy& policy, int horizon) {
  if (horizon < 0) horizon = 4 * world.num_states;
  if (horizon < 1) throw ValidationError("rollout: horizon must be >= 1");
  if (static_cast<int>(policy.size()) != world.num_states)
    throw ValidationError("rollout: policy size does not match the world");

  Trajectory traj;
  int s = world.start;
  traj.visited.push_back(s);
  while (!world.is_terminal(s) && traj.steps < horizon) {
    const int a = policy[s];
    if (a < 0 || a >= world.num_actions || !world.is_available(s, a))
      throw ValidationError("rollout: policy picks an unavailable action at state " +
                            std::to_string(s));
    s = world.intended_outcome(s, a);
    traj.actions.push_back(a);
    traj.visited.push_back(s);
    ++traj.steps;
  }
  traj.terminated = world.is_terminal(s);
  return traj;
}

std::vector<std::string> label_names(const World& world) {
  switch (world.classifier) {
    case ClassifierId::kTerminalReached: return {"big", "small", "wander"};
    case ClassifierId::kCliffProximity: return {"risky", "safe", "wander"};
    case ClassifierId::kWallCell: return {"around-wall", "through-wall", "wander"};
    case ClassifierId::kChainDisengage: return {"exercise", "disengage", "wander"};
    case ClassifierId::kStartAction: return world.action_names;
    case ClassifierId::kCafeTwoWay: return {"healthy", "donut", "wander"};
    case ClassifierId::kCafeThreeWay: return {"noodle", "donut", "vegan", "wander"};
    case ClassifierId::kCliffDisengage: return {"risky", "safe", "disengage", "wander"};
  }
  throw PipelineError("unknown classifier");
}

BehaviorLabel classify_behavior(const World& world, const Policy& policy) {
  // Start-action classifiers need no rollout; the label is the chosen action.
  if (world.classifier == ClassifierId::kStartAction) {
    const int a = policy[static_cast<std::size_t>(world.start)];
    if (a < 0 || a >= world.num_actions || !world.is_available(world.start, a))
      throw ValidationError("classify_behavior: invalid action at start state");
    return {a, world.action_names[a]};
  }

  const Trajectory traj = rollout(world, policy);

  switch (world.classifier) {
    case ClassifierId::kTerminalReached: {
      if (!traj.terminated) return make_label(world, "wander");
      return make_label(world,
                        reached_prize(world, traj) == world.params.reward_big ? "big" : "small");
    }
    case ClassifierId::kCliffProximity: {
      if (!traj.terminated) return make_label(world, "wander");
      return make_label(world, touches_cliff(world, traj) ? "risky" : "safe");
    }
    case ClassifierId::kWallCell: {
      if (!traj.terminated) return make_label(world, "wander");
      for (int s : traj.visited)
        if (world.grid.role[world.grid.state_cell[s]] == CellRole::kWallGap)
          return make_label(world, "through-wall");
      return make_label(world, "around-wall");
    }
    case ClassifierId::kChainDisengage: {
      constexpr int kDisengage = 1;
      for (int a : traj.actions)
        if (a == kDisengage) return make_label(world, "disengage");
      return make_label(world, traj.terminated ? "exercise" : "wander");
    }
    case ClassifierId::kCafeTwoWay: {
      if (!traj.terminated) return make_label(world, "wander");
      return make_label(world, reached_prize(world, traj) == world.params.reward_donut
                                   ? "donut"
                                   : "healthy");
    }
    case ClassifierId::kCafeThreeWay: {
      if (!traj.terminated) return make_label(world, "wander");
      const double prize = reached_prize(world, traj);
      if (prize == world.params.reward_donut) return make_label(world, "donut");
      if (prize == world.params.reward_noodle) return make_label(world, "noodle");
      return make_label(world, "vegan");
    }
    case ClassifierId::kCliffDisengage: {
      if (traj.terminated &&
          world.grid.state_cell[static_cast<std::size_t>(traj.visited.back())] < 0)
        return make_label(world, "disengage");
      if (!traj.terminated) return make_label(world, "wander");
      return make_label(world, touches_cliff(world, traj) ? "risky" : "safe");
    }
    default:
      throw PipelineError("unknown classifier");
  }
}

std::string label_color(int index, const std::string& name) {
  if (name == "wander") return "#7f7f7f";
  static const std::array<const char*, 6> palette = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                                     "#d62728", "#9467bd", "#8c564b"};
  return palette[static_cast<std::size_t>(index) % palette.size()];
}

std::string palette_json(const World& world) {
  const std::vector<std::string> names = label_names(world);
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out << ",";
    out << "{\"index\":" << i << ",\"name\":\"" << names[i] << "\",\"color\":\""
        << label_color(static_cast<int>(i), names[i]) << "\"}";
  }
  out << "]";
  return out.str();
}

}  // namespace atlas
