// World constructors, parameter handling, validation and JSON round-trip.

#include "atlas/world.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace atlas {

namespace {

using json = nlohmann::json;

constexpr int kGridActions = 4;
// Action order fixes the deterministic tie-break: up, right, down, left.
constexpr int kRowDelta[kGridActions] = {-1, 0, 1, 0};
constexpr int kColDelta[kGridActions] = {0, 1, 0, -1};

void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace

std::string to_string(WorldKind kind) {
  switch (kind) {
    case WorldKind::kBigSmall: return "big-small";
    case WorldKind::kCliff: return "cliff";
    case WorldKind::kWall: return "wall";
    case WorldKind::kChain: return "chain";
    case WorldKind::kRiverSwim: return "riverswim";
    case WorldKind::kGamblersV1: return "gamblers-v1";
    case WorldKind::kGamblersV2: return "gamblers-v2";
    case WorldKind::kCafe: return "cafe";
    case WorldKind::kCliffDisengage: return "cliff-disengage";
    case WorldKind::kCafeThreeWay: return "cafe-threeway";
  }
  return "unknown";
}

WorldKind world_kind_from_string(const std::string& name) {
  static const std::map<std::string, WorldKind> lookup = {
      {"big-small", WorldKind::kBigSmall},
      {"big_small", WorldKind::kBigSmall},
      {"cliff", WorldKind::kCliff},
      {"wall", WorldKind::kWall},
      {"chain", WorldKind::kChain},
      {"riverswim", WorldKind::kRiverSwim},
      {"gamblers-v1", WorldKind::kGamblersV1},
      {"gamblers_v1", WorldKind::kGamblersV1},
      {"gamblers-v2", WorldKind::kGamblersV2},
      {"gamblers_v2", WorldKind::kGamblersV2},
      {"cafe", WorldKind::kCafe},
      {"cliff-disengage", WorldKind::kCliffDisengage},
      {"cliff_disengage", WorldKind::kCliffDisengage},
      {"cafe-threeway", WorldKind::kCafeThreeWay},
      {"cafe_threeway", WorldKind::kCafeThreeWay},
  };
  auto it = lookup.find(name);
  if (it == lookup.end()) throw ValidationError("unknown world kind: " + name);
  return it->second;
}

WorldParams default_params(WorldKind kind) {
  WorldParams p;
  switch (kind) {
    case WorldKind::kBigSmall:
      p.width = 5;
      p.height = 5;
      p.reward_big = 300.0;
      p.reward_small = 100.0;
      p.reward_step = -1.0;
      break;
    case WorldKind::kCliff:
      p.width = 8;
      p.height = 4;
      p.reward_goal = 100.0;
      p.reward_cliff = -0.5;
      p.reward_step = -1.0;
      break;
    case WorldKind::kWall:
      p.width = 5;
      p.height = 6;
      p.reward_goal = 100.0;
      p.reward_wall = -30.0;
      p.reward_step = -1.0;
      break;
    case WorldKind::kChain:
      p.length = 5;
      p.reward_end = 100.0;
      p.reward_disengage = 10.0;
      p.reward_step = 0.0;
      break;
    case WorldKind::kRiverSwim:
      p.length = 6;
      p.reward_left = 5.0;
      p.reward_right = 100.0;
      p.reward_step = 0.0;
      break;
    case WorldKind::kGamblersV1:
      p.length = 6;
      p.p_f = 0.9;   // held: finish fails with this probability
      p.p_c = 0.55;  // placeholder; the confidence axis binds p_c in v1
      p.reward_goal = 100.0;
      p.reward_dead = -5.0;
      break;
    case WorldKind::kGamblersV2:
      p.length = 7;
      p.p_c = 0.6;  // held: continue advances with this probability
      p.p_f = 0.5;  // placeholder; the confidence axis binds finish success in v2
      p.reward_goal = 100.0;
      p.reward_dead = -5.0;
      break;
    case WorldKind::kCafe:
    case WorldKind::kCafeThreeWay:
      p.width = 8;
      p.height = 13;
      p.reward_donut = 50.0;
      p.reward_noodle = 100.0;
      p.reward_vegan = 200.0;
      p.reward_step = -1.0;
      break;
    case WorldKind::kCliffDisengage:
      p = default_params(WorldKind::kCliff);
      p.reward_disengage = 10.0;
      break;
  }
  return p;
}

void set_param(WorldParams& params, const std::string& name, double value) {
  if (name == "width") params.width = static_cast<int>(std::lround(value));
  else if (name == "height") params.height = static_cast<int>(std::lround(value));
  else if (name == "length") params.length = static_cast<int>(std::lround(value));
  else if (name == "start-index") params.start_index = static_cast<int>(std::lround(value));
  else if (name == "wall-span") params.wall_span = static_cast<int>(std::lround(value));
  else if (name == "reward-big") params.reward_big = value;
  else if (name == "reward-small") params.reward_small = value;
  else if (name == "reward-ratio") params.reward_small = value * params.reward_big;
  else if (name == "reward-goal") params.reward_goal = value;
  else if (name == "reward-cliff") params.reward_cliff = value;
  else if (name == "reward-wall") params.reward_wall = value;
  else if (name == "reward-step") params.reward_step = value;
  else if (name == "reward-end") params.reward_end = value;
  else if (name == "reward-disengage") params.reward_disengage = value;
  else if (name == "reward-left") params.reward_left = value;
  else if (name == "reward-right") params.reward_right = value;
  else if (name == "reward-dead") params.reward_dead = value;
  else if (name == "reward-donut") params.reward_donut = value;
  else if (name == "reward-noodle") params.reward_noodle = value;
  else if (name == "reward-vegan") params.reward_vegan = value;
  else if (name == "p-c") params.p_c = value;
  else if (name == "p-f") params.p_f = value;
  else throw ValidationError("unknown world parameter: " + name);
}

double get_param(const WorldParams& params, const std::string& name) {
  if (name == "width") return params.width;
  if (name == "height") return params.height;
  if (name == "length") return params.length;
  if (name == "start-index") return params.start_index;
  if (name == "wall-span") return params.wall_span;
  if (name == "reward-big") return params.reward_big;
  if (name == "reward-small") return params.reward_small;
  if (name == "reward-ratio")
    return params.reward_big != 0.0 ? params.reward_small / params.reward_big : 0.0;
  if (name == "reward-goal") return params.reward_goal;
  if (name == "reward-cliff") return params.reward_cliff;
  if (name == "reward-wall") return params.reward_wall;
  if (name == "reward-step") return params.reward_step;
  if (name == "reward-end") return params.reward_end;
  if (name == "reward-disengage") return params.reward_disengage;
  if (name == "reward-left") return params.reward_left;
  if (name == "reward-right") return params.reward_right;
  if (name == "reward-dead") return params.reward_dead;
  if (name == "reward-donut") return params.reward_donut;
  if (name == "reward-noodle") return params.reward_noodle;
  if (name == "reward-vegan") return params.reward_vegan;
  if (name == "p-c") return params.p_c;
  if (name == "p-f") return params.p_f;
  throw ValidationError("unknown world parameter: " + name);
}

int World::intended_outcome(int s, int a) const {
  if (a < 0 || a >= num_actions || !is_available(s, a))
    throw ValidationError("action " + std::to_string(a) + " unavailable at state " +
                          std::to_string(s));
  return intended[static_cast<std::size_t>(s) * num_actions + a];
}

const std::vector<int>& World::alternate_outcomes(int s, int a) const {
  if (a < 0 || a >= num_actions || !is_available(s, a))
    throw ValidationError("action " + std::to_string(a) + " unavailable at state " +
                          std::to_string(s));
  return alternates[static_cast<std::size_t>(s) * num_actions + a];
}

double World::reward(int s, int /*a*/, int next) const {
  if (is_terminal(s)) return self_reward[static_cast<std::size_t>(s)];
  return entry_reward[static_cast<std::size_t>(next)];
}

namespace {

// ============================================================
// Grid scaffolding shared by the grid worlds
// ============================================================

// Builds states, intended outcomes and alternate sets from a role grid.
// Alternate sets follow the "my other moves might happen instead" rule:
// S_hat(s,a) = { intended outcomes of every available action at s } union
// { s } minus the intended outcome of a.
World build_grid_world(WorldKind kind, const WorldParams& params, int width, int height,
                       const std::vector<CellRole>& role,
                       const std::vector<double>& cell_entry_reward, int start_cell,
                       ClassifierId classifier) {
  World w;
  w.kind = kind;
  w.id = to_string(kind);
  w.params = params;
  w.classifier = classifier;
  w.num_actions = kGridActions;
  w.action_names = {"up", "right", "down", "left"};

  w.grid.width = width;
  w.grid.height = height;
  w.grid.role = role;
  w.grid.cell_state.assign(static_cast<std::size_t>(width) * height, -1);
  for (int cell = 0; cell < width * height; ++cell) {
    if (role[cell] == CellRole::kBlocked) continue;
    w.grid.cell_state[cell] = w.num_states++;
    w.grid.state_cell.push_back(cell);
  }

  w.start = w.grid.cell_state[start_cell];
  require(w.start >= 0, "start cell is blocked");

  const std::size_t table = static_cast<std::size_t>(w.num_states) * kGridActions;
  w.available.assign(table, 1);
  w.intended.assign(table, -1);
  w.alternates.assign(table, {});
  w.deterministic.assign(table, 0);
  w.entry_reward.resize(w.num_states);
  w.self_reward.assign(w.num_states, 0.0);
  w.terminal.assign(w.num_states, 0);

  for (int s = 0; s < w.num_states; ++s) {
    const int cell = w.grid.state_cell[s];
    const int row = cell / width;
    const int col = cell % width;
    w.entry_reward[s] = cell_entry_reward[cell];
    const bool is_term = role[cell] == CellRole::kTerminal || role[cell] == CellRole::kCliff;
    w.terminal[s] = is_term ? 1 : 0;

    for (int a = 0; a < kGridActions; ++a) {
      int next = s;
      if (!is_term) {
        const int nr = row + kRowDelta[a];
        const int nc = col + kColDelta[a];
        if (nr >= 0 && nr < height && nc >= 0 && nc < width &&
            role[w.grid.cell(nr, nc)] != CellRole::kBlocked) {
          next = w.grid.cell_state[w.grid.cell(nr, nc)];
        }
      }
      w.intended[static_cast<std::size_t>(s) * kGridActions + a] = next;
    }
    if (is_term) continue;

    std::set<int> reachable;
    for (int a = 0; a < kGridActions; ++a)
      reachable.insert(w.intended[static_cast<std::size_t>(s) * kGridActions + a]);
    reachable.insert(s);
    for (int a = 0; a < kGridActions; ++a) {
      const int io = w.intended[static_cast<std::size_t>(s) * kGridActions + a];
      std::vector<int>& alt = w.alternates[static_cast<std::size_t>(s) * kGridActions + a];
      for (int t : reachable)
        if (t != io) alt.push_back(t);
    }
  }
  return w;
}

// Line-world scaffolding: num_actions = 2, explicit tables filled by caller.
World init_line_world(WorldKind kind, const WorldParams& params, int num_states,
                      std::vector<std::string> action_names, ClassifierId classifier) {
  World w;
  w.kind = kind;
  w.id = to_string(kind);
  w.params = params;
  w.classifier = classifier;
  w.num_states = num_states;
  w.num_actions = static_cast<int>(action_names.size());
  w.action_names = std::move(action_names);
  const std::size_t table = static_cast<std::size_t>(num_states) * w.num_actions;
  w.available.assign(table, 1);
  w.intended.assign(table, -1);
  w.alternates.assign(table, {});
  w.deterministic.assign(table, 0);
  w.entry_reward.assign(num_states, 0.0);
  w.self_reward.assign(num_states, 0.0);
  w.terminal.assign(num_states, 0);
  return w;
}

void set_terminal_rows(World& w) {
  for (int s = 0; s < w.num_states; ++s) {
    if (!w.is_terminal(s)) continue;
    for (int a = 0; a < w.num_actions; ++a) {
      w.intended[static_cast<std::size_t>(s) * w.num_actions + a] = s;
      w.alternates[static_cast<std::size_t>(s) * w.num_actions + a].clear();
    }
  }
}

bool around_path_exists(int width, int height, const std::vector<CellRole>& role,
                        int start_cell, int goal_cell, int gap_cell) {
  std::deque<int> queue{start_cell};
  std::vector<char> seen(static_cast<std::size_t>(width) * height, 0);
  seen[start_cell] = 1;
  while (!queue.empty()) {
    const int cell = queue.front();
    queue.pop_front();
    if (cell == goal_cell) return true;
    const int row = cell / width;
    const int col = cell % width;
    for (int a = 0; a < kGridActions; ++a) {
      const int nr = row + kRowDelta[a];
      const int nc = col + kColDelta[a];
      if (nr < 0 || nr >= height || nc < 0 || nc >= width) continue;
      const int next = nr * width + nc;
      if (seen[next] || next == gap_cell || role[next] == CellRole::kBlocked) continue;
      seen[next] = 1;
      queue.push_back(next);
    }
  }
  return false;
}

}  // namespace

// ============================================================
// Atomic grid worlds
// ============================================================

World make_big_small(const WorldParams& params) {
  require(params.width >= 2 && params.height >= 2,
          "big-small: width and height must both be >= 2");
  require(params.reward_small > 0.0 && params.reward_big > 0.0,
          "big-small: terminal rewards must be positive");
  require(params.reward_small < params.reward_big,
          "big-small: small reward must be strictly below the big reward");

  const int w = params.width, h = params.height;
  std::vector<CellRole> role(static_cast<std::size_t>(w) * h, CellRole::kOpen);
  std::vector<double> entry(static_cast<std::size_t>(w) * h, params.reward_step);
  const int small_cell = (h - 1) * w;           // bottom of the start column
  const int big_cell = (h - 1) * w + (w - 1);   // bottom of the far column
  role[small_cell] = CellRole::kTerminal;
  role[big_cell] = CellRole::kTerminal;
  entry[small_cell] = params.reward_small;
  entry[big_cell] = params.reward_big;
  return build_grid_world(WorldKind::kBigSmall, params, w, h, role, entry, /*start=*/0,
                          ClassifierId::kTerminalReached);
}

World make_cliff(const WorldParams& params) {
  require(params.width >= 3 && params.height >= 2, "cliff: grid too small");
  require(params.reward_goal > 0.0, "cliff: goal reward must be positive");
  require(params.reward_cliff < 0.0, "cliff: cliff penalty must be negative");

  const int w = params.width, h = params.height;
  std::vector<CellRole> role(static_cast<std::size_t>(w) * h, CellRole::kOpen);
  std::vector<double> entry(static_cast<std::size_t>(w) * h, params.reward_step);
  const int start_cell = (h - 1) * w;
  const int goal_cell = (h - 1) * w + (w - 1);
  role[goal_cell] = CellRole::kTerminal;
  entry[goal_cell] = params.reward_goal;
  for (int col = 1; col < w - 1; ++col) {
    const int cell = (h - 1) * w + col;
    role[cell] = CellRole::kCliff;
    entry[cell] = params.reward_cliff;
  }
  return build_grid_world(WorldKind::kCliff, params, w, h, role, entry, start_cell,
                          ClassifierId::kCliffProximity);
}

World make_wall(const WorldParams& params) {
  require(params.width >= 3 && params.height >= 3, "wall: grid too small");
  require(params.reward_wall < 0.0, "wall: wall penalty must be negative");
  require(params.reward_goal > 0.0, "wall: goal reward must be positive");

  const int w = params.width, h = params.height;
  const int wall_row = h / 2;
  const int span = params.wall_span < 0 ? w - 2 : params.wall_span;
  require(span >= 0, "wall: span must be >= 0");

  std::vector<CellRole> role(static_cast<std::size_t>(w) * h, CellRole::kOpen);
  std::vector<double> entry(static_cast<std::size_t>(w) * h, params.reward_step);
  const int start_cell = 0;
  const int goal_cell = (h - 1) * w;
  const int gap_cell = wall_row * w;
  role[goal_cell] = CellRole::kTerminal;
  entry[goal_cell] = params.reward_goal;
  role[gap_cell] = CellRole::kWallGap;
  entry[gap_cell] = params.reward_wall + params.reward_step;
  for (int col = 1; col <= span && col < w; ++col) role[wall_row * w + col] = CellRole::kBlocked;

  require(around_path_exists(w, h, role, start_cell, goal_cell, gap_cell),
          "wall: wall placement leaves no around-path");
  return build_grid_world(WorldKind::kWall, params, w, h, role, entry, start_cell,
                          ClassifierId::kWallCell);
}

// ============================================================
// Literature worlds
// ============================================================

namespace {

World make_chain(const WorldParams& params) {
  require(params.length >= 3, "chain: length must be >= 3");
  require(params.reward_disengage > 0.0, "chain: disengage reward must be positive");
  require(params.reward_disengage < params.reward_end,
          "chain: disengage reward must be below the end reward");

  const int n = params.length;
  const int end_state = n;        // large-reward terminal past the last line state
  const int dis_state = n + 1;    // disengage terminal reachable from every line state
  World w = init_line_world(WorldKind::kChain, params, n + 2, {"exercise", "disengage"},
                            ClassifierId::kChainDisengage);
  w.start = 0;
  w.terminal[end_state] = 1;
  w.terminal[dis_state] = 1;
  w.entry_reward[end_state] = params.reward_end;
  w.entry_reward[dis_state] = params.reward_disengage;
  for (int s = 0; s < n; ++s) {
    w.entry_reward[s] = params.reward_step;
    const int next = s + 1 == n ? end_state : s + 1;
    w.intended[s * 2 + 0] = next;       // exercise
    w.intended[s * 2 + 1] = dis_state;  // disengage
    w.alternates[s * 2 + 0] = {s, dis_state};
    w.alternates[s * 2 + 1] = {s, next};
    std::sort(w.alternates[s * 2 + 0].begin(), w.alternates[s * 2 + 0].end());
    std::sort(w.alternates[s * 2 + 1].begin(), w.alternates[s * 2 + 1].end());
  }
  set_terminal_rows(w);
  return w;
}

World make_riverswim(const WorldParams& params) {
  require(params.length >= 3, "riverswim: length must be >= 3");
  require(params.reward_left > 0.0, "riverswim: left reward must be positive");
  require(params.reward_left < params.reward_right,
          "riverswim: left reward must be below the right reward");

  const int n = params.length;
  World w = init_line_world(WorldKind::kRiverSwim, params, n, {"upstream", "downstream"},
                            ClassifierId::kStartAction);
  w.start = 1;
  w.terminal[0] = 1;
  w.terminal[n - 1] = 1;
  w.entry_reward[0] = params.reward_left;
  w.entry_reward[n - 1] = params.reward_right;
  for (int s = 1; s < n - 1; ++s) {
    w.entry_reward[s] = params.reward_step;
    w.intended[s * 2 + 0] = s + 1;  // upstream: may stay or fall behind
    w.intended[s * 2 + 1] = s - 1;  // downstream: always succeeds
    w.alternates[s * 2 + 0] = {s - 1, s};
    w.deterministic[s * 2 + 1] = 1;
  }
  set_terminal_rows(w);
  return w;
}

World make_gamblers(WorldKind kind, const WorldParams& params) {
  require(params.length >= 3, "gamblers: length must be >= 3");
  require(params.p_c >= 0.0 && params.p_c <= 1.0, "gamblers: p_c must be in [0,1]");
  require(params.p_f >= 0.0 && params.p_f <= 1.0, "gamblers: p_f must be in [0,1]");
  require(params.reward_goal > 0.0, "gamblers: goal reward must be positive");
  require(params.reward_dead <= 0.0, "gamblers: dead-end reward must be <= 0");

  const int n = params.length;
  const int goal = n - 1;
  int start = params.start_index;
  if (start < 0) start = kind == WorldKind::kGamblersV1 ? 1 : std::max(1, n - 4);
  require(start >= 1 && start <= n - 2, "gamblers: start must lie strictly between the terminals");

  World w = init_line_world(kind, params, n, {"continue", "finish"},
                            ClassifierId::kStartAction);
  w.start = start;
  w.terminal[0] = 1;
  w.terminal[goal] = 1;
  w.entry_reward[0] = params.reward_dead;
  w.entry_reward[goal] = params.reward_goal;
  for (int s = 1; s < goal; ++s) {
    w.entry_reward[s] = params.reward_step;
    w.intended[s * 2 + 0] = s + 1;  // continue: one step toward the goal
    w.intended[s * 2 + 1] = goal;   // finish: straight to goal or dead-end
    w.alternates[s * 2 + 0] = {s - 1};
    w.alternates[s * 2 + 1] = {0};
  }
  set_terminal_rows(w);
  return w;
}

World make_cafe(WorldKind kind, const WorldParams& params) {
  require(params.width >= 4 && params.height >= 5, "cafe: grid too small for the layout");
  require(params.reward_donut > 0.0, "cafe: donut reward must be positive");
  require(params.reward_donut < params.reward_noodle &&
              params.reward_noodle < params.reward_vegan,
          "cafe: rewards must satisfy donut < noodle < vegan");

  const int w = params.width, h = params.height;
  const int c0 = (w - 1) / 2;     // central column holding start, passage and eateries
  const int gate_row = h / 2;     // wall of eateries across the middle
  const int noodle_row = gate_row / 2;
  std::vector<CellRole> role(static_cast<std::size_t>(w) * h, CellRole::kOpen);
  std::vector<double> entry(static_cast<std::size_t>(w) * h, params.reward_step);

  for (int col = 0; col < w; ++col)
    if (col < c0 - 1 || col > c0 + 1) role[gate_row * w + col] = CellRole::kBlocked;
  const int donut_a = gate_row * w + (c0 - 1);
  const int donut_b = gate_row * w + (c0 + 1);
  const int noodle = noodle_row * w + c0;
  const int vegan = c0;  // row 0
  role[donut_a] = CellRole::kTerminal;
  role[donut_b] = CellRole::kTerminal;
  role[noodle] = CellRole::kTerminal;
  role[vegan] = CellRole::kTerminal;
  entry[donut_a] = params.reward_donut;
  entry[donut_b] = params.reward_donut;
  entry[noodle] = params.reward_noodle;
  entry[vegan] = params.reward_vegan;

  const int start_cell = (h - 1) * w + c0;
  const ClassifierId classifier = kind == WorldKind::kCafeThreeWay
                                      ? ClassifierId::kCafeThreeWay
                                      : ClassifierId::kCafeTwoWay;
  return build_grid_world(kind, params, w, h, role, entry, start_cell, classifier);
}

World make_cliff_disengage(const WorldParams& params) {
  require(params.reward_disengage > 0.0,
          "cliff-disengage: disengage reward must be positive");
  require(params.reward_disengage < params.reward_goal,
          "cliff-disengage: disengage reward must be below the goal reward");

  World w = make_cliff(params);
  w.kind = WorldKind::kCliffDisengage;
  w.id = to_string(w.kind);
  w.classifier = ClassifierId::kCliffDisengage;
  w.params = params;

  // Append the disengage terminal as an off-grid state reached by moving
  // "down" from the start (which previously bounced in place).
  const int dis = w.num_states++;
  w.entry_reward.push_back(params.reward_disengage);
  w.self_reward.push_back(0.0);
  w.terminal.push_back(1);
  w.grid.state_cell.push_back(-1);
  for (int a = 0; a < kGridActions; ++a) {
    w.available.push_back(1);
    w.intended.push_back(dis);
    w.alternates.push_back({});
    w.deterministic.push_back(0);
  }

  constexpr int kDown = 2;
  w.intended[static_cast<std::size_t>(w.start) * kGridActions + kDown] = dis;
  std::set<int> reachable;
  for (int a = 0; a < kGridActions; ++a)
    reachable.insert(w.intended[static_cast<std::size_t>(w.start) * kGridActions + a]);
  reachable.insert(w.start);
  for (int a = 0; a < kGridActions; ++a) {
    const int io = w.intended[static_cast<std::size_t>(w.start) * kGridActions + a];
    std::vector<int>& alt = w.alternates[static_cast<std::size_t>(w.start) * kGridActions + a];
    alt.clear();
    for (int t : reachable)
      if (t != io) alt.push_back(t);
  }
  return w;
}

}  // namespace

World make_literature_world(WorldKind kind, const WorldParams& params) {
  switch (kind) {
    case WorldKind::kChain: return make_chain(params);
    case WorldKind::kRiverSwim: return make_riverswim(params);
    case WorldKind::kGamblersV1:
    case WorldKind::kGamblersV2: return make_gamblers(kind, params);
    case WorldKind::kCafe: return make_cafe(kind, params);
    default:
      throw ValidationError("make_literature_world: unsupported kind " + to_string(kind));
  }
}

World make_composite(WorldKind kind, const WorldParams& params) {
  switch (kind) {
    case WorldKind::kCliffDisengage: return make_cliff_disengage(params);
    case WorldKind::kCafeThreeWay: return make_cafe(kind, params);
    default:
      throw ValidationError("make_composite: unsupported kind " + to_string(kind));
  }
}

World make_world(WorldKind kind, const WorldParams& params) {
  switch (kind) {
    case WorldKind::kBigSmall: return make_big_small(params);
    case WorldKind::kCliff: return make_cliff(params);
    case WorldKind::kWall: return make_wall(params);
    case WorldKind::kChain:
    case WorldKind::kRiverSwim:
    case WorldKind::kGamblersV1:
    case WorldKind::kGamblersV2:
    case WorldKind::kCafe: return make_literature_world(kind, params);
    case WorldKind::kCliffDisengage:
    case WorldKind::kCafeThreeWay: return make_composite(kind, params);
  }
  throw ValidationError("make_world: unknown kind");
}

// ============================================================
// Validation
// ============================================================

ValidationReport validate_world(const World& w) {
  ValidationReport report;
  auto add = [&report](const std::string& code, const std::string& detail) {
    report.findings.push_back({code, detail});
  };

  const auto states = static_cast<std::size_t>(w.num_states);
  if (w.available.size() != states * w.num_actions ||
      w.intended.size() != states * w.num_actions ||
      w.alternates.size() != states * w.num_actions ||
      w.deterministic.size() != states * w.num_actions ||
      w.entry_reward.size() != states || w.self_reward.size() != states ||
      w.terminal.size() != states) {
    add("malformed-tables", "table sizes do not match num_states * num_actions");
    return report;
  }

  for (int s = 0; s < w.num_states; ++s) {
    for (int a = 0; a < w.num_actions; ++a) {
      if (!w.is_available(s, a)) continue;
      const std::size_t idx = static_cast<std::size_t>(s) * w.num_actions + a;
      const int io = w.intended[idx];
      if (io < 0 || io >= w.num_states) {
        add("dangling-intended", "state " + std::to_string(s) + " action " +
                                     std::to_string(a) + " has no valid intended outcome");
        continue;
      }
      if (w.is_terminal(s)) {
        if (io != s)
          add("non-absorbing-transition",
              "terminal " + std::to_string(s) + " does not map action " +
                  std::to_string(a) + " to itself");
        if (w.reward(s, a, io) != 0.0)
          add("non-absorbing-reward", "terminal " + std::to_string(s) +
                                          " pays nonzero reward on its self-transition");
        continue;
      }
      const std::vector<int>& alt = w.alternates[idx];
      if (alt.empty() && !w.is_deterministic(s, a))
        add("empty-alternates", "state " + std::to_string(s) + " action " +
                                    std::to_string(a) + " has no alternate outcomes");
      for (int t : alt) {
        if (t == io)
          add("intended-in-alternates", "state " + std::to_string(s) + " action " +
                                            std::to_string(a) +
                                            " lists the intended outcome as an alternate");
        if (t < 0 || t >= w.num_states)
          add("dangling-alternate",
              "state " + std::to_string(s) + " action " + std::to_string(a) +
                  " lists an out-of-range alternate");
      }
    }
  }

  // Reachability over the full transition support (intended + alternates):
  // gamblers' dead-end, for example, is only entered through an alternate.
  std::vector<char> seen(states, 0);
  if (w.start >= 0 && w.start < w.num_states) {
    std::deque<int> queue{w.start};
    seen[w.start] = 1;
    while (!queue.empty()) {
      const int s = queue.front();
      queue.pop_front();
      if (w.is_terminal(s)) continue;
      for (int a = 0; a < w.num_actions; ++a) {
        if (!w.is_available(s, a)) continue;
        const std::size_t idx = static_cast<std::size_t>(s) * w.num_actions + a;
        auto visit = [&](int t) {
          if (t >= 0 && t < w.num_states && !seen[t]) {
            seen[t] = 1;
            queue.push_back(t);
          }
        };
        visit(w.intended[idx]);
        for (int t : w.alternates[idx]) visit(t);
      }
    }
  } else {
    add("invalid-start", "start state out of range");
  }
  for (int s = 0; s < w.num_states; ++s)
    if (!seen[s]) add("unreachable", "state " + std::to_string(s) + " is unreachable from start");

  return report;
}

// ============================================================
// JSON round-trip
// ============================================================

namespace {

json params_to_json(const WorldParams& p) {
  return json{{"width", p.width},
              {"height", p.height},
              {"length", p.length},
              {"start-index", p.start_index},
              {"wall-span", p.wall_span},
              {"reward-big", p.reward_big},
              {"reward-small", p.reward_small},
              {"reward-goal", p.reward_goal},
              {"reward-cliff", p.reward_cliff},
              {"reward-wall", p.reward_wall},
              {"reward-step", p.reward_step},
              {"reward-end", p.reward_end},
              {"reward-disengage", p.reward_disengage},
              {"reward-left", p.reward_left},
              {"reward-right", p.reward_right},
              {"reward-dead", p.reward_dead},
              {"reward-donut", p.reward_donut},
              {"reward-noodle", p.reward_noodle},
              {"reward-vegan", p.reward_vegan},
              {"p-c", p.p_c},
              {"p-f", p.p_f}};
}

WorldParams params_from_json(const json& j) {
  WorldParams p;
  p.width = j.value("width", 0);
  p.height = j.value("height", 0);
  p.length = j.value("length", 0);
  p.start_index = j.value("start-index", -1);
  p.wall_span = j.value("wall-span", -1);
  p.reward_big = j.value("reward-big", 0.0);
  p.reward_small = j.value("reward-small", 0.0);
  p.reward_goal = j.value("reward-goal", 0.0);
  p.reward_cliff = j.value("reward-cliff", 0.0);
  p.reward_wall = j.value("reward-wall", 0.0);
  p.reward_step = j.value("reward-step", 0.0);
  p.reward_end = j.value("reward-end", 0.0);
  p.reward_disengage = j.value("reward-disengage", 0.0);
  p.reward_left = j.value("reward-left", 0.0);
  p.reward_right = j.value("reward-right", 0.0);
  p.reward_dead = j.value("reward-dead", 0.0);
  p.reward_donut = j.value("reward-donut", 0.0);
  p.reward_noodle = j.value("reward-noodle", 0.0);
  p.reward_vegan = j.value("reward-vegan", 0.0);
  p.p_c = j.value("p-c", 0.0);
  p.p_f = j.value("p-f", 0.0);
  return p;
}

}  // namespace

std::string world_to_json(const World& w) {
  json j{{"kind", to_string(w.kind)}, {"params", params_to_json(w.params)}};
  return j.dump(2);
}

World world_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("world JSON parse error: ") + e.what());
  }
  if (!j.contains("kind")) throw ValidationError("world JSON missing \"kind\"");
  const WorldKind kind = world_kind_from_string(j["kind"].get<std::string>());
  WorldParams params =
      j.contains("params") ? params_from_json(j["params"]) : default_params(kind);
  return make_world(kind, params);
}

}  // namespace atlas
