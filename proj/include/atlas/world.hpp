#pragma once
// Catalog of small tabular environments ("worlds"): immutable task tuples of
// states, actions and rewards, plus the intended/alternate outcome structure
// that the perceived-transition builder consumes. Constructors are pure and
// deterministic: identical parameters produce byte-identical worlds.

#include <cstdint>
#include <string>
#include <vector>

#include "atlas/errors.hpp"

namespace atlas {

enum class WorldKind {
  kBigSmall,
  kCliff,
  kWall,
  kChain,
  kRiverSwim,
  kGamblersV1,
  kGamblersV2,
  kCafe,
  kCliffDisengage,
  kCafeThreeWay,
};

std::string to_string(WorldKind kind);
WorldKind world_kind_from_string(const std::string& name);

// Which rule classify_behavior() applies to a policy in this world.
enum class ClassifierId {
  kTerminalReached,  // big-small: which terminal the rollout reaches
  kCliffProximity,   // cliff: enters or walks beside the cliff vs keeps space
  kWallCell,         // wall: passes through the penalized gap vs around
  kChainDisengage,   // chain: disengages before the end vs exercises through
  kStartAction,      // riverswim / gamblers: the action chosen at the start
  kCafeTwoWay,       // cafe: donut vs healthy (noodle+vegan folded)
  kCafeThreeWay,     // cafe composite: donut / noodle / vegan kept apart
  kCliffDisengage,   // cliff composite: disengage / risky / safe
};

// Flat parameter bag; each constructor reads the fields relevant to its
// kind and validates them. default_params() returns the shipped defaults.
struct WorldParams {
  int width = 0;
  int height = 0;
  int length = 0;       // line worlds: number of line states
  int start_index = -1; // gamblers: start position override, -1 = kind default
  int wall_span = -1;   // wall: blocked cells right of the gap, -1 = width-2
  double reward_big = 0.0;
  double reward_small = 0.0;
  double reward_goal = 0.0;
  double reward_cliff = 0.0;
  double reward_wall = 0.0;
  double reward_step = 0.0;
  double reward_end = 0.0;
  double reward_disengage = 0.0;
  double reward_left = 0.0;   // riverswim: small terminal
  double reward_right = 0.0;  // riverswim: large terminal
  double reward_dead = 0.0;   // gamblers: dead-end terminal (<= 0)
  double reward_donut = 0.0;
  double reward_noodle = 0.0;
  double reward_vegan = 0.0;
  double p_c = 0.0;  // gamblers: "continue" success constant
  double p_f = 0.0;  // gamblers: "finish" failure constant

  bool operator==(const WorldParams&) const = default;
};

WorldParams default_params(WorldKind kind);

// Named access used by the sweep module and the CLI. "reward-ratio" is a
// virtual parameter that sets reward_small = value * reward_big.
void set_param(WorldParams& params, const std::string& name, double value);
double get_param(const WorldParams& params, const std::string& name);

// Grid geometry for grid worlds; empty (width == 0) for line worlds.
// Cells are row-major with row 0 at the top; the four movement actions are
// ordered up, right, down, left.
enum class CellRole : std::uint8_t { kOpen, kBlocked, kTerminal, kCliff, kWallGap };

struct GridMeta {
  int width = 0;
  int height = 0;
  std::vector<int> cell_state;      // cell -> state index, -1 where blocked
  std::vector<CellRole> role;       // cell -> role
  std::vector<int> state_cell;      // state -> cell index, -1 for off-grid states
  bool empty() const { return width == 0; }
  int cell(int row, int col) const { return row * width + col; }
};

struct World {
  std::string id;  // kind tag, e.g. "big-small"
  WorldKind kind{};
  int num_states = 0;
  int num_actions = 0;
  int start = 0;
  std::vector<std::string> action_names;
  std::vector<std::uint8_t> available;       // s * num_actions + a
  std::vector<int> intended;                 // s * num_actions + a -> state
  std::vector<std::vector<int>> alternates;  // s * num_actions + a -> sorted states
  std::vector<double> entry_reward;          // paid once, on transition into the state
  std::vector<double> self_reward;           // paid on terminal self-loops; 0 in valid worlds
  std::vector<std::uint8_t> terminal;
  // s * num_actions + a; 1 marks an action whose outcome never varies with
  // confidence (e.g. riverswim's downstream). Such actions carry an empty
  // alternate set by design.
  std::vector<std::uint8_t> deterministic;
  ClassifierId classifier{};
  WorldParams params;
  GridMeta grid;

  bool is_terminal(int s) const { return terminal[static_cast<std::size_t>(s)] != 0; }
  bool is_available(int s, int a) const {
    return available[static_cast<std::size_t>(s) * num_actions + a] != 0;
  }
  bool is_deterministic(int s, int a) const {
    return deterministic[static_cast<std::size_t>(s) * num_actions + a] != 0;
  }
  int intended_outcome(int s, int a) const;
  const std::vector<int>& alternate_outcomes(int s, int a) const;
  // Entry-payment convention: R(s,a,s') is the entry reward of s'. Out of a
  // terminal the reward is the terminal's self_reward (0 in valid worlds, so
  // prizes are paid exactly once, on entry).
  double reward(int s, int a, int next) const;
};

// Constructors. Every constructor validates its parameters and produces a
// world that passes validate_world() with zero findings.
World make_big_small(const WorldParams& params);
World make_cliff(const WorldParams& params);
World make_wall(const WorldParams& params);
World make_literature_world(WorldKind kind, const WorldParams& params);
World make_composite(WorldKind kind, const WorldParams& params);
World make_world(WorldKind kind, const WorldParams& params);

struct ValidationFinding {
  std::string code;    // "unreachable", "non-absorbing-reward", ...
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationFinding> findings;
  bool ok() const { return findings.empty(); }
};

// Diagnoses invariant violations: unreachable states (not in the support of
// any intended or alternate outcome along paths from start), non-absorbing
// terminals, dangling intended outcomes, empty alternate sets, and alternate
// sets containing the intended outcome. Always returns a report.
ValidationReport validate_world(const World& world);

// JSON round-trip: only (kind, params) are stored; derived tables are
// reconstructed by the constructor on load.
std::string world_to_json(const World& world);
World world_from_json(const std::string& text);

}  // namespace atlas
