// Perceived MDP: how a user with given traits believes the world responds.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atlas/world.hpp"

namespace atlas {

// A user's planning traits: discount factor and confidence in execution.
struct Traits {
  double gamma = 0.0;  // discount factor, in [0, 1)
  double p = 1.0;      // confidence: probability the intended outcome happens

  bool operator==(const Traits&) const = default;
};

// Throws ValidationError unless gamma is in [0, 1) and p is in [0, 1].
void validate_traits(const Traits& traits);

// Dense perceived MDP, laid out for the value-iteration kernels:
// per-action row-major transition matrices and expected-reward vectors.
struct UserMdp {
  int num_states = 0;
  int num_actions = 0;
  int start = 0;
  Traits traits;
  // transition[a][s * num_states + next]: perceived transition probability.
  std::vector<std::vector<double>> transition;
  // expected_reward[a][s] = sum_next transition * reward(s, a, next).
  std::vector<std::vector<double>> expected_reward;
  std::vector<std::uint8_t> available;  // s * num_actions + a, 1 if usable
  std::vector<std::uint8_t> terminal;   // 1 for absorbing states

  bool is_available(int s, int a) const {
    return available[static_cast<std::size_t>(s) * num_actions + a] != 0;
  }
  bool is_terminal(int s) const { return terminal[static_cast<std::size_t>(s)] != 0; }
};

// Builds the MDP a user with the given traits plans against. The intended
// outcome of an action receives probability p; the remaining 1 - p is split
// evenly over the action's alternate outcomes. Terminal states self-loop
// with probability 1. Throws ValidationError on invalid traits.
UserMdp build_user_mdp(const World& world, const Traits& traits);

// Perceived probability of landing in `next` after taking `a` in `s`.
// Convenience accessor used by tests and the CLI debug dump.
double transition_probability(const UserMdp& mdp, int s, int a, int next);

// CSV dump of the perceived transition table: one row per (state, action,
// next) triple with nonzero probability. Columns:
// state,action,next,probability,reward
std::string transition_csv(const World& world, const UserMdp& mdp);

}  // namespace atlas
