// Solver contracts: value iteration, greedy extraction, exact policy
// evaluation, and the brute-force enumeration oracle.

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"

#include "atlas/errors.hpp"
#include "atlas/perception.hpp"
#include "atlas/planner.hpp"
#include "atlas/world.hpp"

using atlas::Policy;
using atlas::UserMdp;
using atlas::World;
using atlas::WorldKind;

namespace {

World make_default(WorldKind kind) {
  return atlas::make_world(kind, atlas::default_params(kind));
}

// Single absorbing state, zero reward.
UserMdp one_state_mdp() {
  UserMdp m;
  m.num_states = 1;
  m.num_actions = 1;
  m.start = 0;
  m.traits = {0.9, 1.0};
  m.transition = {{1.0}};
  m.expected_reward = {{0.0}};
  m.available = {1};
  m.terminal = {1};
  return m;
}

// s0 with actions stay (reward 0) and go (reward 1, into terminal s1).
UserMdp two_state_chain(double gamma) {
  UserMdp m;
  m.num_states = 2;
  m.num_actions = 2;
  m.start = 0;
  m.traits = {gamma, 1.0};
  m.transition = {{1.0, 0.0, 0.0, 1.0},   // stay
                  {0.0, 1.0, 0.0, 1.0}};  // go
  m.expected_reward = {{0.0, 0.0}, {1.0, 0.0}};
  m.available = {1, 1, 1, 1};
  m.terminal = {0, 1};
  return m;
}

double bellman_residual(const UserMdp& m, const std::vector<double>& v) {
  std::vector<double> out(v.size()), scratch;
  return atlas::bellman_sweep(m, v, out, scratch);
}

}  // namespace

// ==== value iteration =======================================================

TEST_CASE("value iteration: single absorbing state fixes V at zero") {
  const auto result = atlas::value_iteration(one_state_mdp());
  CHECK(result.converged);
  CHECK(result.values == std::vector<double>{0.0});
}

TEST_CASE("value iteration: one-step chain has the analytic value") {
  const auto result = atlas::value_iteration(two_state_chain(0.5));
  CHECK(result.converged);
  CHECK(result.values[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(result.values[1] == 0.0);
}

TEST_CASE("value iteration validates its controls and reports non-convergence") {
  const UserMdp m = two_state_chain(0.9);
  CHECK_THROWS_AS(atlas::value_iteration(m, 0.0), atlas::ValidationError);
  CHECK_THROWS_AS(atlas::value_iteration(m, -1.0), atlas::ValidationError);
  CHECK_THROWS_AS(atlas::value_iteration(m, 1e-8, 0), atlas::ValidationError);

  const World w = make_default(WorldKind::kCafe);
  const UserMdp big = atlas::build_user_mdp(w, {0.99, 0.8});
  const auto result = atlas::value_iteration(big, 1e-300, 3);
  CHECK_FALSE(result.converged);
  CHECK(result.iterations == 3);
}

TEST_CASE("value iteration rejects non-finite rewards loudly") {
  UserMdp m = two_state_chain(0.9);
  m.expected_reward[1][0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(atlas::value_iteration(m), atlas::PipelineError);
}

TEST_CASE("residuals contract geometrically") {
  for (WorldKind kind : {WorldKind::kBigSmall, WorldKind::kChain, WorldKind::kCliff}) {
    const World w = make_default(kind);
    const UserMdp m = atlas::build_user_mdp(w, {0.9, 0.7});
    std::vector<double> v(m.num_states, 0.0), next(m.num_states), scratch;
    double prev_residual = -1.0;
    for (int k = 0; k < 60; ++k) {
      const double r = atlas::bellman_sweep(m, v, next, scratch);
      if (prev_residual >= 0.0) CHECK(r <= 0.9 * prev_residual + 1e-12);
      prev_residual = r;
      v.swap(next);
    }
  }
}

// ==== policy extraction =====================================================

TEST_CASE("extract_policy picks the action toward the terminal") {
  const UserMdp m = two_state_chain(0.5);
  const auto vi = atlas::value_iteration(m);
  const Policy pi = atlas::extract_policy(m, vi.values);
  CHECK(pi[0] == 1);
}

TEST_CASE("extract_policy breaks exact ties by the lowest action index") {
  UserMdp m = two_state_chain(0.5);
  m.expected_reward[0][0] = 1.0;
  m.transition[0] = {0.0, 1.0, 0.0, 1.0};  // both actions now identical
  const auto vi = atlas::value_iteration(m);
  const Policy pi = atlas::extract_policy(m, vi.values);
  CHECK(pi[0] == 0);
}

TEST_CASE("extract_policy is deterministic") {
  const World w = make_default(WorldKind::kCliff);
  const UserMdp m = atlas::build_user_mdp(w, {0.8, 0.85});
  const auto vi = atlas::value_iteration(m);
  CHECK(atlas::extract_policy(m, vi.values) == atlas::extract_policy(m, vi.values));
}

TEST_CASE("positively scaling all rewards never changes the greedy policy") {
  const std::vector<WorldKind> kinds = {
      WorldKind::kBigSmall, WorldKind::kCliff,      WorldKind::kWall,
      WorldKind::kChain,    WorldKind::kRiverSwim,  WorldKind::kGamblersV1,
      WorldKind::kGamblersV2, WorldKind::kCafe,     WorldKind::kBigSmall,
      WorldKind::kChain};
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> gamma_dist(0.05, 0.98);
  std::uniform_real_distribution<double> p_dist(0.05, 1.0);
  std::uniform_real_distribution<double> scale_dist(0.1, 20.0);
  for (WorldKind kind : kinds) {
    World w = make_default(kind);
    for (int i = 0; i < 10; ++i) {
      const atlas::Traits traits{gamma_dist(rng), p_dist(rng)};
      const UserMdp base = atlas::build_user_mdp(w, traits);
      const Policy before =
          atlas::extract_policy(base, atlas::value_iteration(base, 1e-12).values);

      World scaled = w;
      const double c = scale_dist(rng);
      for (double& r : scaled.entry_reward) r *= c;
      for (double& r : scaled.self_reward) r *= c;
      const UserMdp after_mdp = atlas::build_user_mdp(scaled, traits);
      const Policy after =
          atlas::extract_policy(after_mdp, atlas::value_iteration(after_mdp, 1e-12).values);
      CHECK(before == after);
    }
  }
}

// ==== policy evaluation =====================================================

TEST_CASE("policy evaluation: staying at a zero-reward absorbing state is worthless") {
  const UserMdp m = two_state_chain(0.5);
  CHECK(atlas::policy_evaluation(m, {0, 0}) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("policy evaluation: the go policy earns the transition reward") {
  const UserMdp m = two_state_chain(0.5);
  const auto v = atlas::policy_evaluation(m, {1, 0});
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v[1] == 0.0);
}

TEST_CASE("policy evaluation hits 1e-12 Bellman residual on a large world") {
  const World w = make_default(WorldKind::kCafe);
  const UserMdp m = atlas::build_user_mdp(w, {0.99, 0.62});
  const auto vi = atlas::value_iteration(m, 1e-10);
  const Policy pi = atlas::extract_policy(m, vi.values);
  const auto v = atlas::policy_evaluation(m, pi);
  // residual of the *policy's* linear system
  double worst = 0.0;
  for (int s = 0; s < m.num_states; ++s) {
    double rhs = m.expected_reward[pi[s]][s];
    for (int next = 0; next < m.num_states; ++next)
      rhs += m.traits.gamma *
             m.transition[pi[s]][static_cast<std::size_t>(s) * m.num_states + next] *
             v[next];
    worst = std::max(worst, std::abs(v[s] - rhs));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("policy evaluation rejects malformed policies") {
  const UserMdp m = two_state_chain(0.5);
  CHECK_THROWS_AS(atlas::policy_evaluation(m, {0}), atlas::ValidationError);
  CHECK_THROWS_AS(atlas::policy_evaluation(m, {5, 0}), atlas::ValidationError);
}

TEST_CASE("greedy policy dominates every enumerated policy") {
  atlas::WorldParams params = atlas::default_params(WorldKind::kChain);
  params.length = 4;
  const World w = atlas::make_world(WorldKind::kChain, params);
  const UserMdp m = atlas::build_user_mdp(w, {0.9, 0.75});
  const auto vi = atlas::value_iteration(m, 1e-12);
  const double greedy_value = atlas::policy_evaluation(m, atlas::extract_policy(m, vi.values))
                                  [static_cast<std::size_t>(m.start)];
  // all 2^4 assignments over the four non-terminal states
  for (int mask = 0; mask < 16; ++mask) {
    Policy pi(m.num_states, 0);
    for (int s = 0; s < 4; ++s) pi[s] = (mask >> s) & 1;
    const double value = atlas::policy_evaluation(m, pi)[static_cast<std::size_t>(m.start)];
    CHECK(greedy_value >= value - 1e-6);
  }
}

// ==== brute force oracle ====================================================

TEST_CASE("brute force: a one-state MDP has exactly one policy") {
  const auto result = atlas::brute_force_optimal(one_state_mdp());
  CHECK(result.num_policies == 1);
  CHECK(result.policy == Policy{0});
  CHECK(result.values == std::vector<double>{0.0});
}

TEST_CASE("brute force: chain of length 4 enumerates 16 policies and matches VI") {
  atlas::WorldParams params = atlas::default_params(WorldKind::kChain);
  params.length = 4;
  const World w = atlas::make_world(WorldKind::kChain, params);
  const UserMdp m = atlas::build_user_mdp(w, {0.9, 0.8});
  const auto bf = atlas::brute_force_optimal(m);
  CHECK(bf.num_policies == 16);
  const auto vi = atlas::value_iteration(m, 1e-12);
  CHECK(std::abs(bf.values[static_cast<std::size_t>(m.start)] -
                 vi.values[static_cast<std::size_t>(m.start)]) <= 1e-6);
  // Terminals are pinned to action 0 by convention.
  for (int s = 0; s < m.num_states; ++s)
    if (m.is_terminal(s)) CHECK(bf.policy[s] == 0);
}

TEST_CASE("brute force: ties go to the lexicographically first policy") {
  UserMdp m = two_state_chain(0.5);
  m.expected_reward[0][0] = 1.0;
  m.transition[0] = {0.0, 1.0, 0.0, 1.0};  // both actions identical
  const auto result = atlas::brute_force_optimal(m);
  CHECK(result.policy[0] == 0);
}

TEST_CASE("brute force: a gridworld blows the enumeration cap") {
  const World w = make_default(WorldKind::kWall);  // 27 states, 4 actions
  const UserMdp m = atlas::build_user_mdp(w, {0.9, 0.9});
  CHECK_THROWS_AS(atlas::brute_force_optimal(m), atlas::PipelineError);
}

TEST_CASE("solver matches the oracle on a small two-terminal gridworld") {
  atlas::WorldParams params = atlas::default_params(WorldKind::kBigSmall);
  params.width = 3;
  params.height = 3;
  const World w = atlas::make_world(WorldKind::kBigSmall, params);
  const UserMdp m = atlas::build_user_mdp(w, {0.9, 0.8});
  const auto vi = atlas::value_iteration(m, 1e-12);
  const auto bf = atlas::brute_force_optimal(m, 2e4);
  CHECK(bf.num_policies == 16384);  // 4^7
  for (int s = 0; s < m.num_states; ++s)
    CHECK(std::abs(vi.values[s] - bf.values[s]) <= 1e-6);
}
