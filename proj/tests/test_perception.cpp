// Perceived-MDP construction: confidence splitting, row-stochasticity,
// and the gamblers variants that bind confidence to a task constant.

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "atlas/errors.hpp"
#include "atlas/perception.hpp"
#include "atlas/world.hpp"

using atlas::Traits;
using atlas::UserMdp;
using atlas::World;
using atlas::WorldKind;

namespace {

World make_default(WorldKind kind) {
  return atlas::make_world(kind, atlas::default_params(kind));
}

double row_sum(const UserMdp& mdp, int s, int a) {
  double sum = 0.0;
  for (int next = 0; next < mdp.num_states; ++next)
    sum += mdp.transition[a][static_cast<std::size_t>(s) * mdp.num_states + next];
  return sum;
}

}  // namespace

TEST_CASE("traits are range-checked") {
  CHECK_NOTHROW(atlas::validate_traits({0.0, 0.0}));
  CHECK_NOTHROW(atlas::validate_traits({0.99, 1.0}));
  CHECK_THROWS_AS(atlas::validate_traits({1.0, 0.5}), atlas::ValidationError);
  CHECK_THROWS_AS(atlas::validate_traits({-0.1, 0.5}), atlas::ValidationError);
  CHECK_THROWS_AS(atlas::validate_traits({0.5, 1.1}), atlas::ValidationError);
  CHECK_THROWS_AS(atlas::validate_traits({0.5, -0.1}), atlas::ValidationError);
  const World w = make_default(WorldKind::kBigSmall);
  CHECK_THROWS_AS(atlas::build_user_mdp(w, {1.0, 0.5}), atlas::ValidationError);
}

TEST_CASE("full confidence makes every row a point mass on the intended outcome") {
  const World w = make_default(WorldKind::kBigSmall);
  const UserMdp mdp = atlas::build_user_mdp(w, {0.9, 1.0});
  for (int s = 0; s < w.num_states; ++s) {
    for (int a = 0; a < w.num_actions; ++a) {
      if (!w.is_available(s, a)) continue;
      const int io = w.is_terminal(s) ? s : w.intended_outcome(s, a);
      for (int next = 0; next < w.num_states; ++next) {
        const double got = atlas::transition_probability(mdp, s, a, next);
        CHECK(got == (next == io ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("zero confidence splits all mass equally over the alternates") {
  // Top-row non-corner cell: moving down has three alternates
  // (stay, left neighbor, right neighbor).
  const World w = make_default(WorldKind::kBigSmall);
  const int s = w.grid.cell_state[w.grid.cell(0, 1)];
  const int down = 2;
  REQUIRE(w.alternate_outcomes(s, down).size() == 3);
  const UserMdp mdp = atlas::build_user_mdp(w, {0.5, 0.0});
  CHECK(atlas::transition_probability(mdp, s, down, w.intended_outcome(s, down)) == 0.0);
  for (int alt : w.alternate_outcomes(s, down))
    CHECK(atlas::transition_probability(mdp, s, down, alt) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("p=0.7 with two alternates gives the (0.7, 0.15, 0.15) row") {
  // Corner cell: moving down has exactly two alternates (stay, right).
  const World w = make_default(WorldKind::kBigSmall);
  const int s = w.start;
  const int down = 2;
  REQUIRE(w.alternate_outcomes(s, down).size() == 2);
  const UserMdp mdp = atlas::build_user_mdp(w, {0.5, 0.7});
  CHECK(atlas::transition_probability(mdp, s, down, w.intended_outcome(s, down)) == 0.7);
  for (int alt : w.alternate_outcomes(s, down))
    CHECK(atlas::transition_probability(mdp, s, down, alt) ==
          doctest::Approx(0.15).epsilon(1e-12));
  CHECK(row_sum(mdp, s, down) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("intended outcomes follow grid geometry") {
  const World w = make_default(WorldKind::kBigSmall);
  const int mid = w.grid.cell_state[w.grid.cell(2, 2)];
  CHECK(w.intended_outcome(mid, 2) == w.grid.cell_state[w.grid.cell(3, 2)]);
  // Off-grid moves stay in place; the in-place result is the intended outcome.
  const int bottom = w.grid.cell_state[w.grid.cell(4, 2)];
  CHECK(w.intended_outcome(bottom, 2) == bottom);
  // Terminals map every action to themselves.
  const int terminal = w.grid.cell_state[w.grid.cell(4, 0)];
  for (int a = 0; a < w.num_actions; ++a)
    CHECK(w.intended_outcome(terminal, a) == terminal);
  CHECK(w.alternate_outcomes(terminal, 0).empty());
}

TEST_CASE("unavailable actions are rejected by the outcome accessors") {
  const World w = make_default(WorldKind::kChain);
  CHECK_THROWS_AS(w.intended_outcome(0, 5), atlas::ValidationError);
  CHECK_THROWS_AS(w.alternate_outcomes(0, 5), atlas::ValidationError);
}

TEST_CASE("rows sum to one within 1e-12 for 100 random trait draws") {
  const std::vector<WorldKind> kinds = {WorldKind::kBigSmall,   WorldKind::kCliff,
                                        WorldKind::kWall,       WorldKind::kChain,
                                        WorldKind::kRiverSwim,  WorldKind::kGamblersV1,
                                        WorldKind::kGamblersV2, WorldKind::kCafe};
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> gamma_dist(0.0, 0.999);
  std::uniform_real_distribution<double> p_dist(0.0, 1.0);
  for (int draw = 0; draw < 100; ++draw) {
    const World w = make_default(kinds[draw % kinds.size()]);
    const Traits traits{gamma_dist(rng), p_dist(rng)};
    const UserMdp mdp = atlas::build_user_mdp(w, traits);
    for (int s = 0; s < w.num_states; ++s) {
      for (int a = 0; a < w.num_actions; ++a) {
        if (!w.is_available(s, a)) continue;
        CHECK(std::abs(row_sum(mdp, s, a) - 1.0) <= 1e-12);
        for (int next = 0; next < w.num_states; ++next)
          CHECK(atlas::transition_probability(mdp, s, a, next) >= 0.0);
      }
    }
  }
}

TEST_CASE("the intended outcome receives exactly p (bitwise)") {
  const World w = make_default(WorldKind::kBigSmall);
  for (double p : {0.0, 0.123456, 0.5, 0.7, 0.999, 1.0}) {
    const UserMdp mdp = atlas::build_user_mdp(w, {0.8, p});
    for (int s = 0; s < w.num_states; ++s) {
      if (w.is_terminal(s)) continue;
      for (int a = 0; a < w.num_actions; ++a)
        CHECK(atlas::transition_probability(mdp, s, a, w.intended_outcome(s, a)) == p);
    }
  }
}

TEST_CASE("terminal rows self-loop with probability one") {
  const World w = make_default(WorldKind::kCliff);
  const UserMdp mdp = atlas::build_user_mdp(w, {0.5, 0.3});
  for (int s = 0; s < w.num_states; ++s) {
    if (!w.is_terminal(s)) continue;
    CHECK(mdp.is_terminal(s));
    for (int a = 0; a < w.num_actions; ++a) {
      if (!w.is_available(s, a)) continue;
      CHECK(atlas::transition_probability(mdp, s, a, s) == 1.0);
      CHECK(mdp.expected_reward[a][s] == 0.0);
    }
  }
}

TEST_CASE("gamblers-v1: finish succeeds with the held constant, not with p") {
  const World w = make_default(WorldKind::kGamblersV1);
  const int goal = w.params.length - 1;
  const double hold = 1.0 - w.params.p_f;  // finish success probability
  for (double p : {0.1, 0.6, 1.0}) {
    const UserMdp mdp = atlas::build_user_mdp(w, {0.9, p});
    // finish: fixed split between goal and dead end, independent of p
    CHECK(atlas::transition_probability(mdp, w.start, 1, goal) == hold);
    CHECK(atlas::transition_probability(mdp, w.start, 1, 0) ==
          doctest::Approx(w.params.p_f).epsilon(1e-15));
    // continue: generic confidence split
    CHECK(atlas::transition_probability(mdp, w.start, 0, w.start + 1) == p);
    CHECK(row_sum(mdp, w.start, 1) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gamblers-v2: continue succeeds with the held constant, finish binds to p") {
  const World w = make_default(WorldKind::kGamblersV2);
  const int goal = w.params.length - 1;
  for (double p : {0.1, 0.6, 1.0}) {
    const UserMdp mdp = atlas::build_user_mdp(w, {0.9, p});
    CHECK(atlas::transition_probability(mdp, w.start, 0, w.start + 1) == w.params.p_c);
    CHECK(atlas::transition_probability(mdp, w.start, 0, w.start - 1) ==
          doctest::Approx(1.0 - w.params.p_c).epsilon(1e-15));
    CHECK(atlas::transition_probability(mdp, w.start, 1, goal) == p);
    CHECK(atlas::transition_probability(mdp, w.start, 1, 0) ==
          doctest::Approx(1.0 - p).epsilon(1e-12));
    CHECK(row_sum(mdp, w.start, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("riverswim: downstream tows the user regardless of confidence") {
  const World w = make_default(WorldKind::kRiverSwim);
  const UserMdp mdp = atlas::build_user_mdp(w, {0.9, 0.3});
  for (int s = 1; s < w.params.length - 1; ++s)
    CHECK(atlas::transition_probability(mdp, s, 1, s - 1) == 1.0);
}

TEST_CASE("build_user_mdp is pure and deterministic") {
  const World w = make_default(WorldKind::kCafe);
  const UserMdp a = atlas::build_user_mdp(w, {0.77, 0.61});
  const UserMdp b = atlas::build_user_mdp(w, {0.77, 0.61});
  CHECK(a.transition == b.transition);
  CHECK(a.expected_reward == b.expected_reward);
}

TEST_CASE("expected rewards aggregate entry rewards over the row") {
  // Start of big-small, moving down: intended hit pays the step reward of
  // the cell below; alternates pay their own entry rewards.
  const World w = make_default(WorldKind::kBigSmall);
  const UserMdp mdp = atlas::build_user_mdp(w, {0.9, 0.7});
  const int down = 2;
  double want = 0.0;
  want += 0.7 * w.reward(w.start, down, w.intended_outcome(w.start, down));
  const auto& alt = w.alternate_outcomes(w.start, down);
  for (int next : alt)
    want += (1.0 - 0.7) / alt.size() * w.reward(w.start, down, next);
  CHECK(mdp.expected_reward[down][w.start] == doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("transition CSV lists every nonzero entry with its reward") {
  const World w = make_default(WorldKind::kChain);
  const UserMdp mdp = atlas::build_user_mdp(w, {0.9, 0.8});
  const std::string csv = atlas::transition_csv(w, mdp);
  CHECK(csv.rfind("state,action,next,probability,reward", 0) == 0);
  CHECK(csv.find("0.8") != std::string::npos);
}
