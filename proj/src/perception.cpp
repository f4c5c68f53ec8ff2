// Builds the perceived MDP for a trait pair (gamma, p).

#include "atlas/perception.hpp"

#include <cstdio>
#include <sstream>

#include "atlas/errors.hpp"

namespace atlas {

namespace {

// Probability assigned to the intended outcome of (s, a). Usually this is the
// confidence trait, but the gamblers variants bind the trait to one named
// world constant and hold the other action's constant fixed: v1's "finish"
// succeeds with 1 - p_f regardless of confidence, and v2's "continue"
// advances with p_c regardless of confidence.
double intended_probability(const World& world, const Traits& traits, int a) {
  constexpr int kContinue = 0, kFinish = 1;
  if (world.kind == WorldKind::kGamblersV1 && a == kFinish) return 1.0 - world.params.p_f;
  if (world.kind == WorldKind::kGamblersV2 && a == kContinue) return world.params.p_c;
  return traits.p;
}

}  // namespace

void validate_traits(const Traits& traits) {
  if (!(traits.gamma >= 0.0 && traits.gamma < 1.0))
    throw ValidationError("traits: gamma must be in [0, 1)");
  if (!(traits.p >= 0.0 && traits.p <= 1.0))
    throw ValidationError("traits: p must be in [0, 1]");
}

UserMdp build_user_mdp(const World& world, const Traits& traits) {
  validate_traits(traits);

  UserMdp mdp;
  mdp.num_states = world.num_states;
  mdp.num_actions = world.num_actions;
  mdp.start = world.start;
  mdp.traits = traits;
  mdp.available = world.available;
  mdp.terminal = world.terminal;

  const std::size_t n = static_cast<std::size_t>(world.num_states);
  mdp.transition.assign(world.num_actions, std::vector<double>(n * n, 0.0));
  mdp.expected_reward.assign(world.num_actions, std::vector<double>(n, 0.0));

  for (int s = 0; s < world.num_states; ++s) {
    for (int a = 0; a < world.num_actions; ++a) {
      if (!world.is_available(s, a)) continue;
      std::vector<double>& t = mdp.transition[a];
      double& er = mdp.expected_reward[a][s];

      if (world.is_terminal(s)) {
        t[s * n + s] = 1.0;
        er = world.reward(s, a, s);
        continue;
      }

      const int io = world.intended_outcome(s, a);
      const std::vector<int>& alt = world.alternate_outcomes(s, a);
      // Deterministic actions (empty alternate set) put all mass on the
      // intended outcome, so the row still sums to one.
      const double p_io = alt.empty() ? 1.0 : intended_probability(world, traits, a);
      t[s * n + io] += p_io;
      er += p_io * world.reward(s, a, io);
      if (!alt.empty()) {
        const double p_alt = (1.0 - p_io) / static_cast<double>(alt.size());
        for (int next : alt) {
          t[s * n + next] += p_alt;
          er += p_alt * world.reward(s, a, next);
        }
      }
    }
  }
  return mdp;
}

double transition_probability(const UserMdp& mdp, int s, int a, int next) {
  if (s < 0 || s >= mdp.num_states || next < 0 || next >= mdp.num_states || a < 0 ||
      a >= mdp.num_actions)
    throw ValidationError("transition_probability: index out of range");
  return mdp.transition[a][static_cast<std::size_t>(s) * mdp.num_states + next];
}

std::string transition_csv(const World& world, const UserMdp& mdp) {
  std::ostringstream out;
  out << "state,action,next,probability,reward\n";
  char buf[64];
  const std::size_t n = static_cast<std::size_t>(mdp.num_states);
  for (int s = 0; s < mdp.num_states; ++s) {
    for (int a = 0; a < mdp.num_actions; ++a) {
      if (!mdp.is_available(s, a)) continue;
      for (int next = 0; next < mdp.num_states; ++next) {
        const double prob = mdp.transition[a][s * n + next];
        if (prob == 0.0) continue;
        out << s << ',' << world.action_names[a] << ',' << next << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", prob);
        out << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", world.reward(s, a, next));
        out << buf << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace atlas
