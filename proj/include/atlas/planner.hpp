// Exact solvers for a perceived MDP: value iteration, greedy policy
// extraction, linear-system policy evaluation, and a brute-force oracle.
#pragma once

#include <cstddef>
#include <vector>

#include "atlas/perception.hpp"

namespace atlas {

// Deterministic policy: action index for every state.
using Policy = std::vector<int>;

struct ValueIterationResult {
  std::vector<double> values;
  int iterations = 0;
  double residual = 0.0;  // max-norm change produced by the final sweep
  bool converged = false;
};

// One synchronous Bellman optimality sweep:
//   v_out[s] = max over available a of ER[a][s] + gamma * (T_a * v_in)[s].
// Returns the max-norm difference between v_out and v_in. `scratch` holds
// per-action Q vectors and is resized as needed; reusing it across calls
// avoids per-sweep allocation. Throws PipelineError on non-finite values.
double bellman_sweep(const UserMdp& mdp, const std::vector<double>& v_in,
                     std::vector<double>& v_out, std::vector<double>& scratch);

// Iterates bellman_sweep from V = 0 until the residual drops to `tol` or
// `max_iter` sweeps have run (converged flag reports which). Throws
// ValidationError on tol <= 0 or max_iter < 1.
ValueIterationResult value_iteration(const UserMdp& mdp, double tol = 1e-8,
                                     int max_iter = 100000);

// Greedy policy for the given values: argmax of Q(s,a), ties broken by the
// lowest available action index in the world's fixed action ordering.
Policy extract_policy(const UserMdp& mdp, const std::vector<double>& values);

// Exact V^pi via the linear Bellman system (I - gamma T_pi) V = ER_pi,
// solved by LU with iterative refinement to residual <= 1e-12.
// Throws ValidationError if the policy is malformed for this MDP.
std::vector<double> policy_evaluation(const UserMdp& mdp, const Policy& policy);

struct BruteForceResult {
  std::vector<double> values;     // value function of the winning policy
  Policy policy;                  // first lexicographic maximizer at start
  std::size_t num_policies = 0;   // policies enumerated
};

// Enumerates every deterministic policy (terminals pinned to action 0),
// evaluates each exactly, and returns the one maximizing the start-state
// value; ties go to the earliest policy in lexicographic order. Throws
// PipelineError if the enumeration would exceed `cap` policies.
BruteForceResult brute_force_optimal(const UserMdp& mdp, double cap = 1e6);

}  // namespace atlas
