// MDP solvers built on the dense linear-algebra kernels.

#include "atlas/planner.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "atlas/errors.hpp"
#include "atlas/kernels.hpp"

namespace atlas {

double bellman_sweep(const UserMdp& mdp, const std::vector<double>& v_in,
                     std::vector<double>& v_out, std::vector<double>& scratch) {
  const std::size_t n = static_cast<std::size_t>(mdp.num_states);
  const int num_actions = mdp.num_actions;
  const double gamma = mdp.traits.gamma;
  v_out.resize(n);
  scratch.resize(n * num_actions);

  for (int a = 0; a < num_actions; ++a)
    kernels::gemv(mdp.transition[a].data(), v_in.data(), scratch.data() + a * n, n, n);

  for (std::size_t s = 0; s < n; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int a = 0; a < num_actions; ++a) {
      if (!mdp.is_available(static_cast<int>(s), a)) continue;
      const double q = mdp.expected_reward[a][s] + gamma * scratch[a * n + s];
      if (!any || q > best) best = q;
      any = true;
    }
    v_out[s] = any ? best : v_in[s];
    if (!std::isfinite(v_out[s]))
      throw PipelineError("bellman sweep produced a non-finite value (check rewards)");
  }
  return kernels::max_abs_diff(v_out.data(), v_in.data(), n);
}

ValueIterationResult value_iteration(const UserMdp& mdp, double tol, int max_iter) {
  if (!(tol > 0.0)) throw ValidationError("value_iteration: tol must be positive");
  if (max_iter < 1) throw ValidationError("value_iteration: max_iter must be >= 1");
  // A non-finite reward on a dominated action would otherwise vanish into
  // the max; reject it up front instead.
  for (int a = 0; a < mdp.num_actions; ++a)
    for (double r : mdp.expected_reward[static_cast<std::size_t>(a)])
      if (!std::isfinite(r))
        throw PipelineError("value_iteration: non-finite expected reward");

  ValueIterationResult result;
  result.values.assign(static_cast<std::size_t>(mdp.num_states), 0.0);
  std::vector<double> next(result.values.size());
  std::vector<double> scratch;

  for (int it = 0; it < max_iter; ++it) {
    result.residual = bellman_sweep(mdp, result.values, next, scratch);
    result.values.swap(next);
    result.iterations = it + 1;
    if (result.residual <= tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

Policy extract_policy(const UserMdp& mdp, const std::vector<double>& values) {
  const std::size_t n = static_cast<std::size_t>(mdp.num_states);
  if (values.size() != n)
    throw ValidationError("extract_policy: value vector size does not match the MDP");
  const double gamma = mdp.traits.gamma;
  std::vector<double> scratch(n * mdp.num_actions);
  for (int a = 0; a < mdp.num_actions; ++a)
    kernels::gemv(mdp.transition[a].data(), values.data(), scratch.data() + a * n, n, n);

  Policy policy(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    int best_a = -1;
    double best_q = 0.0;
    for (int a = 0; a < mdp.num_actions; ++a) {
      if (!mdp.is_available(static_cast<int>(s), a)) continue;
      const double q = mdp.expected_reward[a][s] + gamma * scratch[a * n + s];
      if (best_a < 0 || q > best_q) {
        best_a = a;
        best_q = q;
      }
    }
    policy[s] = best_a < 0 ? 0 : best_a;
  }
  return policy;
}

std::vector<double> policy_evaluation(const UserMdp& mdp, const Policy& policy) {
  const int n = mdp.num_states;
  if (static_cast<int>(policy.size()) != n)
    throw ValidationError("policy_evaluation: policy size does not match the MDP");
  for (int s = 0; s < n; ++s) {
    if (policy[s] < 0 || policy[s] >= mdp.num_actions || !mdp.is_available(s, policy[s]))
      throw ValidationError("policy_evaluation: policy picks an unavailable action at state " +
                            std::to_string(s));
  }

  const double gamma = mdp.traits.gamma;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b(n);
  for (int s = 0; s < n; ++s) {
    const std::vector<double>& row = mdp.transition[policy[s]];
    for (int t = 0; t < n; ++t)
      A(s, t) -= gamma * row[static_cast<std::size_t>(s) * n + t];
    b(s) = mdp.expected_reward[policy[s]][s];
  }

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd x = lu.solve(b);
  // One or two rounds of iterative refinement push the residual to the
  // 1e-12 contract even for gamma near 1.
  for (int round = 0; round < 5; ++round) {
    const Eigen::VectorXd r = b - A * x;
    if (r.lpNorm<Eigen::Infinity>() <= 1e-12) break;
    x += lu.solve(r);
  }
  return std::vector<double>(x.data(), x.data() + n);
}

BruteForceResult brute_force_optimal(const UserMdp& mdp, double cap) {
  const int n = mdp.num_states;
  // Terminals are pinned to action 0, so enumeration runs over the
  // non-terminal states only.
  std::vector<int> free_states;
  std::vector<std::vector<int>> choices;
  double count = 1.0;
  for (int s = 0; s < n; ++s) {
    if (mdp.is_terminal(s)) continue;
    std::vector<int> avail;
    for (int a = 0; a < mdp.num_actions; ++a)
      if (mdp.is_available(s, a)) avail.push_back(a);
    if (avail.empty())
      throw ValidationError("brute_force_optimal: state " + std::to_string(s) +
                            " has no available action");
    free_states.push_back(s);
    choices.push_back(std::move(avail));
    count *= static_cast<double>(choices.back().size());
    if (count > cap)
      throw PipelineError("brute_force_optimal: policy count exceeds cap (" +
                          std::to_string(static_cast<long long>(cap)) + ")");
  }

  BruteForceResult best;
  best.num_policies = static_cast<std::size_t>(count);

  const std::size_t k = free_states.size();
  std::vector<std::size_t> digit(k, 0);
  Policy policy(n, 0);
  bool first = true;
  while (true) {
    for (std::size_t i = 0; i < k; ++i) policy[free_states[i]] = choices[i][digit[i]];
    std::vector<double> values = policy_evaluation(mdp, policy);
    if (first || values[mdp.start] > best.values[mdp.start]) {
      best.values = values;
      best.policy = policy;
      first = false;
    }
    // Advance the odometer in lexicographic order (last digit fastest).
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++digit[i] < choices[i].size()) break;
      digit[i] = 0;
      if (i == 0) return best;
    }
    if (k == 0) return best;  // single policy: all terminals
  }
}

}  // namespace atlas
