#pragma once

#include <vector>

#include "comdp/mdp.hpp"
#include "comdp/types.hpp"

namespace comdp {

struct ValueIterationResult {
  ValueFunction j;
  JointPolicy policy;
  int iterations = 0;
};

struct PolicyIterationResult {
  JointPolicy policy;
  ValueFunction j;
  int iterations = 0;
};

struct FiniteHorizonDpResult {
  NonstationaryPolicy policy;
  std::vector<Vector> stage_values;  // index k = 0..N, entry N is the terminal cost
};

// One application of the optimal Bellman operator T (infinite horizon).
Vector bellman_backup(const CoMdp& mdp, const Vector& j, OpCount* ops = nullptr);

// Greedy joint policy for j, minimizing over the full joint action product.
// Ties go to the lexicographically smallest joint action.
JointPolicy greedy_joint_policy(const CoMdp& mdp, const Vector& j, OpCount* ops = nullptr);

// One application of T_mu (infinite horizon).
Vector apply_policy_operator(const CoMdp& mdp, const JointPolicy& mu, const Vector& j);

// Solves (I - alpha P_mu) J = g_mu directly; the residual ||T_mu J - J||_inf
// is rechecked and must come out below 1e-9.
ValueFunction evaluate_policy_exact_ih(const CoMdp& mdp, const JointPolicy& mu);

// Iterates T from zero until ||T J - J||_inf <= tol.
ValueIterationResult value_iteration(const CoMdp& mdp, double tol,
                                     int max_iterations = 1000000);

// Exact policy iteration over joint actions, stopping when the policy repeats.
PolicyIterationResult policy_iteration_joint(const CoMdp& mdp, const JointPolicy& mu0);

// Backward recursion from the terminal cost; undiscounted stage sums.
FiniteHorizonDpResult finite_horizon_dp(const CoMdp& mdp);

// Exact stage costs of a nonstationary policy, J_k for k = 0..N.
std::vector<Vector> evaluate_policy_exact_fh(const CoMdp& mdp,
                                             const NonstationaryPolicy& pi);

}  // namespace comdp
