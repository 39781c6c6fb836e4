#include "comdp/exact_dp.hpp"

#include <cmath>
#include <stdexcept>

namespace comdp {

namespace {

void require_infinite(const CoMdp& mdp, const char* who) {
  if (mdp.horizon().type != HorizonType::Infinite)
    throw std::invalid_argument(std::string(who) + " needs an infinite-horizon model");
}

void require_finite(const CoMdp& mdp, const char* who) {
  if (mdp.horizon().type != HorizonType::Finite)
    throw std::invalid_argument(std::string(who) + " needs a finite-horizon model");
}

// Decodes a joint-action rank into per-agent action ids at state x.
void decode_rank(const CoMdp& mdp, int x, long long rank, JointPolicy& mu) {
  for (int i = mdp.num_agents() - 1; i >= 0; --i) {
    long long k = static_cast<long long>(mdp.actions(x, i).size());
    mu(x, i) = mdp.actions(x, i)[static_cast<int>(rank % k)];
    rank /= k;
  }
}

// Joint minimization at one state; the first rank attaining the minimum wins,
// which is the lexicographically smallest joint action.
long long argmin_joint(const CoMdp& mdp, int x, const Vector& j, double discount,
                       double* value, OpCount* ops) {
  long long best_rank = 0;
  double best = std::numeric_limits<double>::infinity();
  long long count = mdp.joint_action_count(x);
  for (long long rank = 0; rank < count; ++rank) {
    double v = mdp.row(x, rank).expected(j, discount);
    if (ops) ++ops->expectations;
    if (v < best) { best = v; best_rank = rank; }
  }
  *value = best;
  return best_rank;
}

}  // namespace

Vector bellman_backup(const CoMdp& mdp, const Vector& j, OpCount* ops) {
  require_infinite(mdp, "bellman_backup");
  Vector out(mdp.num_states());
  for (int x = 0; x < mdp.num_states(); ++x) {
    double v;
    argmin_joint(mdp, x, j, mdp.horizon().discount, &v, ops);
    out[x] = v;
  }
  return out;
}

JointPolicy greedy_joint_policy(const CoMdp& mdp, const Vector& j, OpCount* ops) {
  require_infinite(mdp, "greedy_joint_policy");
  JointPolicy mu(mdp.num_states(), mdp.num_agents());
  for (int x = 0; x < mdp.num_states(); ++x) {
    double v;
    long long rank = argmin_joint(mdp, x, j, mdp.horizon().discount, &v, ops);
    decode_rank(mdp, x, rank, mu);
  }
  return mu;
}

Vector apply_policy_operator(const CoMdp& mdp, const JointPolicy& mu, const Vector& j) {
  require_infinite(mdp, "apply_policy_operator");
  Vector out(mdp.num_states());
  for (int x = 0; x < mdp.num_states(); ++x)
    out[x] = mdp.policy_row(x, mu).expected(j, mdp.horizon().discount);
  return out;
}

ValueFunction evaluate_policy_exact_ih(const CoMdp& mdp, const JointPolicy& mu) {
  require_infinite(mdp, "evaluate_policy_exact_ih");
  const int n = mdp.num_states();
  Matrix system = Matrix::Identity(n, n) -
                  mdp.horizon().discount * transition_matrix_under(mdp, mu);
  Vector g = stage_cost_under(mdp, mu);
  Vector j = system.partialPivLu().solve(g);
  double residual = (apply_policy_operator(mdp, mu, j) - j).lpNorm<Eigen::Infinity>();
  if (!(residual <= 1e-9))
    throw std::runtime_error("policy evaluation residual " + std::to_string(residual));
  return {j, ValueKind::Exact};
}

ValueIterationResult value_iteration(const CoMdp& mdp, double tol, int max_iterations) {
  require_infinite(mdp, "value_iteration");
  Vector j = Vector::Zero(mdp.num_states());
  for (int it = 1; it <= max_iterations; ++it) {
    Vector next = bellman_backup(mdp, j);
    if ((next - j).lpNorm<Eigen::Infinity>() <= tol)
      return {{next, ValueKind::Exact}, greedy_joint_policy(mdp, next), it};
    j = std::move(next);
  }
  throw std::runtime_error("value iteration did not converge");
}

PolicyIterationResult policy_iteration_joint(const CoMdp& mdp, const JointPolicy& mu0) {
  require_infinite(mdp, "policy_iteration_joint");
  JointPolicy mu = mu0;
  ValueFunction j = evaluate_policy_exact_ih(mdp, mu);
  // Exact evaluation makes values non-increasing; once the improvement drops
  // to rounding noise, equal-value policies can trade places forever, so the
  // value-based stop is the one that fires at the optimum.
  for (int it = 1;; ++it) {
    JointPolicy next = greedy_joint_policy(mdp, j.values);
    if (next == mu) return {mu, std::move(j), it};
    ValueFunction jn = evaluate_policy_exact_ih(mdp, next);
    double gain = (j.values - jn.values).maxCoeff();
    double noise = 1e-12 * (1.0 + j.values.lpNorm<Eigen::Infinity>());
    if (gain <= noise) return {mu, std::move(j), it};
    mu = std::move(next);
    j = std::move(jn);
    if (it > 100000) throw std::runtime_error("policy iteration did not terminate");
  }
}

FiniteHorizonDpResult finite_horizon_dp(const CoMdp& mdp) {
  require_finite(mdp, "finite_horizon_dp");
  const int n = mdp.num_states();
  const int stages = mdp.horizon().stages;
  FiniteHorizonDpResult res;
  res.stage_values.assign(stages + 1, Vector());
  res.stage_values[stages] = mdp.horizon().terminal_cost;
  res.policy.stages.assign(stages, JointPolicy(n, mdp.num_agents()));
  for (int k = stages - 1; k >= 0; --k) {
    Vector jk(n);
    for (int x = 0; x < n; ++x) {
      double v;
      long long rank = argmin_joint(mdp, x, res.stage_values[k + 1], 1.0, &v, nullptr);
      decode_rank(mdp, x, rank, res.policy.stages[k]);
      jk[x] = v;
    }
    res.stage_values[k] = std::move(jk);
  }
  return res;
}

std::vector<Vector> evaluate_policy_exact_fh(const CoMdp& mdp,
                                             const NonstationaryPolicy& pi) {
  require_finite(mdp, "evaluate_policy_exact_fh");
  const int stages = mdp.horizon().stages;
  if (static_cast<int>(pi.stages.size()) != stages)
    throw std::invalid_argument("policy stage count does not match the horizon");
  std::vector<Vector> j(stages + 1);
  j[stages] = mdp.horizon().terminal_cost;
  for (int k = stages - 1; k >= 0; --k) {
    j[k].resize(mdp.num_states());
    for (int x = 0; x < mdp.num_states(); ++x)
      j[k][x] = mdp.policy_row(x, pi.stages[k]).expected(j[k + 1], 1.0);
  }
  return j;
}

}  // namespace comdp
