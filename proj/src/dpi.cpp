#include "comdp/dpi.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "comdp/envs.hpp"
#include "comdp/exact_dp.hpp"
#include "comdp/rng.hpp"

namespace comdp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// One-step cost of a stationary policy against arbitrary next values.
Vector one_step_under(const CoMdp& mdp, const JointPolicy& mu, const Vector& j_next,
                      double discount) {
  Vector out(mdp.num_states());
  for (int x = 0; x < mdp.num_states(); ++x)
    out[x] = mdp.policy_row(x, mu).expected(j_next, discount);
  return out;
}

std::vector<int> count_changes(const JointPolicy& before, const JointPolicy& after) {
  std::vector<int> out(before.num_agents(), 0);
  for (int i = 0; i < before.num_agents(); ++i)
    for (int x = 0; x < before.num_states(); ++x)
      if (before(x, i) != after(x, i)) ++out[i];
  return out;
}

void require_valid_policy(const CoMdp& mdp, const JointPolicy& mu) {
  std::vector<std::string> bad = validate_policy(mdp, mu);
  if (!bad.empty()) throw std::invalid_argument(bad.front());
}

double max_abs_gap(const Vector& a, const Vector& b) {
  return (a - b).lpNorm<Eigen::Infinity>();
}

// Values handed to the sweep under bug injection: pushed up on every other
// state, which the honestly-computed beta does not account for.
// Adversarial stand-in for a broken evaluation: inverted preferences plus an
// asymmetric push, so the sweep that consumes it picks actively bad actions.
Vector corrupt_values(const Vector& j) {
  double amp = 1.0 + j.lpNorm<Eigen::Infinity>();
  Vector out = -j;
  for (int x = 0; x < out.size(); x += 2) out[x] += amp;
  return out;
}

// The self-test needs a tight allowance, so the injected run evaluates with
// the identity basis: beta stays at solver noise and any real damage from the
// corrupted sweep breaks the bound.
FeatureMatrix identity_features(int n) {
  FeatureMatrix f;
  f.kind = BasisKind::Identity;
  f.phi = Matrix::Identity(n, n);
  return f;
}

}  // namespace

std::vector<int> dpi_agent_step(const CoMdp& mdp, int agent,
                                const JointPolicy& updated_prefix,
                                const JointPolicy& base_suffix, const Vector& j,
                                double discount, OpCount* ops) {
  const int m = mdp.num_agents();
  if (agent < 0 || agent >= m) throw std::invalid_argument("agent index out of range");
  if (j.size() != mdp.num_states())
    throw std::invalid_argument("value vector must have one entry per state");
  std::vector<int> out(mdp.num_states());
  std::vector<int> pos(m);
  for (int x = 0; x < mdp.num_states(); ++x) {
    for (int i = 0; i < m; ++i) {
      if (i == agent) continue;
      int id = i < agent ? updated_prefix(x, i) : base_suffix(x, i);
      pos[i] = mdp.position_of(x, i, id);
      if (pos[i] < 0)
        throw std::invalid_argument("policy picks an unavailable action at state " +
                                    std::to_string(x));
    }
    const int k = static_cast<int>(mdp.actions(x, agent).size());
    int best_pos = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < k; ++a) {
      pos[agent] = a;
      double v = mdp.row(x, mdp.rank_of_positions(x, pos.data())).expected(j, discount);
      if (ops) ++ops->expectations;
      if (v < best) { best = v; best_pos = a; }
    }
    out[x] = mdp.actions(x, agent)[best_pos];
  }
  return out;
}

JointPolicy dpi_sweep(const CoMdp& mdp, const JointPolicy& base, const Vector& j,
                      double discount, OpCount* ops) {
  require_valid_policy(mdp, base);
  JointPolicy work = base;
  for (int agent = 0; agent < mdp.num_agents(); ++agent) {
    // Components below `agent` in work are already updated, the rest are base.
    std::vector<int> column = dpi_agent_step(mdp, agent, work, work, j, discount, ops);
    for (int x = 0; x < mdp.num_states(); ++x) work(x, agent) = column[x];
  }
  return work;
}

IhSolveResult solve_ih_dpi_alp(const CoMdp& mdp, const JointPolicy& mu0,
                               const FeatureMatrix& f, const StateWeights& w,
                               const IhSolveOptions& opts) {
  if (mdp.horizon().type != HorizonType::Infinite)
    throw std::invalid_argument("solve_ih_dpi_alp needs an infinite-horizon model");
  require_valid_policy(mdp, mu0);
  const double alpha = mdp.horizon().discount;
  AlpOptions aopts{opts.lp_dump_dir};

  IhSolveResult res;
  AlpResult cur = alp_evaluate_ih(mdp, mu0, f, w, &aopts);
  res.lp_pivots += cur.lp_pivots;

  StageStart start;
  start.j_alp = cur.j_alp.values;
  start.lp_pivots = cur.lp_pivots;
  if (opts.verify) {
    Vector exact = evaluate_policy_exact_ih(mdp, mu0).values;
    start.beta = max_abs_gap(exact, start.j_alp);
    start.j_exact = std::move(exact);
  }
  res.trace.starts.push_back(std::move(start));

  JointPolicy mu = mu0;
  res.stop_reason = "iteration-cap";
  for (int t = 1; t <= opts.max_iterations; ++t) {
    auto t0 = Clock::now();
    OpCount ops;
    JointPolicy next = dpi_sweep(mdp, mu, cur.j_alp.values, alpha, &ops);
    AlpResult next_alp = alp_evaluate_ih(mdp, next, f, w, &aopts);
    res.lp_pivots += next_alp.lp_pivots;
    ++res.sweeps;

    DpiIterationRecord rec;
    rec.iteration = t;
    rec.policy = next;
    rec.j_alp = next_alp.j_alp.values;
    rec.changed_states = count_changes(mu, next);
    rec.lp_pivots = next_alp.lp_pivots;
    rec.sweep_expectations = ops.expectations;
    if (opts.verify) {
      Vector exact = evaluate_policy_exact_ih(mdp, next).values;
      rec.beta = max_abs_gap(exact, rec.j_alp);
      rec.j_exact = std::move(exact);
    }
    rec.wall_ms = ms_since(t0);

    bool repeat = next == mu;
    double delta = max_abs_gap(next_alp.j_alp.values, cur.j_alp.values);
    mu = std::move(next);
    cur = std::move(next_alp);
    res.trace.records.push_back(std::move(rec));
    if (repeat) { res.stop_reason = "policy-repeat"; break; }
    if (delta < opts.stop_eps) { res.stop_reason = "value-converged"; break; }
  }
  res.policy = std::move(mu);
  res.j_alp = cur.j_alp.values;
  return res;
}

FhSolveResult solve_fh_dpi_alp(const CoMdp& mdp, const NonstationaryPolicy& pi0,
                               const FeatureMatrix& f, const StateWeights& w,
                               const FhSolveOptions& opts) {
  if (mdp.horizon().type != HorizonType::Finite)
    throw std::invalid_argument("solve_fh_dpi_alp needs a finite-horizon model");
  {
    std::vector<std::string> bad = validate_policy(mdp, pi0);
    if (!bad.empty()) throw std::invalid_argument(bad.front());
  }
  const int stages = mdp.horizon().stages;
  AlpOptions aopts{opts.lp_dump_dir};

  FhSolveResult res;
  res.policy = pi0;
  res.stage_values.assign(stages + 1, Vector());
  res.stage_values[stages] = mdp.horizon().terminal_cost;
  res.iterations_per_stage.assign(stages, 0);

  // Exact values of the already-finalized suffix, kept only in verify mode.
  std::vector<Vector> exact_values;
  if (opts.verify) {
    exact_values.assign(stages + 1, Vector());
    exact_values[stages] = mdp.horizon().terminal_cost;
  }

  for (int k = stages - 1; k >= 0; --k) {
    const Vector& j_next = res.stage_values[k + 1];
    AlpResult cur = alp_evaluate_fh_stage(mdp, k, res.policy.stages[k], j_next, f, w, &aopts);
    res.lp_pivots += cur.lp_pivots;

    StageStart start;
    start.stage = k;
    start.j_alp = cur.j_alp.values;
    start.lp_pivots = cur.lp_pivots;
    if (opts.verify) {
      Vector exact = one_step_under(mdp, res.policy.stages[k], exact_values[k + 1], 1.0);
      start.beta = max_abs_gap(exact, start.j_alp);
      start.j_exact = std::move(exact);
    }
    res.trace.starts.push_back(std::move(start));

    for (int it = 1; it <= opts.max_iters_per_stage; ++it) {
      auto t0 = Clock::now();
      OpCount ops;
      JointPolicy tilde = dpi_sweep(mdp, res.policy.stages[k], j_next, 1.0, &ops);
      res.iterations_per_stage[k] = it;

      DpiIterationRecord rec;
      rec.stage = k;
      rec.iteration = it;
      rec.policy = tilde;
      rec.changed_states = count_changes(res.policy.stages[k], tilde);
      rec.sweep_expectations = ops.expectations;

      if (tilde == res.policy.stages[k]) {
        // Re-evaluating an unchanged policy would reproduce cur exactly.
        rec.j_alp = cur.j_alp.values;
        if (opts.verify) {
          Vector exact = one_step_under(mdp, tilde, exact_values[k + 1], 1.0);
          rec.beta = max_abs_gap(exact, rec.j_alp);
          rec.j_exact = std::move(exact);
        }
        rec.wall_ms = ms_since(t0);
        res.trace.records.push_back(std::move(rec));
        break;
      }

      AlpResult next = alp_evaluate_fh_stage(mdp, k, tilde, j_next, f, w, &aopts);
      res.lp_pivots += next.lp_pivots;
      rec.j_alp = next.j_alp.values;
      rec.lp_pivots = next.lp_pivots;
      if (opts.verify) {
        Vector exact = one_step_under(mdp, tilde, exact_values[k + 1], 1.0);
        rec.beta = max_abs_gap(exact, rec.j_alp);
        rec.j_exact = std::move(exact);
      }
      rec.wall_ms = ms_since(t0);
      res.trace.records.push_back(std::move(rec));

      bool improved =
          ((cur.j_alp.values - next.j_alp.values).array() > opts.stop_eps).any();
      res.policy.stages[k] = std::move(tilde);
      cur = std::move(next);
      if (!improved) break;
    }
    res.stage_values[k] = cur.j_alp.values;
    if (opts.verify)
      exact_values[k] = one_step_under(mdp, res.policy.stages[k], exact_values[k + 1], 1.0);
  }
  return res;
}

BoundCheck verify_improvement_bound_ih(const CoMdp& mdp, const JointPolicy& mu,
                                       const JointPolicy& mu_next, const Vector& j_alp) {
  if (mdp.horizon().type != HorizonType::Infinite)
    throw std::invalid_argument("verify_improvement_bound_ih needs a discounted model");
  Vector j_mu = evaluate_policy_exact_ih(mdp, mu).values;
  Vector j_next = evaluate_policy_exact_ih(mdp, mu_next).values;
  BoundCheck out;
  out.beta = max_abs_gap(j_mu, j_alp);
  double allowance = out.beta / (1.0 - mdp.horizon().discount);
  out.worst_slack = std::numeric_limits<double>::infinity();
  for (int x = 0; x < mdp.num_states(); ++x) {
    double slack = j_mu[x] + allowance - j_next[x];
    if (slack < out.worst_slack) {
      out.worst_slack = slack;
      out.worst_state = x;
    }
  }
  out.holds = out.worst_slack >= -1e-7;
  return out;
}

BoundCheck verify_improvement_bound_fh(const CoMdp& mdp, const NonstationaryPolicy& pi,
                                       const NonstationaryPolicy& pi_tilde,
                                       const std::vector<Vector>& alp_stage_values) {
  if (mdp.horizon().type != HorizonType::Finite)
    throw std::invalid_argument("verify_improvement_bound_fh needs a finite-horizon model");
  const int stages = mdp.horizon().stages;
  if (static_cast<int>(alp_stage_values.size()) != stages + 1)
    throw std::invalid_argument("need approximate values for every stage");
  std::vector<Vector> j_pi = evaluate_policy_exact_fh(mdp, pi);
  std::vector<Vector> j_tilde = evaluate_policy_exact_fh(mdp, pi_tilde);

  BoundCheck out;
  for (int k = 0; k <= stages; ++k)
    out.beta = std::max(out.beta, max_abs_gap(j_pi[k], alp_stage_values[k]));
  out.worst_slack = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= stages; ++k) {
    double allowance = (stages - k) * out.beta;
    for (int x = 0; x < mdp.num_states(); ++x) {
      double slack = j_pi[k][x] + allowance - j_tilde[k][x];
      if (slack < out.worst_slack) {
        out.worst_slack = slack;
        out.worst_state = x;
        out.worst_stage = k;
      }
    }
  }
  out.holds = out.worst_slack >= -1e-7;
  return out;
}

namespace {

// Random basis: ones column plus standard-normal projections, redrawn in the
// unlikely event of dependent columns.
FeatureMatrix random_features(Rng& rng, int n, int d) {
  FeatureMatrix f;
  f.kind = BasisKind::Aggregation;  // closest tag; the matrix is free-form
  for (int attempt = 0; attempt < 100; ++attempt) {
    f.phi = Matrix::Ones(n, d);
    for (int x = 0; x < n; ++x)
      for (int c = 1; c < d; ++c) f.phi(x, c) = rng.normal();
    if (validate_features(f, n).empty()) return f;
  }
  throw std::runtime_error("could not draw an independent feature matrix");
}

JointPolicy random_policy(Rng& rng, const CoMdp& mdp) {
  JointPolicy mu(mdp.num_states(), mdp.num_agents());
  for (int x = 0; x < mdp.num_states(); ++x)
    for (int i = 0; i < mdp.num_agents(); ++i) {
      const std::vector<int>& set = mdp.actions(x, i);
      mu(x, i) = set[rng.uniform_int(0, static_cast<int>(set.size()) - 1)];
    }
  return mu;
}

}  // namespace

BoundSuiteInstance make_bound_instance_ih(int seed) {
  Rng rng(0x1347c0de5eedULL + 1000003ULL * static_cast<unsigned long long>(seed));
  RandomModelSpec spec;
  spec.seed = rng.bits();
  spec.n = rng.uniform_int(2, 10);
  spec.m = rng.uniform_int(2, 3);
  spec.actions_per_agent = rng.uniform_int(2, 3);
  spec.branching = std::min(spec.n, 3);
  spec.cost_lo = seed % 2 == 0 ? 0.0 : -1.0;
  spec.cost_hi = 1.0;
  spec.mode = HorizonType::Infinite;
  spec.alpha = seed % 2 == 0 ? 0.5 : 0.9;
  CoMdp model = build_random_comdp(spec);
  int d = rng.uniform_int(1, spec.n - 1);
  FeatureMatrix f = random_features(rng, spec.n, d);
  StateWeights w = StateWeights::uniform(spec.n);
  JointPolicy mu = random_policy(rng, model);
  return {std::move(model), std::move(f), std::move(w), std::move(mu), {}};
}

BoundSuiteInstance make_bound_instance_fh(int seed) {
  Rng rng(0x2f11e5b0adULL + 2000003ULL * static_cast<unsigned long long>(seed));
  RandomModelSpec spec;
  spec.seed = rng.bits();
  spec.n = rng.uniform_int(2, 10);
  spec.m = 2;
  spec.actions_per_agent = rng.uniform_int(2, 3);
  spec.branching = std::min(spec.n, 3);
  spec.cost_lo = seed % 2 == 0 ? 0.0 : -1.0;
  spec.cost_hi = 1.0;
  spec.mode = HorizonType::Finite;
  spec.stages = rng.uniform_int(1, 5);
  CoMdp model = build_random_comdp(spec);
  int d = rng.uniform_int(1, spec.n - 1);
  FeatureMatrix f = random_features(rng, spec.n, d);
  StateWeights w = StateWeights::uniform(spec.n);
  NonstationaryPolicy pi;
  for (int k = 0; k < spec.stages; ++k) pi.stages.push_back(random_policy(rng, model));
  return {std::move(model), std::move(f), std::move(w), {}, std::move(pi)};
}

BoundSuiteResult run_bound_suite_ih(const BoundSuiteOptions& opts) {
  BoundSuiteResult res;
  res.worst_slack = std::numeric_limits<double>::infinity();
  for (int seed = 0; seed < opts.seeds; ++seed) {
    BoundSuiteInstance inst = make_bound_instance_ih(seed);
    if (opts.inject_bug) inst.features = identity_features(inst.model.num_states());
    AlpResult alp = alp_evaluate_ih(inst.model, inst.mu, inst.features, inst.weights);
    Vector used = opts.inject_bug ? corrupt_values(alp.j_alp.values) : alp.j_alp.values;
    JointPolicy mu_next =
        dpi_sweep(inst.model, inst.mu, used, inst.model.horizon().discount);
    BoundCheck check =
        verify_improvement_bound_ih(inst.model, inst.mu, mu_next, alp.j_alp.values);
    res.outcomes.push_back({seed, check.holds, check.worst_slack, check.beta,
                            inst.model.num_states(), inst.features.dim()});
    res.all_hold = res.all_hold && check.holds;
    res.max_beta = std::max(res.max_beta, check.beta);
    if (check.worst_slack < res.worst_slack) {
      res.worst_slack = check.worst_slack;
      res.worst_seed = seed;
    }
  }
  return res;
}

BoundSuiteResult run_bound_suite_fh(const BoundSuiteOptions& opts) {
  BoundSuiteResult res;
  res.worst_slack = std::numeric_limits<double>::infinity();
  for (int seed = 0; seed < opts.seeds; ++seed) {
    BoundSuiteInstance inst = make_bound_instance_fh(seed);
    if (opts.inject_bug) inst.features = identity_features(inst.model.num_states());
    const int stages = inst.model.horizon().stages;
    // Approximate chain of the base policy, evaluated stage by stage.
    std::vector<Vector> values(stages + 1);
    values[stages] = inst.model.horizon().terminal_cost;
    for (int k = stages - 1; k >= 0; --k)
      values[k] = alp_evaluate_fh_stage(inst.model, k, inst.pi.stages[k], values[k + 1],
                                        inst.features, inst.weights)
                      .j_alp.values;
    NonstationaryPolicy tilde;
    tilde.stages.resize(stages);
    for (int k = 0; k < stages; ++k) {
      Vector used = opts.inject_bug ? corrupt_values(values[k + 1]) : values[k + 1];
      tilde.stages[k] = dpi_sweep(inst.model, inst.pi.stages[k], used, 1.0);
    }
    BoundCheck check = verify_improvement_bound_fh(inst.model, inst.pi, tilde, values);
    res.outcomes.push_back({seed, check.holds, check.worst_slack, check.beta,
                            inst.model.num_states(), inst.features.dim()});
    res.all_hold = res.all_hold && check.holds;
    res.max_beta = std::max(res.max_beta, check.beta);
    if (check.worst_slack < res.worst_slack) {
      res.worst_slack = check.worst_slack;
      res.worst_seed = seed;
    }
  }
  return res;
}

}  // namespace comdp
