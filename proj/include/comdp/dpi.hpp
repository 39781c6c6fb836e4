#pragma once

#include <optional>
#include <string>
#include <vector>

#include "comdp/alp.hpp"
#include "comdp/mdp.hpp"
#include "comdp/types.hpp"

namespace comdp {

// One-at-a-time policy improvement for a single agent: agents before `agent`
// play their already-updated actions, agents after it keep the base policy,
// and the agent minimizes the one-step expectation against j. Exactly
// |U^agent(x)| expectations per state; ties go to the smallest action index.
// Returns the agent's new action id per state.
std::vector<int> dpi_agent_step(const CoMdp& mdp, int agent,
                                const JointPolicy& updated_prefix,
                                const JointPolicy& base_suffix, const Vector& j,
                                double discount, OpCount* ops = nullptr);

// Full sweep over agents 0..m-1 in order, each seeing the earlier agents'
// updates. Costs sum_x sum_i |U^i(x)| expectations, against the product
// sum_x prod_i |U^i(x)| a joint minimization would need.
JointPolicy dpi_sweep(const CoMdp& mdp, const JointPolicy& base, const Vector& j,
                      double discount, OpCount* ops = nullptr);

// Evaluation of the policy a loop starts from, before the first sweep.
struct StageStart {
  int stage = -1;  // -1 on discounted models
  Vector j_alp;
  std::optional<Vector> j_exact;  // verify mode only
  std::optional<double> beta;     // max |j_exact - j_alp|
  long long lp_pivots = 0;
};

// One sweep plus re-evaluation. For finite-horizon runs, `policy` and the
// values are the stage-k slices; `iteration` counts sweeps within the loop.
struct DpiIterationRecord {
  int stage = -1;
  int iteration = 0;
  JointPolicy policy;
  Vector j_alp;
  std::optional<Vector> j_exact;
  std::optional<double> beta;
  std::vector<int> changed_states;  // per agent, vs. the pre-sweep policy
  double wall_ms = 0.0;
  long long lp_pivots = 0;
  long long sweep_expectations = 0;
};

struct DpiTrace {
  std::vector<StageStart> starts;  // one entry (infinite) or one per stage (finite)
  std::vector<DpiIterationRecord> records;
};

struct IhSolveOptions {
  int max_iterations = 100;
  double stop_eps = 1e-9;  // on max |change| of the approximate values
  bool verify = false;     // adds exact evaluations and beta to the trace
  std::string lp_dump_dir;
};

struct IhSolveResult {
  JointPolicy policy;  // after the last sweep
  Vector j_alp;        // its approximate evaluation
  DpiTrace trace;
  int sweeps = 0;
  long long lp_pivots = 0;
  std::string stop_reason;  // "policy-repeat" | "value-converged" | "iteration-cap"
};

// Alternates approximate policy evaluation with one decentralized sweep until
// the policy repeats, the values stop moving, or the iteration cap is hit.
// With approximate values the last policy need not be the best one seen; the
// trace keeps every iterate so callers can pick.
IhSolveResult solve_ih_dpi_alp(const CoMdp& mdp, const JointPolicy& mu0,
                               const FeatureMatrix& f, const StateWeights& w,
                               const IhSolveOptions& opts = {});

struct FhSolveOptions {
  int max_iters_per_stage = 50;
  double stop_eps = 1e-9;  // improvement threshold per state
  bool verify = false;
  std::string lp_dump_dir;
};

struct FhSolveResult {
  NonstationaryPolicy policy;
  std::vector<Vector> stage_values;  // approximate J_k, k = 0..N
  std::vector<int> iterations_per_stage;
  DpiTrace trace;
  long long lp_pivots = 0;
};

// Backward over stages; at each stage, sweep-and-re-evaluate (undiscounted,
// against the next stage's approximate values) until no state improves by
// more than stop_eps, the stage policy repeats, or the cap is hit.
FhSolveResult solve_fh_dpi_alp(const CoMdp& mdp, const NonstationaryPolicy& pi0,
                               const FeatureMatrix& f, const StateWeights& w,
                               const FhSolveOptions& opts = {});

struct BoundCheck {
  bool holds = true;
  double worst_slack = 0.0;  // min over checks of (allowed - actual); >= -1e-7 passes
  int worst_state = -1;
  int worst_stage = -1;  // -1 on discounted models
  double beta = 0.0;
};

// One-round improvement bound, discounted case: with beta the largest gap
// between the exact cost of mu and the approximate values the sweep used,
// the swept policy can lose at most beta/(1-alpha) at any state.
BoundCheck verify_improvement_bound_ih(const CoMdp& mdp, const JointPolicy& mu,
                                       const JointPolicy& mu_next, const Vector& j_alp);

// Finite-horizon analogue: pi_tilde comes from sweeping each stage of pi
// against pi's stage-(k+1) approximate values; with beta the largest
// approximation gap across stages, stage k can lose at most (N-k)*beta.
BoundCheck verify_improvement_bound_fh(const CoMdp& mdp, const NonstationaryPolicy& pi,
                                       const NonstationaryPolicy& pi_tilde,
                                       const std::vector<Vector>& alp_stage_values);

// Randomized bound suites backing the verify-bounds command. Each seed builds
// a small random model, a random basis (ones column plus random projections,
// d < n), and a random base policy, then checks the improvement bound. The
// inject_bug flag feeds the sweep deliberately corrupted values while
// reporting beta from the honest ones, so violations must be detected.
struct BoundSuiteOptions {
  int seeds = 100;
  bool inject_bug = false;
};

struct SeedOutcome {
  int seed = 0;
  bool holds = true;
  double worst_slack = 0.0;
  double beta = 0.0;
  int n = 0;
  int d = 0;
};

struct BoundSuiteResult {
  bool all_hold = true;
  std::vector<SeedOutcome> outcomes;
  double worst_slack = 0.0;
  int worst_seed = -1;
  double max_beta = 0.0;
};

BoundSuiteResult run_bound_suite_ih(const BoundSuiteOptions& opts);
BoundSuiteResult run_bound_suite_fh(const BoundSuiteOptions& opts);

// The deterministic instance behind one suite seed, exposed so a failing seed
// can be dumped and replayed.
struct BoundSuiteInstance {
  CoMdp model;
  FeatureMatrix features;
  StateWeights weights;
  JointPolicy mu;          // infinite-horizon suite
  NonstationaryPolicy pi;  // finite-horizon suite
};

BoundSuiteInstance make_bound_instance_ih(int seed);
BoundSuiteInstance make_bound_instance_fh(int seed);

}  // namespace comdp
