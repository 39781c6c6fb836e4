#pragma once

#include <string>
#include <vector>

#include "comdp/lp.hpp"
#include "comdp/mdp.hpp"
#include "comdp/types.hpp"

namespace comdp {

enum class BasisKind { Identity, Aggregation, GridDistance, Polynomial };

// n-by-d feature matrix. Apart from the identity basis, the first column is
// all ones (it keeps the evaluation LPs feasible) and columns must be
// linearly independent.
struct FeatureMatrix {
  Matrix phi;
  BasisKind kind = BasisKind::Identity;

  int dim() const { return static_cast<int>(phi.cols()); }
};

// Relevance weights over states: strictly positive, summing to one.
struct StateWeights {
  Vector c;

  static StateWeights uniform(int n);
};

// Parsed form of "identity" | "aggregation:k" | "grid-distance" | "poly:degree".
struct BasisSpec {
  BasisKind kind = BasisKind::Identity;
  int param = 0;  // cell count or degree

  static BasisSpec parse(const std::string& text);
  std::string str() const;
};

// Violations of the feature-matrix contract (shape, ones column, column rank).
std::vector<std::string> validate_features(const FeatureMatrix& f, int n);

// Builds the requested basis for the model. Grid-distance needs the generator
// metadata (constant, each spider's distance to its nearest fly, collision
// flag); aggregation splits states into near-equal contiguous cells;
// polynomial uses monomials of the normalized state index. Throws
// std::invalid_argument when the request does not fit the model.
FeatureMatrix build_features(const BasisSpec& spec, const CoMdp& mdp);

struct AlpResult {
  Vector r;             // basis weights
  ValueFunction j_alp;  // phi * r, tagged Approx
  LpStatus lp_status = LpStatus::Optimal;
  int lp_pivots = 0;
};

struct AlpOptions {
  std::string lp_dump_dir;  // when set, each assembled LP is dumped there
};

// Approximate evaluation of a stationary policy on a discounted model:
// maximize c.(phi r) subject to phi r <= g_mu + alpha P_mu phi r pointwise.
// The optimum is a pointwise lower bound on the exact policy cost. A
// non-optimal LP status is an error and throws.
AlpResult alp_evaluate_ih(const CoMdp& mdp, const JointPolicy& mu,
                          const FeatureMatrix& f, const StateWeights& w,
                          const AlpOptions* opts = nullptr);

// One stage of the finite-horizon variant: maximize c.(phi r) subject to
// (phi r)(x) <= expected stage cost of mu_k at x against j_next, per state.
AlpResult alp_evaluate_fh_stage(const CoMdp& mdp, int stage, const JointPolicy& mu_k,
                                const Vector& j_next, const FeatureMatrix& f,
                                const StateWeights& w, const AlpOptions* opts = nullptr);

}  // namespace comdp
