// Shared fixtures for the unit tests.
#pragma once

#include <vector>

#include "comdp/envs.hpp"
#include "comdp/mdp.hpp"
#include "comdp/rng.hpp"

namespace testutil {

using namespace comdp;

// Two states, two agents, two actions each; hand-written rows.
inline CoMdp two_state(double alpha = 0.9) {
  std::vector<std::vector<std::vector<int>>> acts(
      2, std::vector<std::vector<int>>(2, std::vector<int>{0, 1}));
  CoMdp mdp(2, 2, acts, Horizon::infinite(alpha));
  for (int x = 0; x < 2; ++x)
    for (long long rank = 0; rank < 4; ++rank) {
      // Action pair (a,b): stay with prob 0.5+0.25a, cost 1+x+0.5b.
      std::vector<int> u = {static_cast<int>(rank / 2), static_cast<int>(rank % 2)};
      double stay = 0.5 + 0.25 * u[0];
      double cost = 1.0 + x + 0.5 * u[1];
      mdp.set_row(x, rank,
                  KernelRow::from_entries(
                      2, {{x, stay, cost}, {1 - x, 1.0 - stay, cost}}));
    }
  return mdp;
}

inline CoMdp random_ih(unsigned long long seed, int n, int m, int actions,
                       double alpha = 0.9) {
  RandomModelSpec spec;
  spec.seed = seed;
  spec.n = n;
  spec.m = m;
  spec.actions_per_agent = actions;
  spec.branching = n < 3 ? n : 3;
  spec.mode = HorizonType::Infinite;
  spec.alpha = alpha;
  return build_random_comdp(spec);
}

inline CoMdp random_fh(unsigned long long seed, int n, int m, int actions, int stages) {
  RandomModelSpec spec;
  spec.seed = seed;
  spec.n = n;
  spec.m = m;
  spec.actions_per_agent = actions;
  spec.branching = n < 3 ? n : 3;
  spec.mode = HorizonType::Finite;
  spec.stages = stages;
  return build_random_comdp(spec);
}

inline JointPolicy first_policy(const CoMdp& mdp) {
  JointPolicy mu(mdp.num_states(), mdp.num_agents());
  for (int x = 0; x < mdp.num_states(); ++x)
    for (int i = 0; i < mdp.num_agents(); ++i) mu(x, i) = mdp.actions(x, i).front();
  return mu;
}

inline JointPolicy random_policy(const CoMdp& mdp, unsigned long long seed) {
  Rng rng(seed);
  JointPolicy mu(mdp.num_states(), mdp.num_agents());
  for (int x = 0; x < mdp.num_states(); ++x)
    for (int i = 0; i < mdp.num_agents(); ++i) {
      const std::vector<int>& set = mdp.actions(x, i);
      mu(x, i) = set[rng.uniform_int(0, static_cast<int>(set.size()) - 1)];
    }
  return mu;
}

}  // namespace testutil
