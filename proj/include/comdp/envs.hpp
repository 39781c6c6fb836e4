#pragma once

#include <array>

#include "comdp/mdp.hpp"

namespace comdp {

// Two spiders on an h-by-h grid chasing two fixed flies. The joint state is
// the pair of spider cells (n = h^4); each spider picks one of four moves per
// stage. A move goes where intended with probability slip_p and to each other
// direction with (1-slip_p)/3; stepping off the grid means staying put plus a
// wall penalty. Every stage outside a goal state costs stage_cost, plus
// penalties; a goal state has both flies covered, in either assignment.
struct GridSpec {
  int h = 4;
  std::array<int, 2> fly_cells{0, 15};  // defaults to opposite corners for h=4
  double slip_p = 0.7;
  double collision_penalty = 2.0;
  double wall_penalty = 1.0;
  double stage_cost = 1.0;
  HorizonType mode = HorizonType::Infinite;
  int stages = 10;     // finite mode: goals absorb with zero cost
  double alpha = 0.9;  // infinite mode: goals reset uniformly at zero cost
};

// Action ids: 0 up, 1 down, 2 left, 3 right (row 0 is the top of the grid).
CoMdp build_spiders_and_flies(const GridSpec& spec);

// Seeded random cooperative MDP: each (state, joint action) row picks
// `branching` distinct successors, probabilities Dirichlet-uniform, costs
// uniform in [cost_lo, cost_hi]. Identical spec gives a bit-identical model.
struct RandomModelSpec {
  unsigned long long seed = 1;
  int n = 10;
  int m = 2;
  int actions_per_agent = 2;
  int branching = 3;
  double cost_lo = 0.0;
  double cost_hi = 1.0;
  HorizonType mode = HorizonType::Infinite;
  int stages = 3;      // finite mode; terminal costs drawn from the cost range
  double alpha = 0.9;  // infinite mode
};

CoMdp build_random_comdp(const RandomModelSpec& spec);

}  // namespace comdp
