#pragma once

#include <string>

#include "comdp/types.hpp"

namespace comdp {

enum class LpStatus { Optimal, Infeasible, Unbounded };

// maximize objective . x  subject to  a x <= b,  x free.
struct LpProblem {
  Vector objective;
  Matrix a;
  Vector b;
  // When non-empty, the assembled tableau is written there before solving.
  std::string debug_dump_path;
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  Vector x;                    // zero vector unless Optimal
  double objective_value = 0.0;
  int pivot_count = 0;
};

// Two-phase primal simplex on a dense tableau. Free variables are split into
// differences of nonnegatives, so the tableau has 2d structural columns. The
// pivot rule is Dantzig's most-negative reduced cost, falling back to Bland's
// smallest-index rule after 3*(rows+columns) pivots without objective
// progress; all tie-breaks are by smallest index, so repeated solves of the
// same problem are bit-identical.
LpSolution solve_lp(const LpProblem& lp);

}  // namespace comdp
