#include "comdp/lp.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <vector>

namespace comdp {

namespace {

constexpr double kPivotTol = 1e-10;   // entries below this never pivot
constexpr double kPhase1Tol = 1e-8;   // residual artificial mass => infeasible

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void dump_tableau(const LpProblem& lp, const Tableau& t, const std::string& path) {
  std::ofstream os(path);
  if (!os) return;
  os << "rows " << lp.a.rows() << " vars " << lp.objective.size() << "\n";
  os << "objective " << lp.objective.transpose() << "\n";
  os << "tableau (constraints, z-row, w-row; rhs last)\n" << t << "\n";
}

}  // namespace

LpSolution solve_lp(const LpProblem& lp) {
  const int d = static_cast<int>(lp.objective.size());
  const int rows = static_cast<int>(lp.a.rows());
  if (lp.a.cols() != d || lp.b.size() != rows)
    throw std::invalid_argument("lp dimensions disagree");

  LpSolution sol;
  sol.x = Vector::Zero(d);
  if (rows == 0) {
    // No constraints: optimal at zero only when the objective vanishes.
    sol.status = lp.objective.isZero(0.0) ? LpStatus::Optimal : LpStatus::Unbounded;
    return sol;
  }

  // Column layout: [x+ (d), x- (d), slack (rows), artificial (one per negated
  // row)]. Rows with negative rhs are negated so the rhs starts nonnegative;
  // their slack coefficient then is -1, so they get an artificial instead.
  const int split = 2 * d;
  std::vector<int> art_rows;
  Matrix a = lp.a;
  Vector b = lp.b;
  for (int r = 0; r < rows; ++r) {
    if (b[r] < 0.0) {
      a.row(r) = -a.row(r);
      b[r] = -b[r];
      art_rows.push_back(r);
    }
  }
  const int nart = static_cast<int>(art_rows.size());
  const int cols = split + rows + nart;  // rhs kept separately in last column
  const int zrow = rows, wrow = rows + 1;

  Tableau t = Tableau::Zero(rows + 2, cols + 1);
  std::vector<int> basis(rows);
  for (int r = 0; r < rows; ++r) {
    t.block(r, 0, 1, d) = a.row(r);
    t.block(r, d, 1, d) = -a.row(r);
    t(r, split + r) = 1.0;
    t(r, cols) = b[r];
    basis[r] = split + r;
  }
  for (int k = 0; k < nart; ++k) {
    int r = art_rows[k];
    t(r, split + r) = -1.0;  // slack sign flipped by the row negation
    t(r, split + rows + k) = 1.0;
    basis[r] = split + rows + k;
  }
  // z-row: reduced costs for the maximization, as z - c.x = 0.
  for (int j = 0; j < d; ++j) {
    t(zrow, j) = -lp.objective[j];
    t(zrow, d + j) = lp.objective[j];
  }
  // w-row: maximize -(sum of artificials); eliminate the basic artificials.
  for (int k = 0; k < nart; ++k) t(wrow, split + rows + k) = 1.0;
  for (int r : art_rows) t.row(wrow) -= t.row(r);

  if (!lp.debug_dump_path.empty()) dump_tableau(lp, t, lp.debug_dump_path);

  const int enterable = split + rows;  // artificials never enter
  const long long pivot_cap = 2000 + 200LL * (rows + cols);

  auto pivot = [&](int r, int s) {
    t.row(r) /= t(r, s);
    for (int i = 0; i < rows + 2; ++i) {
      if (i == r) continue;
      double f = t(i, s);
      if (f != 0.0) t.row(i) -= f * t.row(r);
    }
    basis[r] = s;
    ++sol.pivot_count;
  };

  // Runs one phase to optimality; false means no leaving row was found.
  auto run_phase = [&](int obj) -> bool {
    bool bland = false;
    int stall = 0;
    double last = t(obj, cols);
    for (;;) {
      int enter = -1;
      if (!bland) {
        double best = -kPivotTol;
        for (int j = 0; j < enterable; ++j)
          if (t(obj, j) < best) { best = t(obj, j); enter = j; }
      } else {
        for (int j = 0; j < enterable; ++j)
          if (t(obj, j) < -kPivotTol) { enter = j; break; }
      }
      if (enter < 0) return true;

      int leave = -1, leave_basis = std::numeric_limits<int>::max();
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows; ++r) {
        double a_rs = t(r, enter);
        if (a_rs <= kPivotTol) continue;
        double ratio = t(r, cols) / a_rs;
        if (ratio < best_ratio || (ratio == best_ratio && basis[r] < leave_basis)) {
          best_ratio = ratio;
          leave = r;
          leave_basis = basis[r];
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);

      double now = t(obj, cols);
      if (std::abs(now - last) <= 1e-12 * (1.0 + std::abs(now))) ++stall; else stall = 0;
      last = now;
      if (!bland && stall > 3 * (rows + cols)) bland = true;
      if (sol.pivot_count > pivot_cap)
        throw std::runtime_error("simplex exceeded its pivot budget");
    }
  };

  if (nart > 0) {
    if (!run_phase(wrow))
      throw std::logic_error("phase one cannot be unbounded");
    if (t(wrow, cols) < -kPhase1Tol) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // Kick leftover artificials out of the basis where a real pivot exists;
    // rows without one are redundant and keep a zero-valued artificial.
    for (int r = 0; r < rows; ++r) {
      if (basis[r] < enterable) continue;
      for (int j = 0; j < enterable; ++j) {
        if (std::abs(t(r, j)) > kPivotTol) { pivot(r, j); break; }
      }
    }
  }

  if (!run_phase(zrow)) {
    sol.status = LpStatus::Unbounded;
    sol.x.setZero();
    return sol;
  }

  for (int r = 0; r < rows; ++r) {
    if (basis[r] < d) sol.x[basis[r]] += t(r, cols);
    else if (basis[r] < split) sol.x[basis[r] - d] -= t(r, cols);
  }
  sol.objective_value = t(zrow, cols);
  sol.status = LpStatus::Optimal;
  return sol;
}

}  // namespace comdp
