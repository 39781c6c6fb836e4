#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <vector>

#include "comdp/lp.hpp"
#include "comdp/rng.hpp"

using namespace comdp;

namespace {

// Brute-force optimum of max c.x s.t. ax <= b over a bounded polytope:
// enumerate all d-subsets of rows, solve the square systems, keep feasible
// vertices. Bounded and nonempty implies some vertex is optimal.
std::optional<double> vertex_optimum(const Vector& c, const Matrix& a, const Vector& b) {
  const int d = static_cast<int>(c.size());
  const int rows = static_cast<int>(a.rows());
  std::vector<int> pick(d);
  std::optional<double> best;
  auto recurse = [&](auto&& self, int start, int depth) -> void {
    if (depth == d) {
      Matrix sq(d, d);
      Vector rhs(d);
      for (int i = 0; i < d; ++i) {
        sq.row(i) = a.row(pick[i]);
        rhs[i] = b[pick[i]];
      }
      Eigen::FullPivLU<Matrix> lu(sq);
      if (!lu.isInvertible()) return;
      Vector v = lu.solve(rhs);
      if (((a * v) - b).maxCoeff() > 1e-9) return;
      double val = c.dot(v);
      if (!best || val > *best) best = val;
      return;
    }
    for (int i = start; i <= rows - (d - depth); ++i) {
      pick[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

// Random instance with a bounding box so the feasible set is never unbounded.
LpProblem random_boxed(Rng& rng, int d, int extra_rows) {
  LpProblem lp;
  lp.objective.resize(d);
  for (int i = 0; i < d; ++i) lp.objective[i] = rng.uniform_int(-3, 3);
  int rows = extra_rows + 2 * d;
  lp.a = Matrix::Zero(rows, d);
  lp.b.resize(rows);
  for (int r = 0; r < extra_rows; ++r) {
    for (int i = 0; i < d; ++i) lp.a(r, i) = rng.uniform_int(-3, 3);
    lp.b[r] = rng.uniform_int(-2, 4);
  }
  for (int i = 0; i < d; ++i) {
    lp.a(extra_rows + 2 * i, i) = 1.0;
    lp.b[extra_rows + 2 * i] = 10.0;
    lp.a(extra_rows + 2 * i + 1, i) = -1.0;
    lp.b[extra_rows + 2 * i + 1] = 10.0;
  }
  return lp;
}

}  // namespace

TEST_CASE("box optimum sits at the corner") {
  LpProblem lp;
  lp.objective = Vector::Ones(2);
  lp.a = Matrix::Zero(4, 2);
  lp.a(0, 0) = 1;
  lp.a(1, 1) = 1;
  lp.a(2, 0) = -1;
  lp.a(3, 1) = -1;
  lp.b = Vector::Zero(4);
  lp.b[0] = 1;
  lp.b[1] = 2;
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.x[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sol.objective_value == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("contradictory rows are infeasible") {
  LpProblem lp;
  lp.objective = Vector::Ones(1);
  lp.a = Matrix::Zero(2, 1);
  lp.a(0, 0) = 1;
  lp.a(1, 0) = -1;
  lp.b.resize(2);
  lp.b << 0.0, -1.0;  // x <= 0 and x >= 1
  CHECK(solve_lp(lp).status == LpStatus::Infeasible);
}

TEST_CASE("missing upper bound is unbounded") {
  LpProblem lp;
  lp.objective = Vector::Ones(1);
  lp.a = Matrix::Zero(1, 1);
  lp.a(0, 0) = -1;
  lp.b = Vector::Zero(1);
  CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("no constraints at all") {
  LpProblem lp;
  lp.objective = Vector::Zero(3);
  lp.a = Matrix::Zero(0, 3);
  lp.b = Vector::Zero(0);
  CHECK(solve_lp(lp).status == LpStatus::Optimal);
  lp.objective[1] = 1.0;
  CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("random instances match the vertex-enumeration oracle") {
  int optimal_seen = 0, infeasible_seen = 0;
  for (unsigned long long seed = 0; seed < 200; ++seed) {
    Rng rng(seed * 7919 + 13);
    int d = 2 + static_cast<int>(seed % 3);
    LpProblem lp = random_boxed(rng, d, 4 + static_cast<int>(seed % 5));
    LpSolution sol = solve_lp(lp);
    std::optional<double> oracle = vertex_optimum(lp.objective, lp.a, lp.b);
    if (oracle) {
      ++optimal_seen;
      REQUIRE_MESSAGE(sol.status == LpStatus::Optimal, "seed ", seed);
      double tol = 1e-7 * (1.0 + std::abs(*oracle));
      CHECK_MESSAGE(std::abs(sol.objective_value - *oracle) < tol, "seed ", seed,
                    " got ", sol.objective_value, " want ", *oracle);
      CHECK(((lp.a * sol.x) - lp.b).maxCoeff() < 1e-7);
      CHECK(std::abs(lp.objective.dot(sol.x) - sol.objective_value) < 1e-9);
    } else {
      ++infeasible_seen;
      CHECK_MESSAGE(sol.status == LpStatus::Infeasible, "seed ", seed);
    }
  }
  // The mix should exercise both outcomes.
  CHECK(optimal_seen > 50);
  CHECK(infeasible_seen > 5);
}

TEST_CASE("repeat solves are bit-identical") {
  Rng rng(424242);
  LpProblem lp = random_boxed(rng, 4, 8);
  LpSolution s1 = solve_lp(lp);
  LpSolution s2 = solve_lp(lp);
  CHECK(s1.pivot_count == s2.pivot_count);
  REQUIRE(s1.x.size() == s2.x.size());
  for (int i = 0; i < s1.x.size(); ++i) CHECK(s1.x[i] == s2.x[i]);
  CHECK(s1.objective_value == s2.objective_value);
}

TEST_CASE("positive row scaling leaves the optimum alone") {
  for (unsigned long long seed = 0; seed < 40; ++seed) {
    Rng rng(seed + 1000);
    LpProblem lp = random_boxed(rng, 3, 5);
    LpSolution base = solve_lp(lp);
    LpProblem scaled = lp;
    for (int r = 0; r < scaled.a.rows(); ++r) {
      double s = 0.5 + rng.uniform01() * 2.5;
      scaled.a.row(r) *= s;
      scaled.b[r] *= s;
    }
    LpSolution same = solve_lp(scaled);
    REQUIRE(same.status == base.status);
    if (base.status == LpStatus::Optimal) {
      double tol = 1e-7 * (1.0 + std::abs(base.objective_value));
      CHECK(std::abs(same.objective_value - base.objective_value) < tol);
    }
  }
}

TEST_CASE("degenerate ties terminate") {
  // Every vertex of this diamond is massively degenerate: duplicated rows.
  LpProblem lp;
  lp.objective.resize(2);
  lp.objective << 1.0, 0.0;
  lp.a = Matrix::Zero(8, 2);
  lp.b = Vector::Ones(8);
  int r = 0;
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1}) {
      lp.a(r, 0) = s1;
      lp.a(r, 1) = s2;
      lp.a(r + 4, 0) = s1;
      lp.a(r + 4, 1) = s2;
      ++r;
    }
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("failed solves can dump the tableau for replay") {
  LpProblem lp;
  lp.objective = Vector::Ones(1);
  lp.a = Matrix::Zero(2, 1);
  lp.a(0, 0) = 1;
  lp.a(1, 0) = -1;
  lp.b.resize(2);
  lp.b << 0.0, -1.0;
  std::string path =
      (std::filesystem::temp_directory_path() / "comdp_lp_dump_test.txt").string();
  lp.debug_dump_path = path;
  CHECK(solve_lp(lp).status == LpStatus::Infeasible);
  std::ifstream is(path);
  REQUIRE(is.good());
  std::string first;
  std::getline(is, first);
  CHECK(!first.empty());
  is.close();
  std::remove(path.c_str());
}
