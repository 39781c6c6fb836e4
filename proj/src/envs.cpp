#include "comdp/envs.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "comdp/rng.hpp"

namespace comdp {

namespace {

void check_grid_spec(const GridSpec& s) {
  if (s.h < 2) throw std::invalid_argument("grid side must be at least 2");
  int cells = s.h * s.h;
  if (s.fly_cells[0] == s.fly_cells[1])
    throw std::invalid_argument("fly cells must be distinct");
  for (int f : s.fly_cells)
    if (f < 0 || f >= cells) throw std::invalid_argument("fly cell out of range");
  if (!(s.slip_p > 0.0 && s.slip_p <= 1.0))
    throw std::invalid_argument("slip probability must lie in (0,1]");
  if (!(s.stage_cost > 0.0)) throw std::invalid_argument("stage cost must be positive");
  if (s.collision_penalty < 0.0 || s.wall_penalty < 0.0)
    throw std::invalid_argument("penalties must be nonnegative");
  if (s.mode == HorizonType::Finite) {
    if (s.stages < 1) throw std::invalid_argument("need at least one stage");
  } else if (!(s.alpha > 0.0 && s.alpha < 1.0)) {
    throw std::invalid_argument("discount must lie strictly inside (0,1)");
  }
}

}  // namespace

CoMdp build_spiders_and_flies(const GridSpec& spec) {
  check_grid_spec(spec);
  const int h = spec.h;
  const int cells = h * h;
  const int n = cells * cells;

  std::vector<std::vector<std::vector<int>>> actions(
      n, std::vector<std::vector<int>>(2, {0, 1, 2, 3}));
  Horizon horizon = spec.mode == HorizonType::Finite
                        ? Horizon::finite(spec.stages, Vector::Zero(n))
                        : Horizon::infinite(spec.alpha);
  CoMdp mdp(n, 2, std::move(actions), std::move(horizon));
  mdp.grid_meta = GridMeta{h, spec.fly_cells};

  auto is_goal = [&](int c1, int c2) {
    return (c1 == spec.fly_cells[0] && c2 == spec.fly_cells[1]) ||
           (c1 == spec.fly_cells[1] && c2 == spec.fly_cells[0]);
  };
  // Returns the landing cell; bounced is set when the move left the grid.
  auto move = [&](int cell, int dir, bool* bounced) {
    int row = cell / h, col = cell % h;
    switch (dir) {
      case 0: --row; break;
      case 1: ++row; break;
      case 2: --col; break;
      case 3: ++col; break;
    }
    if (row < 0 || row >= h || col < 0 || col >= h) {
      *bounced = true;
      return cell;
    }
    *bounced = false;
    return row * h + col;
  };

  const double off_p = (1.0 - spec.slip_p) / 3.0;
  std::vector<double> psum(n), gsum(n);
  std::vector<int> touched;
  touched.reserve(16);

  for (int c1 = 0; c1 < cells; ++c1) {
    for (int c2 = 0; c2 < cells; ++c2) {
      int x = c1 * cells + c2;
      if (is_goal(c1, c2)) {
        KernelRow row;
        if (spec.mode == HorizonType::Finite) {
          row = KernelRow::from_entries(n, {{x, 1.0, 0.0}});
        } else {
          // Episode restart: spiders repositioned uniformly, free of charge.
          row = KernelRow::from_dense(Vector::Constant(n, 1.0 / n), Vector::Zero(n));
        }
        for (long long rank = 0; rank < 16; ++rank) mdp.set_row(x, rank, row);
        continue;
      }
      for (int a1 = 0; a1 < 4; ++a1) {
        for (int a2 = 0; a2 < 4; ++a2) {
          touched.clear();
          for (int d1 = 0; d1 < 4; ++d1) {
            double q1 = d1 == a1 ? spec.slip_p : off_p;
            if (q1 == 0.0) continue;
            bool b1;
            int nc1 = move(c1, d1, &b1);
            for (int d2 = 0; d2 < 4; ++d2) {
              double q2 = d2 == a2 ? spec.slip_p : off_p;
              if (q2 == 0.0) continue;
              bool b2;
              int nc2 = move(c2, d2, &b2);
              int y = nc1 * cells + nc2;
              double q = q1 * q2;
              double cost = spec.stage_cost +
                            spec.wall_penalty * ((b1 ? 1.0 : 0.0) + (b2 ? 1.0 : 0.0)) +
                            (nc1 == nc2 ? spec.collision_penalty : 0.0);
              if (psum[y] == 0.0) touched.push_back(y);
              psum[y] += q;
              gsum[y] += q * cost;
            }
          }
          std::vector<Transition> entries;
          entries.reserve(touched.size());
          // Several slip outcomes can merge on one successor (wall bounces);
          // the stored cost is the mean conditioned on landing there.
          for (int y : touched) {
            entries.push_back({y, psum[y], gsum[y] / psum[y]});
            psum[y] = 0.0;
            gsum[y] = 0.0;
          }
          mdp.set_row(x, a1 * 4LL + a2, KernelRow::from_entries(n, std::move(entries)));
        }
      }
    }
  }
  return mdp;
}

CoMdp build_random_comdp(const RandomModelSpec& spec) {
  if (spec.n < 1 || spec.m < 1 || spec.actions_per_agent < 1)
    throw std::invalid_argument("model dimensions must be positive");
  if (spec.branching < 1 || spec.branching > spec.n)
    throw std::invalid_argument("branching must lie in [1, n]");
  double joint = std::pow(static_cast<double>(spec.actions_per_agent), spec.m);
  if (spec.n * joint * spec.branching > 1e6)
    throw std::invalid_argument("model too large to materialize");
  if (spec.cost_hi < spec.cost_lo) throw std::invalid_argument("empty cost range");

  Rng rng(spec.seed);
  std::vector<int> ids(spec.actions_per_agent);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<std::vector<std::vector<int>>> actions(
      spec.n, std::vector<std::vector<int>>(spec.m, ids));

  Horizon horizon;
  if (spec.mode == HorizonType::Finite) {
    if (spec.stages < 1) throw std::invalid_argument("need at least one stage");
    Vector terminal(spec.n);
    for (int x = 0; x < spec.n; ++x)
      terminal[x] = rng.uniform(spec.cost_lo, spec.cost_hi);
    horizon = Horizon::finite(spec.stages, std::move(terminal));
  } else {
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
      throw std::invalid_argument("discount must lie strictly inside (0,1)");
    horizon = Horizon::infinite(spec.alpha);
  }

  CoMdp mdp(spec.n, spec.m, std::move(actions), std::move(horizon));
  std::vector<int> pool(spec.n);
  for (int x = 0; x < spec.n; ++x) {
    for (long long rank = 0; rank < mdp.joint_action_count(x); ++rank) {
      // Draw `branching` distinct successors by a partial shuffle.
      std::iota(pool.begin(), pool.end(), 0);
      std::vector<Transition> entries(spec.branching);
      double total = 0.0;
      for (int k = 0; k < spec.branching; ++k) {
        int pick = rng.uniform_int(k, spec.n - 1);
        std::swap(pool[k], pool[pick]);
        double e = -std::log(1.0 - rng.uniform01());
        entries[k] = {pool[k], e, rng.uniform(spec.cost_lo, spec.cost_hi)};
        total += e;
      }
      for (Transition& t : entries) t.p /= total;
      mdp.set_row(x, rank, KernelRow::from_entries(spec.n, std::move(entries)));
    }
  }
  return mdp;
}

}  // namespace comdp
