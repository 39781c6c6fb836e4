#include "comdp/alp.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

namespace comdp {

namespace {

int g_dump_counter = 0;  // numbers debug dumps across evaluations

std::string next_dump_path(const AlpOptions* opts) {
  if (!opts || opts->lp_dump_dir.empty()) return {};
  std::filesystem::create_directories(opts->lp_dump_dir);
  return opts->lp_dump_dir + "/lp_" + std::to_string(g_dump_counter++) + ".txt";
}

void check_inputs(const CoMdp& mdp, const FeatureMatrix& f, const StateWeights& w) {
  std::vector<std::string> bad = validate_features(f, mdp.num_states());
  if (!bad.empty()) throw std::invalid_argument("feature matrix: " + bad.front());
  if (w.c.size() != mdp.num_states())
    throw std::invalid_argument("state weights must have one entry per state");
  if (w.c.minCoeff() <= 0.0)
    throw std::invalid_argument("state weights must be strictly positive");
  if (std::abs(w.c.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("state weights must sum to one");
}

AlpResult solve_evaluation_lp(LpProblem&& lp, const FeatureMatrix& f,
                              const char* what, int stage) {
  LpSolution s = solve_lp(lp);
  if (s.status != LpStatus::Optimal) {
    std::string status = s.status == LpStatus::Infeasible ? "infeasible" : "unbounded";
    std::string where = stage >= 0 ? " at stage " + std::to_string(stage) : "";
    throw std::runtime_error(std::string(what) + where + ": evaluation LP " + status +
                             " (" + std::to_string(lp.a.rows()) + " constraints, " +
                             std::to_string(f.dim()) + " basis columns)");
  }
  AlpResult res;
  res.r = s.x;
  res.j_alp = {f.phi * s.x, ValueKind::Approx};
  res.lp_status = s.status;
  res.lp_pivots = s.pivot_count;
  return res;
}

}  // namespace

StateWeights StateWeights::uniform(int n) {
  StateWeights w;
  w.c = Vector::Constant(n, 1.0 / n);
  return w;
}

BasisSpec BasisSpec::parse(const std::string& text) {
  BasisSpec spec;
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "identity" && arg.empty()) {
    spec.kind = BasisKind::Identity;
  } else if (head == "aggregation") {
    spec.kind = BasisKind::Aggregation;
    spec.param = arg.empty() ? -1 : std::stoi(arg);
    if (spec.param <= 0) throw std::invalid_argument("aggregation needs a positive cell count");
  } else if (head == "grid-distance" && arg.empty()) {
    spec.kind = BasisKind::GridDistance;
  } else if (head == "poly") {
    spec.kind = BasisKind::Polynomial;
    spec.param = arg.empty() ? -1 : std::stoi(arg);
    if (spec.param <= 0) throw std::invalid_argument("poly needs a positive degree");
  } else {
    throw std::invalid_argument("unknown basis \"" + text + "\"");
  }
  return spec;
}

std::string BasisSpec::str() const {
  switch (kind) {
    case BasisKind::Identity: return "identity";
    case BasisKind::Aggregation: return "aggregation:" + std::to_string(param);
    case BasisKind::GridDistance: return "grid-distance";
    case BasisKind::Polynomial: return "poly:" + std::to_string(param);
  }
  return "?";
}

std::vector<std::string> validate_features(const FeatureMatrix& f, int n) {
  std::vector<std::string> out;
  if (f.phi.rows() != n) {
    out.push_back("feature matrix must have one row per state");
    return out;
  }
  int d = f.dim();
  if (d < 1 || d > n) out.push_back("column count must lie in [1, n]");
  if (f.kind != BasisKind::Identity && d >= 1 &&
      !(f.phi.col(0).array() == 1.0).all())
    out.push_back("first column must be all ones");
  Eigen::ColPivHouseholderQR<Matrix> qr(f.phi);
  qr.setThreshold(1e-9);
  if (qr.rank() < std::min<int>(d, n))
    out.push_back("columns are linearly dependent (rank " +
                  std::to_string(qr.rank()) + " of " + std::to_string(d) + ")");
  return out;
}

FeatureMatrix build_features(const BasisSpec& spec, const CoMdp& mdp) {
  const int n = mdp.num_states();
  FeatureMatrix f;
  f.kind = spec.kind;
  switch (spec.kind) {
    case BasisKind::Identity:
      f.phi = Matrix::Identity(n, n);
      break;
    case BasisKind::Aggregation: {
      int cells = spec.param;
      if (cells > n)
        throw std::invalid_argument("aggregation cell count exceeds the state count");
      // Constant column plus indicators of contiguous cells; the first cell's
      // indicator is dropped, otherwise the columns would sum to the constant.
      f.phi = Matrix::Zero(n, cells);
      f.phi.col(0).setOnes();
      for (int x = 0; x < n; ++x) {
        int cell = static_cast<int>((static_cast<long long>(x) * cells) / n);
        if (cell > 0) f.phi(x, cell) = 1.0;
      }
      break;
    }
    case BasisKind::GridDistance: {
      if (!mdp.grid_meta)
        throw std::invalid_argument("grid-distance basis needs a grid model");
      int h = mdp.grid_meta->h;
      auto flies = mdp.grid_meta->fly_cells;
      if (n != h * h * h * h)
        throw std::invalid_argument("grid metadata does not match the state count");
      auto dist = [&](int cell, int fly) {
        return std::abs(cell / h - fly / h) + std::abs(cell % h - fly % h);
      };
      f.phi = Matrix::Zero(n, 4);
      for (int x = 0; x < n; ++x) {
        int c1 = x / (h * h), c2 = x % (h * h);
        f.phi(x, 0) = 1.0;
        f.phi(x, 1) = std::min(dist(c1, flies[0]), dist(c1, flies[1]));
        f.phi(x, 2) = std::min(dist(c2, flies[0]), dist(c2, flies[1]));
        f.phi(x, 3) = c1 == c2 ? 1.0 : 0.0;
      }
      break;
    }
    case BasisKind::Polynomial: {
      int degree = spec.param;
      if (degree + 1 > n)
        throw std::invalid_argument("poly degree needs more states than columns");
      // Monomials of the state index scaled into [0,1].
      f.phi = Matrix::Ones(n, degree + 1);
      for (int x = 0; x < n; ++x) {
        double coord = n > 1 ? static_cast<double>(x) / (n - 1) : 0.0;
        for (int p = 1; p <= degree; ++p) f.phi(x, p) = std::pow(coord, p);
      }
      break;
    }
  }
  std::vector<std::string> bad = validate_features(f, n);
  if (!bad.empty())
    throw std::invalid_argument("basis " + spec.str() + ": " + bad.front());
  return f;
}

AlpResult alp_evaluate_ih(const CoMdp& mdp, const JointPolicy& mu,
                          const FeatureMatrix& f, const StateWeights& w,
                          const AlpOptions* opts) {
  if (mdp.horizon().type != HorizonType::Infinite)
    throw std::invalid_argument("alp_evaluate_ih needs an infinite-horizon model");
  check_inputs(mdp, f, w);
  double alpha = mdp.horizon().discount;
  // Constraints in state order: (phi r)(x) - alpha sum_y p_xy (phi r)(y) <= g_mu(x).
  LpProblem lp;
  lp.a = f.phi;
  for (int x = 0; x < mdp.num_states(); ++x)
    mdp.policy_row(x, mu).for_each(
        [&](int y, double p, double) { lp.a.row(x) -= alpha * p * f.phi.row(y); });
  lp.b = stage_cost_under(mdp, mu);
  lp.objective = f.phi.transpose() * w.c;
  lp.debug_dump_path = next_dump_path(opts);
  return solve_evaluation_lp(std::move(lp), f, "alp_evaluate_ih", -1);
}

AlpResult alp_evaluate_fh_stage(const CoMdp& mdp, int stage, const JointPolicy& mu_k,
                                const Vector& j_next, const FeatureMatrix& f,
                                const StateWeights& w, const AlpOptions* opts) {
  check_inputs(mdp, f, w);
  if (j_next.size() != mdp.num_states())
    throw std::invalid_argument("next-stage values must have one entry per state");
  // Constraints in state order: (phi r)(x) <= E[g + j_next | x, mu_k(x)].
  LpProblem lp;
  lp.a = f.phi;
  lp.b.resize(mdp.num_states());
  for (int x = 0; x < mdp.num_states(); ++x)
    lp.b[x] = mdp.policy_row(x, mu_k).expected(j_next, 1.0);
  lp.objective = f.phi.transpose() * w.c;
  lp.debug_dump_path = next_dump_path(opts);
  return solve_evaluation_lp(std::move(lp), f, "alp_evaluate_fh_stage", stage);
}

}  // namespace comdp
