// Acceptance gate: one line per criterion, exit code = number of failures.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "comdp/alp.hpp"
#include "comdp/dpi.hpp"
#include "comdp/envs.hpp"
#include "comdp/exact_dp.hpp"
#include "comdp/model_io.hpp"
#include "comdp/rng.hpp"

using namespace comdp;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(COMDP_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof(buf), pipe)) res.out.append(buf, got);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

CoMdp suite_model(unsigned long long seed, int n, int m, int actions, double alpha) {
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

JointPolicy pick_policy(const CoMdp& mdp, unsigned long long seed) {
  Rng rng(seed);
  JointPolicy mu(mdp.num_states(), mdp.num_agents());
  for (int x = 0; x < mdp.num_states(); ++x)
    for (int i = 0; i < mdp.num_agents(); ++i) {
      const std::vector<int>& set = mdp.actions(x, i);
      mu(x, i) = set[rng.uniform_int(0, static_cast<int>(set.size()) - 1)];
    }
  return mu;
}

JointPolicy first_policy(const CoMdp& mdp) {
  JointPolicy mu(mdp.num_states(), mdp.num_agents());
  for (int x = 0; x < mdp.num_states(); ++x)
    for (int i = 0; i < mdp.num_agents(); ++i) mu(x, i) = mdp.actions(x, i).front();
  return mu;
}

FeatureMatrix projection_basis(Rng& rng, int n, int d) {
  FeatureMatrix f;
  f.kind = BasisKind::Aggregation;
  for (int tries = 0; tries < 100; ++tries) {
    f.phi = Matrix::Ones(n, d);
    for (int c = 1; c < d; ++c)
      for (int x = 0; x < n; ++x) f.phi(x, c) = rng.normal();
    if (validate_features(f, n).empty()) return f;
  }
  throw std::runtime_error("could not draw a full-rank basis");
}

double median_ms(const std::vector<double>& v) {
  std::vector<double> s = v;
  std::sort(s.begin(), s.end());
  size_t k = s.size() / 2;
  return s.size() % 2 ? s[k] : 0.5 * (s[k - 1] + s[k]);
}

// ---- criteria ----

bool identity_matches_exact(std::string& note) {
  auto t0 = Clock::now();
  double worst = 0.0;
  for (unsigned long long seed = 0; seed < 100; ++seed) {
    int n = 3 + static_cast<int>(seed % 18);
    CoMdp mdp = suite_model(seed, n, 2 + seed % 2, 2 + seed % 2, seed % 2 ? 0.9 : 0.5);
    JointPolicy mu = pick_policy(mdp, seed + 1);
    FeatureMatrix f = build_features(BasisSpec::parse("identity"), mdp);
    AlpResult alp = alp_evaluate_ih(mdp, mu, f, StateWeights::uniform(n));
    Vector exact = evaluate_policy_exact_ih(mdp, mu).values;
    worst = std::max(worst, (alp.j_alp.values - exact).lpNorm<Eigen::Infinity>());
  }
  double secs = seconds_since(t0);
  std::ostringstream os;
  os << "max gap " << worst << ", " << secs << "s";
  note = os.str();
  return worst <= 1e-6 && secs < 30.0;
}

bool alp_is_lower_bound(std::string& note) {
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (unsigned long long seed = 0; seed < 100; ++seed) {
    int n = 3 + static_cast<int>(seed % 18);
    CoMdp mdp = suite_model(seed, n, 2 + seed % 2, 2 + seed % 2, seed % 2 ? 0.9 : 0.5);
    JointPolicy mu = pick_policy(mdp, seed + 1);
    Rng rng(seed + 500);
    int d = (n + 3) / 4;
    FeatureMatrix f = projection_basis(rng, n, d);
    AlpResult alp = alp_evaluate_ih(mdp, mu, f, StateWeights::uniform(n));
    Vector exact = evaluate_policy_exact_ih(mdp, mu).values;
    worst_excess = std::max(worst_excess, (alp.j_alp.values - exact).maxCoeff());
  }
  std::ostringstream os;
  os << "worst excess over exact " << worst_excess;
  note = os.str();
  return worst_excess <= 1e-6;
}

bool cli_bound_suite(const std::string& suite, std::string& note) {
  auto t0 = Clock::now();
  CliResult res = run_cli("verify-bounds --suite " + suite + " --seeds 100");
  double secs = seconds_since(t0);
  std::ostringstream os;
  os << "exit " << res.exit_code << ", " << secs << "s";
  note = os.str();
  return res.exit_code == 0 && secs < 60.0;
}

bool tiny_optimality(std::string& note) {
  double worst = 0.0;
  int fixed_points = 0;
  for (unsigned long long seed = 0; seed < 20; ++seed) {
    int n = 2 + static_cast<int>(seed % 5);
    CoMdp mdp = suite_model(seed + 900, n, 2, 2, seed % 2 ? 0.9 : 0.5);
    ValueIterationResult vi = value_iteration(mdp, 1e-13);
    PolicyIterationResult pi = policy_iteration_joint(mdp, first_policy(mdp));

    // Exhaustive optimum: pointwise best over all 4^n stationary policies.
    Vector best = Vector::Constant(n, std::numeric_limits<double>::infinity());
    long long total = 1;
    for (int x = 0; x < n; ++x) total *= 4;
    for (long long code = 0; code < total; ++code) {
      JointPolicy mu(n, 2);
      long long c = code;
      for (int x = 0; x < n; ++x) {
        mu(x, 0) = static_cast<int>((c % 4) / 2);
        mu(x, 1) = static_cast<int>(c % 2);
        c /= 4;
      }
      best = best.cwiseMin(evaluate_policy_exact_ih(mdp, mu).values);
    }
    worst = std::max(worst, (vi.j.values - best).lpNorm<Eigen::Infinity>());
    worst = std::max(worst, (pi.j.values - best).lpNorm<Eigen::Infinity>());

    // Agent-by-agent optimality of the sweep fixed point.
    FeatureMatrix f = build_features(BasisSpec::parse("identity"), mdp);
    IhSolveOptions opts;
    opts.stop_eps = 0.0;
    opts.max_iterations = 1000;
    IhSolveResult dpi =
        solve_ih_dpi_alp(mdp, first_policy(mdp), f, StateWeights::uniform(n), opts);
    if (dpi.stop_reason != "policy-repeat") return false;
    ++fixed_points;
    Vector j = evaluate_policy_exact_ih(mdp, dpi.policy).values;
    for (int x = 0; x < n; ++x) {
      std::vector<int> u = dpi.policy.action(x).u;
      double q_here =
          expected_stage_value(mdp, x, JointAction{u}, j, mdp.horizon().discount);
      for (int i = 0; i < 2; ++i)
        for (int a : mdp.actions(x, i)) {
          std::vector<int> dev = u;
          dev[i] = a;
          double q =
              expected_stage_value(mdp, x, JointAction{dev}, j, mdp.horizon().discount);
          if (q < q_here - 1e-9) return false;
        }
    }
  }
  std::ostringstream os;
  os << "max optimal-cost gap " << worst << ", " << fixed_points << "/20 fixed points";
  note = os.str();
  return worst <= 1e-8 && fixed_points == 20;
}

bool op_count_ratios(std::string& note) {
  GridSpec gspec;
  CoMdp grid = build_spiders_and_flies(gspec);
  OpCount sweep_grid, joint_grid;
  static_cast<void>(
      dpi_sweep(grid, first_policy(grid), Vector::Zero(256), 0.9, &sweep_grid));
  static_cast<void>(bellman_backup(grid, Vector::Zero(256), &joint_grid));

  RandomModelSpec wspec;
  wspec.seed = 5;
  wspec.n = 6;
  wspec.m = 4;
  wspec.actions_per_agent = 3;
  wspec.branching = 3;
  CoMdp wide = build_random_comdp(wspec);
  OpCount sweep_wide, joint_wide;
  static_cast<void>(
      dpi_sweep(wide, first_policy(wide), Vector::Zero(6), 0.9, &sweep_wide));
  static_cast<void>(bellman_backup(wide, Vector::Zero(6), &joint_wide));

  std::ostringstream os;
  os << "grid " << joint_grid.expectations << "/" << sweep_grid.expectations
     << ", synthetic " << joint_wide.expectations << "/" << sweep_wide.expectations;
  note = os.str();
  return sweep_grid.expectations == 256 * 8 && joint_grid.expectations == 256 * 16 &&
         joint_grid.expectations == 2 * sweep_grid.expectations &&
         sweep_wide.expectations == 6 * 12 && joint_wide.expectations == 6 * 81 &&
         joint_wide.expectations * 12 == sweep_wide.expectations * 81;
}

bool grid_reproduction(std::string& note) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "comdp_acceptance_grid";
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::path model = dir / "grid.json";

  CliResult gen = run_cli("gen-env --grid 4 --slip 0.7 --mode ih:0.9 --out " + model.string());
  if (gen.exit_code != 0) {
    note = "gen-env failed";
    return false;
  }
  Json info = Json::parse(gen.out);
  bool n_ok = info["n"] == 256;

  // Slip marginal at an interior state, spider 2 parked in a corner.
  CoMdp mdp = load_model(model.string());
  int x = (1 * 4 + 1) * 16 + 15;
  const KernelRow& row = mdp.row(x, mdp.rank_of(x, JointAction{{0, 1}}));
  double up = 0, down = 0, left = 0, right = 0;
  row.for_each([&](int y, double p, double) {
    int nc1 = y / 16;
    if (nc1 == 0 * 4 + 1) up += p;
    if (nc1 == 2 * 4 + 1) down += p;
    if (nc1 == 1 * 4 + 0) left += p;
    if (nc1 == 1 * 4 + 2) right += p;
  });
  bool slip_ok = std::abs(up - 0.7) < 1e-12 && std::abs(down - 0.1) < 1e-12 &&
                 std::abs(left - 0.1) < 1e-12 && std::abs(right - 0.1) < 1e-12;

  fs::path config = dir / "bench.json";
  {
    std::ofstream os(config);
    Json rows{{"rows",
               {{{"model", model.string()}, {"method", "pi-joint"}},
                {{"model", model.string()},
                 {"method", "dpi-alp"},
                 {"basis", "grid-distance"}}}}};
    os << rows.dump();
  }
  CliResult bench = run_cli("bench --config " + config.string() + " --trials 3");
  bool dim_ok = false;
  std::stringstream ss(bench.out);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.find("dpi-alp") == std::string::npos) continue;
    std::stringstream row_ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row_ss, field, ',')) fields.push_back(field);
    if (fields.size() >= 9 && std::stod(fields[8]) == 64.0) dim_ok = true;
  }
  fs::remove_all(dir);

  std::ostringstream os;
  os << "n=256 " << (n_ok ? "ok" : "BAD") << ", slip " << (slip_ok ? "ok" : "BAD")
     << ", reduction factor 64 " << (dim_ok ? "ok" : "BAD");
  note = os.str();
  return n_ok && slip_ok && dim_ok;
}

bool runtime_ordering(std::string& note) {
  GridSpec ih_spec;
  CoMdp ih = build_spiders_and_flies(ih_spec);
  FeatureMatrix f = build_features(BasisSpec::parse("grid-distance"), ih);
  StateWeights w = StateWeights::uniform(256);

  std::vector<double> dpi_ms, pi_ms;
  for (int t = 0; t < 5; ++t) {
    auto t0 = Clock::now();
    static_cast<void>(solve_ih_dpi_alp(ih, first_policy(ih), f, w, IhSolveOptions{}));
    dpi_ms.push_back(1e3 * seconds_since(t0));
    t0 = Clock::now();
    static_cast<void>(policy_iteration_joint(ih, first_policy(ih)));
    pi_ms.push_back(1e3 * seconds_since(t0));
  }
  double dpi_med = median_ms(dpi_ms), pi_med = median_ms(pi_ms);
  bool ih_ok = dpi_med * 2.0 <= pi_med;

  GridSpec fh_spec;
  fh_spec.mode = HorizonType::Finite;
  fh_spec.stages = 10;
  CoMdp fh = build_spiders_and_flies(fh_spec);
  FeatureMatrix ff = build_features(BasisSpec::parse("grid-distance"), fh);
  NonstationaryPolicy pi0;
  for (int k = 0; k < 10; ++k) pi0.stages.push_back(first_policy(fh));

  std::vector<double> dpi_fh_ms, dp_ms;
  for (int t = 0; t < 5; ++t) {
    auto t0 = Clock::now();
    static_cast<void>(solve_fh_dpi_alp(fh, pi0, ff, w, FhSolveOptions{}));
    dpi_fh_ms.push_back(1e3 * seconds_since(t0));
    t0 = Clock::now();
    static_cast<void>(finite_horizon_dp(fh));
    dp_ms.push_back(1e3 * seconds_since(t0));
  }
  double dpi_fh_med = median_ms(dpi_fh_ms), dp_med = median_ms(dp_ms);
  bool fh_ok = dpi_fh_med * 2.0 <= dp_med;

  std::ostringstream os;
  os << "ih speedup " << pi_med / dpi_med << "x (" << dpi_med << "ms vs " << pi_med
     << "ms), fh speedup " << dp_med / dpi_fh_med << "x (" << dpi_fh_med << "ms vs "
     << dp_med << "ms)";
  note = os.str();
  return ih_ok && fh_ok;
}

bool fh_monotone_stages(std::string& note) {
  double worst_rise = -std::numeric_limits<double>::infinity();
  for (unsigned long long seed = 0; seed < 20; ++seed) {
    int n = 2 + static_cast<int>(seed % 5);
    int stages = 2 + static_cast<int>(seed % 4);
    RandomModelSpec spec;
    spec.seed = seed + 1700;
    spec.n = n;
    spec.m = 2;
    spec.actions_per_agent = 2;
    spec.branching = n < 3 ? n : 3;
    spec.mode = HorizonType::Finite;
    spec.stages = stages;
    CoMdp mdp = build_random_comdp(spec);
    FeatureMatrix f = build_features(BasisSpec::parse("identity"), mdp);
    NonstationaryPolicy pi0;
    for (int k = 0; k < stages; ++k) pi0.stages.push_back(pick_policy(mdp, seed * 50 + k));
    FhSolveOptions opts;
    opts.verify = true;
    FhSolveResult res = solve_fh_dpi_alp(mdp, pi0, f, StateWeights::uniform(n), opts);

    for (int k = 0; k < stages; ++k) {
      const Vector* prev = nullptr;
      for (const StageStart& s : res.trace.starts)
        if (s.stage == k) prev = &*s.j_exact;
      for (const DpiIterationRecord& rec : res.trace.records) {
        if (rec.stage != k) continue;
        worst_rise = std::max(worst_rise, (*rec.j_exact - *prev).maxCoeff());
        prev = &*rec.j_exact;
      }
    }
  }
  std::ostringstream os;
  os << "worst per-iteration rise " << worst_rise;
  note = os.str();
  return worst_rise <= 1e-9;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int idx, const char* label, bool ok, const std::string& note) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << idx << "  " << label;
    if (!note.empty()) std::cout << " (" << note << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  std::string note;
  report(1, "identity-basis evaluation matches exact values", identity_matches_exact(note), note);
  report(2, "approximate evaluation lower-bounds exact values", alp_is_lower_bound(note), note);
  report(3, "infinite-horizon bound suite exits clean", cli_bound_suite("ih", note), note);
  report(4, "finite-horizon bound suite exits clean", cli_bound_suite("fh", note), note);
  report(5, "tiny instances: solvers meet brute force, sweep fixed points are per-agent optimal",
         tiny_optimality(note), note);
  report(6, "sweep does per-agent sums of expectations, joint does products",
         op_count_ratios(note), note);
  report(7, "4x4 grid structure: 256 states, slip row, reduction factor 64",
         grid_reproduction(note), note);
  report(8, "median runtimes: approximate solver at least 2x faster", runtime_ordering(note), note);
  report(9, "identity-basis stage costs never rise within a stage", fh_monotone_stages(note), note);

  if (failures == 0) std::cout << "all criteria passed\n";
  else std::cout << failures << " criteria failed\n";
  return failures;
}
