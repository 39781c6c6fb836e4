// Command-line front end: gen-env | solve | bench | verify-bounds.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "comdp/alp.hpp"
#include "comdp/dpi.hpp"
#include "comdp/envs.hpp"
#include "comdp/exact_dp.hpp"
#include "comdp/model_io.hpp"
#include "comdp/rng.hpp"

namespace {

using namespace comdp;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct ModeArg {
  HorizonType type = HorizonType::Infinite;
  int stages = 0;
  double alpha = 0.0;
};

// "fh:N" or "ih:alpha"
ModeArg parse_mode(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("--mode", "expected fh:N or ih:alpha");
  std::string head = text.substr(0, colon), arg = text.substr(colon + 1);
  ModeArg mode;
  try {
    if (head == "fh") {
      mode.type = HorizonType::Finite;
      mode.stages = std::stoi(arg);
    } else if (head == "ih") {
      mode.type = HorizonType::Infinite;
      mode.alpha = std::stod(arg);
    } else {
      throw std::invalid_argument(head);
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError("--mode", "expected fh:N or ih:alpha, got \"" + text + "\"");
  }
  return mode;
}

std::array<int, 2> parse_flies(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError("--flies", "expected two cells, e.g. 0,15");
  try {
    return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--flies", "expected two cells, e.g. 0,15");
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

JointPolicy first_action_policy(const CoMdp& mdp) {
  JointPolicy mu(mdp.num_states(), mdp.num_agents());
  for (int x = 0; x < mdp.num_states(); ++x)
    for (int i = 0; i < mdp.num_agents(); ++i) mu(x, i) = mdp.actions(x, i).front();
  return mu;
}

JointPolicy random_action_policy(const CoMdp& mdp, unsigned long long seed) {
  Rng rng(seed);
  JointPolicy mu(mdp.num_states(), mdp.num_agents());
  for (int x = 0; x < mdp.num_states(); ++x)
    for (int i = 0; i < mdp.num_agents(); ++i) {
      const std::vector<int>& set = mdp.actions(x, i);
      mu(x, i) = set[rng.uniform_int(0, static_cast<int>(set.size()) - 1)];
    }
  return mu;
}

// States whose cost we aggregate in reports: everything except grid goals.
std::vector<int> start_states(const CoMdp& mdp) {
  std::vector<int> out;
  for (int x = 0; x < mdp.num_states(); ++x) {
    if (mdp.grid_meta) {
      int cells = mdp.grid_meta->h * mdp.grid_meta->h;
      int c1 = x / cells, c2 = x % cells;
      auto f = mdp.grid_meta->fly_cells;
      if ((c1 == f[0] && c2 == f[1]) || (c1 == f[1] && c2 == f[0])) continue;
    }
    out.push_back(x);
  }
  return out;
}

Json cost_summary(const CoMdp& mdp, const Vector& j) {
  std::vector<int> starts = start_states(mdp);
  double sum = 0.0, mx = -std::numeric_limits<double>::infinity();
  for (int x : starts) {
    sum += j[x];
    mx = std::max(mx, j[x]);
  }
  return Json{{"mean", sum / static_cast<double>(starts.size())}, {"max", mx}};
}

void write_json(const Json& j, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << j.dump(2) << "\n";
}

// Everything one solver run produces that reports care about.
struct RunOutcome {
  double wall_ms = 0.0;
  long long iterations = 0;      // sweeps (dpi), improvement rounds (pi), sweeps (vi)
  int iterations_per_stage = 0;  // max over stages, finite-horizon methods
  long long lp_pivots = 0;
  int d = 0;  // basis columns, approximate methods only
  std::string stop_reason;
  bool stationary = true;
  JointPolicy policy;
  NonstationaryPolicy npolicy;
  Vector values;  // solver's own values at stage 0 / fixed point
  DpiTrace trace;
};

struct SolveArgs {
  std::string method;
  std::string basis;  // empty = pick default
  std::string weights_path;
  double tol = 1e-9;
  int max_iterations = 100;
  int max_iters_per_stage = 50;
  double stop_eps = 1e-9;
  std::string init = "first";
  unsigned long long seed = 1;
  bool verify = false;
  std::string lp_dump_dir;
};

StateWeights load_weights(const CoMdp& mdp, const std::string& path) {
  if (path.empty()) return StateWeights::uniform(mdp.num_states());
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  Json j;
  is >> j;
  StateWeights w;
  w.c.resize(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) w.c[static_cast<int>(i)] = j[i].get<double>();
  return w;
}

RunOutcome run_solver(const CoMdp& mdp, const SolveArgs& args) {
  bool finite = mdp.horizon().type == HorizonType::Finite;
  RunOutcome out;
  if (args.method == "vi") {
    auto t0 = Clock::now();
    ValueIterationResult r = value_iteration(mdp, args.tol);
    out.wall_ms = ms_since(t0);
    out.iterations = r.iterations;
    out.policy = std::move(r.policy);
    out.values = std::move(r.j.values);
  } else if (args.method == "pi-joint") {
    JointPolicy mu0 = args.init == "random" ? random_action_policy(mdp, args.seed)
                                            : first_action_policy(mdp);
    auto t0 = Clock::now();
    PolicyIterationResult r = policy_iteration_joint(mdp, mu0);
    out.wall_ms = ms_since(t0);
    out.iterations = r.iterations;
    out.policy = std::move(r.policy);
    out.values = std::move(r.j.values);
  } else if (args.method == "dp-fh") {
    auto t0 = Clock::now();
    FiniteHorizonDpResult r = finite_horizon_dp(mdp);
    out.wall_ms = ms_since(t0);
    out.iterations = mdp.horizon().stages;
    out.iterations_per_stage = 1;
    out.stationary = false;
    out.npolicy = std::move(r.policy);
    out.values = std::move(r.stage_values[0]);
  } else {  // dpi-alp
    std::string basis = args.basis;
    if (basis.empty()) basis = mdp.grid_meta ? "grid-distance" : "identity";
    FeatureMatrix f = build_features(BasisSpec::parse(basis), mdp);
    StateWeights w = load_weights(mdp, args.weights_path);
    out.d = f.dim();
    if (finite) {
      NonstationaryPolicy pi0;
      for (int k = 0; k < mdp.horizon().stages; ++k)
        pi0.stages.push_back(args.init == "random"
                                 ? random_action_policy(mdp, args.seed + k)
                                 : first_action_policy(mdp));
      FhSolveOptions opts;
      opts.max_iters_per_stage = args.max_iters_per_stage;
      opts.stop_eps = args.stop_eps;
      opts.verify = args.verify;
      opts.lp_dump_dir = args.lp_dump_dir;
      auto t0 = Clock::now();
      FhSolveResult r = solve_fh_dpi_alp(mdp, pi0, f, w, opts);
      out.wall_ms = ms_since(t0);
      for (int c : r.iterations_per_stage) {
        out.iterations += c;
        out.iterations_per_stage = std::max(out.iterations_per_stage, c);
      }
      out.lp_pivots = r.lp_pivots;
      out.stationary = false;
      out.npolicy = std::move(r.policy);
      out.values = std::move(r.stage_values[0]);
      out.trace = std::move(r.trace);
    } else {
      JointPolicy mu0 = args.init == "random" ? random_action_policy(mdp, args.seed)
                                              : first_action_policy(mdp);
      IhSolveOptions opts;
      opts.max_iterations = args.max_iterations;
      opts.stop_eps = args.stop_eps;
      opts.verify = args.verify;
      opts.lp_dump_dir = args.lp_dump_dir;
      auto t0 = Clock::now();
      IhSolveResult r = solve_ih_dpi_alp(mdp, mu0, f, w, opts);
      out.wall_ms = ms_since(t0);
      out.iterations = r.sweeps;
      out.lp_pivots = r.lp_pivots;
      out.stop_reason = r.stop_reason;
      out.policy = std::move(r.policy);
      out.values = std::move(r.j_alp);
      out.trace = std::move(r.trace);
    }
  }
  return out;
}

bool method_matches_horizon(const std::string& method, const CoMdp& mdp) {
  bool finite = mdp.horizon().type == HorizonType::Finite;
  if (method == "vi" || method == "pi-joint") return !finite;
  if (method == "dp-fh") return finite;
  return true;  // dpi-alp handles both
}

int cmd_gen_env(const std::string& kind, int grid_h, const std::string& flies,
                double slip, const std::string& mode_text, unsigned long long seed,
                double collision_penalty, double wall_penalty, double stage_cost,
                int rnd_n, int rnd_m, int rnd_actions, int rnd_branching,
                double cost_lo, double cost_hi, const std::string& out_path) {
  ModeArg mode = parse_mode(mode_text);
  CoMdp mdp = [&]() {
    if (kind == "grid") {
      GridSpec spec;
      spec.h = grid_h;
      spec.fly_cells = flies.empty() ? std::array<int, 2>{0, grid_h * grid_h - 1}
                                     : parse_flies(flies);
      spec.slip_p = slip;
      spec.collision_penalty = collision_penalty;
      spec.wall_penalty = wall_penalty;
      spec.stage_cost = stage_cost;
      spec.mode = mode.type;
      spec.stages = mode.stages;
      spec.alpha = mode.alpha;
      return build_spiders_and_flies(spec);
    }
    RandomModelSpec spec;
    spec.seed = seed;
    spec.n = rnd_n;
    spec.m = rnd_m;
    spec.actions_per_agent = rnd_actions;
    spec.branching = rnd_branching;
    spec.cost_lo = cost_lo;
    spec.cost_hi = cost_hi;
    spec.mode = mode.type;
    spec.stages = mode.stages;
    spec.alpha = mode.alpha;
    return build_random_comdp(spec);
  }();

  std::vector<std::string> bad = validate(mdp);
  if (!bad.empty()) {
    for (const std::string& v : bad) std::cerr << "invalid model: " << v << "\n";
    return 1;
  }
  save_model(mdp, out_path);
  Json info{{"n", mdp.num_states()},
            {"m", mdp.num_agents()},
            {"joint_actions", mdp.joint_action_count(0)},
            {"out", out_path}};
  std::cout << info.dump() << "\n";
  return 0;
}

int cmd_solve(const std::string& model_path, const SolveArgs& args,
              const std::string& out_policy, const std::string& out_trace,
              const std::string& out_summary) {
  CoMdp mdp = load_model(model_path);
  std::vector<std::string> bad = validate(mdp);
  if (!bad.empty()) {
    for (const std::string& v : bad) std::cerr << "invalid model: " << v << "\n";
    return 1;
  }
  if (!method_matches_horizon(args.method, mdp)) {
    std::cerr << "method " << args.method << " does not fit the model's horizon\n";
    return 2;
  }
  RunOutcome out = run_solver(mdp, args);

  Json summary{{"method", args.method},
               {"n", mdp.num_states()},
               {"m", mdp.num_agents()},
               {"iterations", out.iterations},
               {"wall_ms", out.wall_ms},
               {"lp_pivots", out.lp_pivots}};
  if (args.method == "dpi-alp") {
    summary["sweeps"] = out.iterations;
    summary["d"] = out.d;
    summary["dim_reduction_factor"] = static_cast<double>(mdp.num_states()) / out.d;
    if (!out.stop_reason.empty()) summary["stop_reason"] = out.stop_reason;
    if (mdp.horizon().type == HorizonType::Finite)
      summary["iterations_per_stage"] = out.iterations_per_stage;
    Json betas = Json::array();
    for (const StageStart& s : out.trace.starts)
      if (s.beta) betas.push_back(*s.beta);
    for (const DpiIterationRecord& r : out.trace.records)
      if (r.beta) betas.push_back(*r.beta);
    if (!betas.empty()) summary["beta_per_iter"] = std::move(betas);
  }
  if (args.verify) {
    // Approximate evaluation does not make the last policy the best one seen;
    // with exact values in the trace, report the best instead (stationary case).
    if (args.method == "dpi-alp" && out.stationary) {
      double best = std::numeric_limits<double>::infinity();
      long long best_iter = -1;
      auto mean_cost = [&](const Vector& j) {
        double s = 0.0;
        std::vector<int> starts = start_states(mdp);
        for (int x : starts) s += j[x];
        return s / static_cast<double>(starts.size());
      };
      for (const DpiIterationRecord& r : out.trace.records) {
        if (!r.j_exact) continue;
        double c = mean_cost(*r.j_exact);
        if (c < best) {
          best = c;
          best_iter = r.iteration;
          out.policy = r.policy;
        }
      }
      if (best_iter >= 0) summary["reported_iteration"] = best_iter;
    }
    Vector exact = out.stationary
                       ? evaluate_policy_exact_ih(mdp, out.policy).values
                       : evaluate_policy_exact_fh(mdp, out.npolicy)[0];
    summary["exact_cost_at_start_states"] = cost_summary(mdp, exact);
  }

  if (!out_policy.empty())
    write_json(out.stationary ? policy_to_json(out.policy) : policy_to_json(out.npolicy),
               out_policy);
  if (!out_trace.empty()) {
    std::ofstream os(out_trace);
    if (!os) throw std::runtime_error("cannot write " + out_trace);
    for (const StageStart& s : out.trace.starts) os << record_to_json(s).dump() << "\n";
    for (const DpiIterationRecord& r : out.trace.records)
      os << record_to_json(r).dump() << "\n";
  }
  if (out_summary.empty()) std::cout << summary.dump(2) << "\n";
  else write_json(summary, out_summary);
  return 0;
}

int cmd_bench(const std::string& config_path, int trials, bool verify,
              const std::string& out_path) {
  std::ifstream is(config_path);
  if (!is) throw std::runtime_error("cannot read " + config_path);
  Json config;
  is >> config;

  struct BenchRow {
    std::string model, method, basis;
    int d = 0;
    long long iterations = 0;
    int iterations_per_stage = 0;
    double wall_ms = 0.0;
    long long lp_pivots = 0;
    std::optional<double> exact_mean, exact_max;
    double n = 0;
  };
  std::vector<BenchRow> rows;

  for (const Json& jr : config.at("rows")) {
    BenchRow row;
    row.model = jr.at("model").get<std::string>();
    row.method = jr.at("method").get<std::string>();
    row.basis = jr.value("basis", std::string());
    CoMdp mdp = load_model(row.model);
    if (!method_matches_horizon(row.method, mdp))
      throw std::runtime_error("method " + row.method + " does not fit " + row.model);
    SolveArgs args;
    args.method = row.method;
    args.basis = row.basis;
    std::vector<double> walls;
    RunOutcome last;
    for (int t = 0; t < trials; ++t) {
      last = run_solver(mdp, args);
      walls.push_back(last.wall_ms);
    }
    row.wall_ms = median(walls);
    row.iterations = last.iterations;
    row.iterations_per_stage = last.iterations_per_stage;
    row.lp_pivots = last.lp_pivots;
    row.d = last.d;
    row.n = mdp.num_states();
    if (verify) {
      Vector exact = last.stationary
                         ? evaluate_policy_exact_ih(mdp, last.policy).values
                         : evaluate_policy_exact_fh(mdp, last.npolicy)[0];
      Json cs = cost_summary(mdp, exact);
      row.exact_mean = cs["mean"].get<double>();
      row.exact_max = cs["max"].get<double>();
    }
    rows.push_back(std::move(row));
  }

  // Baseline for speedups: the exact method benched on the same model.
  auto baseline_wall = [&](const BenchRow& row) -> std::optional<double> {
    for (const BenchRow& b : rows)
      if (b.model == row.model && (b.method == "pi-joint" || b.method == "dp-fh"))
        return b.wall_ms;
    return std::nullopt;
  };

  std::ostringstream csv;
  csv << "# schema=1\n";
  csv << "model,method,basis,d,iterations,iterations_per_stage,wall_ms,"
         "speedup_vs_baseline,dim_reduction_factor,exact_cost_mean,exact_cost_max\n";
  for (const BenchRow& row : rows) {
    csv << row.model << "," << row.method << "," << row.basis << ",";
    if (row.d > 0) csv << row.d;
    csv << "," << row.iterations << ",";
    if (row.iterations_per_stage > 0) csv << row.iterations_per_stage;
    csv << "," << row.wall_ms << ",";
    if (auto base = baseline_wall(row)) csv << (*base / row.wall_ms);
    csv << ",";
    if (row.d > 0) csv << (row.n / row.d);
    csv << ",";
    if (row.exact_mean) csv << *row.exact_mean;
    csv << ",";
    if (row.exact_max) csv << *row.exact_max;
    csv << "\n";
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot write " + out_path);
    os << csv.str();
  }
  return 0;
}

int cmd_verify_bounds(const std::string& suite, int seeds, bool inject_bug,
                      const std::string& out_path, const std::string& dump_dir) {
  BoundSuiteOptions opts;
  opts.seeds = seeds;
  opts.inject_bug = inject_bug;
  bool ih = suite == "ih";
  BoundSuiteResult res = ih ? run_bound_suite_ih(opts) : run_bound_suite_fh(opts);

  Json report{{"suite", suite},
              {"seeds", seeds},
              {"all_hold", res.all_hold},
              {"worst_slack", res.worst_slack},
              {"worst_seed", res.worst_seed},
              {"max_beta", res.max_beta}};
  Json failures = Json::array();
  for (const SeedOutcome& o : res.outcomes) {
    if (o.holds) continue;
    failures.push_back(Json{{"seed", o.seed},
                            {"worst_slack", o.worst_slack},
                            {"beta", o.beta},
                            {"n", o.n},
                            {"d", o.d}});
  }
  report["failures"] = std::move(failures);

  if (!res.all_hold) {
    // Serialize the worst instance so the failure can be replayed offline.
    BoundSuiteInstance inst =
        ih ? make_bound_instance_ih(res.worst_seed) : make_bound_instance_fh(res.worst_seed);
    std::filesystem::create_directories(dump_dir.empty() ? "." : dump_dir);
    std::string path = (dump_dir.empty() ? "." : dump_dir) + "/bound_failure_" + suite +
                       "_seed" + std::to_string(res.worst_seed) + ".json";
    Json dump{{"suite", suite},
              {"seed", res.worst_seed},
              {"model", model_to_json(inst.model)},
              {"features", features_to_json(inst.features)},
              {"policy", ih ? policy_to_json(inst.mu) : policy_to_json(inst.pi)}};
    write_json(dump, path);
    report["failure_dump"] = path;
  }

  if (out_path.empty()) std::cout << report.dump(2) << "\n";
  else write_json(report, out_path);
  return res.all_hold ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cooperative multi-agent MDP toolkit"};
  app.require_subcommand(1);

  // gen-env
  auto* gen = app.add_subcommand("gen-env", "generate a model file");
  std::string kind = "grid", flies, mode_text = "ih:0.9", gen_out = "model.json";
  int grid_h = 4;
  double slip = 0.7, collision_penalty = 2.0, wall_penalty = 1.0, stage_cost = 1.0;
  unsigned long long gen_seed = 1;
  int rnd_n = 10, rnd_m = 2, rnd_actions = 2, rnd_branching = 3;
  double cost_lo = 0.0, cost_hi = 1.0;
  gen->add_option("--kind", kind)->check(CLI::IsMember({"grid", "random"}));
  gen->add_option("--grid", grid_h, "grid side length")->check(CLI::Range(2, 64));
  gen->add_option("--flies", flies, "fly cells, e.g. 0,15 (default: opposite corners)");
  gen->add_option("--slip", slip, "probability of moving as intended")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--mode", mode_text, "fh:N or ih:alpha");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--collision-penalty", collision_penalty);
  gen->add_option("--wall-penalty", wall_penalty);
  gen->add_option("--stage-cost", stage_cost);
  gen->add_option("--n", rnd_n, "random model: states");
  gen->add_option("--m", rnd_m, "random model: agents");
  gen->add_option("--actions", rnd_actions, "random model: actions per agent");
  gen->add_option("--branching", rnd_branching, "random model: successors per row");
  gen->add_option("--cost-lo", cost_lo);
  gen->add_option("--cost-hi", cost_hi);
  gen->add_option("--out", gen_out);

  // solve
  auto* solve = app.add_subcommand("solve", "solve a model file");
  std::string model_path, out_policy, out_trace, out_summary;
  SolveArgs sargs;
  solve->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  solve->add_option("--method", sargs.method)
      ->required()
      ->check(CLI::IsMember({"dpi-alp", "pi-joint", "vi", "dp-fh"}));
  solve->add_option("--basis", sargs.basis,
                    "identity | aggregation:k | grid-distance | poly:degree");
  solve->add_option("--weights", sargs.weights_path, "state weights JSON array");
  solve->add_option("--tol", sargs.tol, "value-iteration stopping tolerance");
  solve->add_option("--iters", sargs.max_iterations, "sweep cap");
  solve->add_option("--stage-iters", sargs.max_iters_per_stage, "per-stage sweep cap");
  solve->add_option("--stop-eps", sargs.stop_eps);
  solve->add_option("--init", sargs.init)->check(CLI::IsMember({"first", "random"}));
  solve->add_option("--seed", sargs.seed);
  solve->add_flag("--verify", sargs.verify, "add exact evaluations to trace and summary");
  solve->add_option("--dump-lp", sargs.lp_dump_dir, "dump evaluation LPs to a directory");
  solve->add_option("--out-policy", out_policy);
  solve->add_option("--out-trace", out_trace, "JSON-lines trace");
  solve->add_option("--out-summary", out_summary, "summary JSON (default: stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark config, emit CSV");
  std::string config_path, bench_out;
  int trials = 5;
  bool bench_verify = false;
  bench->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  bench->add_option("--trials", trials)->check(CLI::Range(1, 1000));
  bench->add_flag("--verify", bench_verify, "add exact-cost columns");
  bench->add_option("--out", bench_out, "CSV path (default: stdout)");

  // verify-bounds
  auto* vb = app.add_subcommand("verify-bounds", "randomized improvement-bound suites");
  std::string suite, vb_out, vb_dump = ".";
  int seeds = 100;
  bool inject_bug = false;
  vb->add_option("--suite", suite)->required()->check(CLI::IsMember({"ih", "fh"}));
  vb->add_option("--seeds", seeds)->check(CLI::Range(1, 100000));
  vb->add_flag("--inject-bug", inject_bug,
               "feed the sweep corrupted values (detector self-test)");
  vb->add_option("--out", vb_out, "report JSON path (default: stdout)");
  vb->add_option("--dump-dir", vb_dump, "where to dump a failing instance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen_env(kind, grid_h, flies, slip, mode_text, gen_seed,
                         collision_penalty, wall_penalty, stage_cost, rnd_n, rnd_m,
                         rnd_actions, rnd_branching, cost_lo, cost_hi, gen_out);
    if (solve->parsed())
      return cmd_solve(model_path, sargs, out_policy, out_trace, out_summary);
    if (bench->parsed()) return cmd_bench(config_path, trials, bench_verify, bench_out);
    if (vb->parsed()) return cmd_verify_bounds(suite, seeds, inject_bug, vb_out, vb_dump);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
