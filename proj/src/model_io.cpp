#include "comdp/model_io.hpp"

#include <fstream>
#include <stdexcept>

namespace comdp {

namespace {

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const Json& j) {
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

}  // namespace

Json model_to_json(const CoMdp& mdp) {
  Json j;
  j["n"] = mdp.num_states();
  j["m"] = mdp.num_agents();
  Json actions = Json::array();
  for (int x = 0; x < mdp.num_states(); ++x) {
    Json per_agent = Json::array();
    for (int i = 0; i < mdp.num_agents(); ++i) per_agent.push_back(mdp.actions(x, i));
    actions.push_back(std::move(per_agent));
  }
  j["agent_actions"] = std::move(actions);

  Json transitions = Json::array();
  for (int x = 0; x < mdp.num_states(); ++x) {
    for (const JointAction& u : joint_actions(mdp, x)) {
      Json rows = Json::array();
      mdp.row(x, u).for_each([&](int y, double p, double g) {
        rows.push_back(Json{{"y", y}, {"p", p}, {"g", g}});
      });
      transitions.push_back(Json{{"x", x}, {"u", u.u}, {"rows", std::move(rows)}});
    }
  }
  j["transitions"] = std::move(transitions);

  const Horizon& h = mdp.horizon();
  if (h.type == HorizonType::Finite) {
    j["horizon"] = Json{{"type", "finite"},
                        {"N", h.stages},
                        {"terminal", vector_to_json(h.terminal_cost)}};
  } else {
    j["horizon"] = Json{{"type", "infinite"}, {"alpha", h.discount}};
  }
  if (mdp.grid_meta) {
    j["meta"] = Json{{"grid", Json{{"h", mdp.grid_meta->h},
                                   {"flies", mdp.grid_meta->fly_cells}}}};
  }
  return j;
}

CoMdp model_from_json(const Json& j) {
  int n = j.at("n").get<int>();
  int m = j.at("m").get<int>();
  std::vector<std::vector<std::vector<int>>> actions(n);
  const Json& ja = j.at("agent_actions");
  if (static_cast<int>(ja.size()) != n)
    throw std::invalid_argument("agent_actions must have one entry per state");
  for (int x = 0; x < n; ++x) {
    for (const Json& set : ja[x])
      actions[x].push_back(set.get<std::vector<int>>());
  }

  Horizon horizon;
  const Json& jh = j.at("horizon");
  std::string type = jh.at("type").get<std::string>();
  if (type == "finite") {
    horizon = Horizon::finite(jh.at("N").get<int>(), vector_from_json(jh.at("terminal")));
  } else if (type == "infinite") {
    horizon = Horizon::infinite(jh.at("alpha").get<double>());
  } else {
    throw std::invalid_argument("unknown horizon type \"" + type + "\"");
  }

  CoMdp mdp(n, m, std::move(actions), std::move(horizon));
  for (const Json& entry : j.at("transitions")) {
    int x = entry.at("x").get<int>();
    JointAction u{entry.at("u").get<std::vector<int>>()};
    std::vector<Transition> rows;
    for (const Json& r : entry.at("rows"))
      rows.push_back({r.at("y").get<int>(), r.at("p").get<double>(),
                      r.at("g").get<double>()});
    mdp.set_row(x, mdp.rank_of(x, u), KernelRow::from_entries(n, std::move(rows)));
  }
  if (j.contains("meta") && j["meta"].contains("grid")) {
    const Json& g = j["meta"]["grid"];
    GridMeta meta;
    meta.h = g.at("h").get<int>();
    auto flies = g.at("flies").get<std::vector<int>>();
    if (flies.size() != 2) throw std::invalid_argument("grid meta needs two fly cells");
    meta.fly_cells = {flies[0], flies[1]};
    mdp.grid_meta = meta;
  }
  return mdp;
}

void save_model(const CoMdp& mdp, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << model_to_json(mdp).dump();
  os << "\n";
}

CoMdp load_model(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  Json j;
  is >> j;
  return model_from_json(j);
}

Json policy_to_json(const JointPolicy& mu) {
  Json actions = Json::array();
  for (int x = 0; x < mu.num_states(); ++x) {
    Json row = Json::array();
    for (int i = 0; i < mu.num_agents(); ++i) row.push_back(mu(x, i));
    actions.push_back(std::move(row));
  }
  return Json{{"type", "stationary"}, {"actions", std::move(actions)}};
}

Json policy_to_json(const NonstationaryPolicy& pi) {
  Json stages = Json::array();
  for (const JointPolicy& mu : pi.stages) stages.push_back(policy_to_json(mu)["actions"]);
  return Json{{"type", "nonstationary"}, {"stages", std::move(stages)}};
}

namespace {

JointPolicy policy_from_actions(const Json& actions) {
  int n = static_cast<int>(actions.size());
  if (n == 0) return {};
  int m = static_cast<int>(actions[0].size());
  JointPolicy mu(n, m);
  for (int x = 0; x < n; ++x)
    for (int i = 0; i < m; ++i) mu(x, i) = actions[x][i].get<int>();
  return mu;
}

}  // namespace

JointPolicy stationary_policy_from_json(const Json& j) {
  if (j.at("type").get<std::string>() != "stationary")
    throw std::invalid_argument("expected a stationary policy");
  return policy_from_actions(j.at("actions"));
}

NonstationaryPolicy nonstationary_policy_from_json(const Json& j) {
  if (j.at("type").get<std::string>() != "nonstationary")
    throw std::invalid_argument("expected a nonstationary policy");
  NonstationaryPolicy pi;
  for (const Json& stage : j.at("stages")) pi.stages.push_back(policy_from_actions(stage));
  return pi;
}

Json record_to_json(const StageStart& start) {
  Json j{{"stage", start.stage},
         {"iteration", 0},
         {"j_alp", vector_to_json(start.j_alp)},
         {"lp_pivots", start.lp_pivots}};
  if (start.j_exact) j["j_exact"] = vector_to_json(*start.j_exact);
  if (start.beta) j["beta"] = *start.beta;
  return j;
}

Json record_to_json(const DpiIterationRecord& rec) {
  Json j{{"stage", rec.stage},
         {"iteration", rec.iteration},
         {"policy", policy_to_json(rec.policy)},
         {"j_alp", vector_to_json(rec.j_alp)},
         {"changed_states", rec.changed_states},
         {"wall_ms", rec.wall_ms},
         {"lp_pivots", rec.lp_pivots},
         {"sweep_expectations", rec.sweep_expectations}};
  if (rec.j_exact) j["j_exact"] = vector_to_json(*rec.j_exact);
  if (rec.beta) j["beta"] = *rec.beta;
  return j;
}

Json features_to_json(const FeatureMatrix& f) {
  Json rows = Json::array();
  for (int x = 0; x < f.phi.rows(); ++x) {
    Json row = Json::array();
    for (int c = 0; c < f.phi.cols(); ++c) row.push_back(f.phi(x, c));
    rows.push_back(std::move(row));
  }
  return Json{{"phi", std::move(rows)}};
}

}  // namespace comdp
