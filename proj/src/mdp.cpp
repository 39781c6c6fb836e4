#include "comdp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace comdp {

namespace {

// Sparse storage pays off only when a row is mostly zeros.
bool keep_sparse(int nonzeros, int n) { return 10 * nonzeros <= n; }

std::string action_tuple_string(const CoMdp& mdp, int x, long long rank) {
  // Decode the rank back into action ids for readable messages.
  int m = mdp.num_agents();
  std::vector<int> pos(m, 0);
  for (int i = m - 1; i >= 0; --i) {
    long long k = static_cast<long long>(mdp.actions(x, i).size());
    pos[i] = static_cast<int>(rank % k);
    rank /= k;
  }
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < m; ++i)
    os << (i ? "," : "") << mdp.actions(x, i)[pos[i]];
  os << ")";
  return os.str();
}

}  // namespace

Horizon Horizon::finite(int stages, Vector terminal_cost) {
  Horizon h;
  h.type = HorizonType::Finite;
  h.stages = stages;
  h.terminal_cost = std::move(terminal_cost);
  return h;
}

Horizon Horizon::infinite(double discount) {
  Horizon h;
  h.type = HorizonType::Infinite;
  h.discount = discount;
  return h;
}

KernelRow KernelRow::from_entries(int n, std::vector<Transition> entries) {
  entries.erase(std::remove_if(entries.begin(), entries.end(),
                               [](const Transition& t) { return t.p == 0.0; }),
                entries.end());
  std::sort(entries.begin(), entries.end(),
            [](const Transition& a, const Transition& b) { return a.y < b.y; });
  KernelRow r;
  r.n_ = n;
  if (keep_sparse(static_cast<int>(entries.size()), n)) {
    r.dense_ = false;
    r.entries_ = std::move(entries);
  } else {
    r.dense_ = true;
    r.p_ = Vector::Zero(n);
    r.g_ = Vector::Zero(n);
    for (const Transition& t : entries) {
      r.p_[t.y] = t.p;
      r.g_[t.y] = t.g;
    }
  }
  return r;
}

KernelRow KernelRow::from_dense(const Vector& p, const Vector& g) {
  std::vector<Transition> entries;
  for (int y = 0; y < p.size(); ++y)
    if (p[y] != 0.0) entries.push_back({y, p[y], g[y]});
  return from_entries(static_cast<int>(p.size()), std::move(entries));
}

int KernelRow::nonzeros() const {
  if (!dense_) return static_cast<int>(entries_.size());
  return static_cast<int>((p_.array() != 0.0).count());
}

double KernelRow::prob_sum() const {
  if (dense_) return p_.sum();
  double s = 0.0;
  for (const Transition& t : entries_) s += t.p;
  return s;
}

double KernelRow::min_prob() const {
  if (dense_) return p_.size() ? p_.minCoeff() : 0.0;
  double mn = 0.0;  // absent entries carry zero mass
  for (const Transition& t : entries_) mn = std::min(mn, t.p);
  return mn;
}

double KernelRow::expected(const Vector& j, double discount) const {
  if (dense_) return p_.dot(g_) + discount * p_.dot(j);
  double s = 0.0;
  for (const Transition& t : entries_) s += t.p * (t.g + discount * j[t.y]);
  return s;
}

double KernelRow::expected_cost() const {
  if (dense_) return p_.dot(g_);
  double s = 0.0;
  for (const Transition& t : entries_) s += t.p * t.g;
  return s;
}

JointAction JointPolicy::action(int x) const {
  JointAction u;
  u.u.resize(num_agents());
  for (int i = 0; i < num_agents(); ++i) u.u[i] = a_(x, i);
  return u;
}

CoMdp::CoMdp(int n, int m, std::vector<std::vector<std::vector<int>>> agent_actions,
             Horizon horizon)
    : n_(n), m_(m), actions_(std::move(agent_actions)), horizon_(std::move(horizon)) {
  if (n_ <= 0) throw std::invalid_argument("state count must be positive");
  if (m_ <= 0) throw std::invalid_argument("agent count must be positive");
  if (static_cast<int>(actions_.size()) != n_)
    throw std::invalid_argument("agent_actions must have one entry per state");
  offset_.resize(n_ + 1, 0);
  for (int x = 0; x < n_; ++x) {
    if (static_cast<int>(actions_[x].size()) != m_)
      throw std::invalid_argument("agent_actions must list every agent per state");
    long long count = 1;
    for (const auto& set : actions_[x]) {
      if (set.empty())
        throw std::invalid_argument("empty action set at state " + std::to_string(x));
      count *= static_cast<long long>(set.size());
    }
    offset_[x + 1] = offset_[x] + count;
  }
  rows_.resize(offset_[n_]);
}

long long CoMdp::joint_action_count(int x) const {
  return offset_[x + 1] - offset_[x];
}

int CoMdp::position_of(int x, int agent, int action_id) const {
  const std::vector<int>& set = actions_[x][agent];
  for (int k = 0; k < static_cast<int>(set.size()); ++k)
    if (set[k] == action_id) return k;
  return -1;
}

long long CoMdp::rank_of_positions(int x, const int* positions) const {
  long long rank = 0;
  for (int i = 0; i < m_; ++i)
    rank = rank * static_cast<long long>(actions_[x][i].size()) + positions[i];
  return rank;
}

long long CoMdp::rank_of(int x, const JointAction& u) const {
  if (static_cast<int>(u.u.size()) != m_)
    throw std::invalid_argument("joint action has wrong agent count");
  long long rank = 0;
  for (int i = 0; i < m_; ++i) {
    int pos = position_of(x, i, u.u[i]);
    if (pos < 0)
      throw std::invalid_argument("action " + std::to_string(u.u[i]) +
                                  " not available to agent " + std::to_string(i) +
                                  " at state " + std::to_string(x));
    rank = rank * static_cast<long long>(actions_[x][i].size()) + pos;
  }
  return rank;
}

void CoMdp::set_row(int x, long long rank, KernelRow row) {
  rows_[offset_[x] + rank] = std::move(row);
}

const KernelRow& CoMdp::policy_row(int x, const JointPolicy& mu) const {
  long long rank = 0;
  for (int i = 0; i < m_; ++i) {
    int pos = position_of(x, i, mu(x, i));
    if (pos < 0)
      throw std::invalid_argument("policy action " + std::to_string(mu(x, i)) +
                                  " not available to agent " + std::to_string(i) +
                                  " at state " + std::to_string(x));
    rank = rank * static_cast<long long>(actions_[x][i].size()) + pos;
  }
  return row(x, rank);
}

std::vector<std::string> validate(const CoMdp& mdp) {
  std::vector<std::string> out;
  const Horizon& h = mdp.horizon();
  if (h.type == HorizonType::Infinite) {
    if (!(h.discount > 0.0 && h.discount < 1.0))
      out.push_back("discount factor must lie strictly inside (0,1)");
  } else {
    if (h.stages < 1) out.push_back("finite horizon needs at least one stage");
    if (h.terminal_cost.size() != mdp.num_states())
      out.push_back("terminal cost must have one entry per state");
    else if (!h.terminal_cost.allFinite())
      out.push_back("terminal cost has non-finite entries");
  }
  for (int x = 0; x < mdp.num_states(); ++x) {
    for (long long rank = 0; rank < mdp.joint_action_count(x); ++rank) {
      const KernelRow& row = mdp.row(x, rank);
      std::string where =
          "state " + std::to_string(x) + " action " + action_tuple_string(mdp, x, rank);
      if (row.size() != mdp.num_states() || row.nonzeros() == 0) {
        out.push_back("missing transition row at " + where);
        continue;
      }
      if (row.min_prob() < 0.0)
        out.push_back("negative probability at " + where);
      double sum = row.prob_sum();
      if (std::abs(sum - 1.0) > 1e-12)
        out.push_back("probabilities at " + where + " sum to " + std::to_string(sum));
      bool bad_entry = false;
      row.for_each([&](int y, double p, double g) {
        if (y < 0 || y >= mdp.num_states() || !std::isfinite(p) || !std::isfinite(g))
          bad_entry = true;
      });
      if (bad_entry) out.push_back("out-of-range or non-finite entry at " + where);
    }
  }
  return out;
}

std::vector<JointAction> joint_actions(const CoMdp& mdp, int x) {
  int m = mdp.num_agents();
  std::vector<JointAction> out;
  out.reserve(static_cast<size_t>(mdp.joint_action_count(x)));
  std::vector<int> pos(m, 0);
  for (;;) {
    JointAction u;
    u.u.resize(m);
    for (int i = 0; i < m; ++i) u.u[i] = mdp.actions(x, i)[pos[i]];
    out.push_back(std::move(u));
    int i = m - 1;
    while (i >= 0 && ++pos[i] == static_cast<int>(mdp.actions(x, i).size())) {
      pos[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

double expected_stage_value(const CoMdp& mdp, int x, const JointAction& u,
                            const Vector& j, double discount) {
  return mdp.row(x, u).expected(j, discount);
}

Vector stage_cost_under(const CoMdp& mdp, const JointPolicy& mu) {
  Vector g(mdp.num_states());
  for (int x = 0; x < mdp.num_states(); ++x)
    g[x] = mdp.policy_row(x, mu).expected_cost();
  return g;
}

Matrix transition_matrix_under(const CoMdp& mdp, const JointPolicy& mu) {
  Matrix p = Matrix::Zero(mdp.num_states(), mdp.num_states());
  for (int x = 0; x < mdp.num_states(); ++x)
    mdp.policy_row(x, mu).for_each([&](int y, double py, double) { p(x, y) = py; });
  return p;
}

std::vector<std::string> validate_policy(const CoMdp& mdp, const JointPolicy& mu) {
  std::vector<std::string> out;
  if (mu.num_states() != mdp.num_states() || mu.num_agents() != mdp.num_agents()) {
    out.push_back("policy shape does not match the model");
    return out;
  }
  for (int x = 0; x < mdp.num_states(); ++x)
    for (int i = 0; i < mdp.num_agents(); ++i)
      if (mdp.position_of(x, i, mu(x, i)) < 0)
        out.push_back("agent " + std::to_string(i) + " at state " + std::to_string(x) +
                      " picks unavailable action " + std::to_string(mu(x, i)));
  return out;
}

std::vector<std::string> validate_policy(const CoMdp& mdp, const NonstationaryPolicy& pi) {
  std::vector<std::string> out;
  if (mdp.horizon().type != HorizonType::Finite ||
      static_cast<int>(pi.stages.size()) != mdp.horizon().stages) {
    out.push_back("stage count does not match the horizon");
    return out;
  }
  for (size_t k = 0; k < pi.stages.size(); ++k) {
    for (const std::string& v : validate_policy(mdp, pi.stages[k]))
      out.push_back("stage " + std::to_string(k) + ": " + v);
  }
  return out;
}

}  // namespace comdp
