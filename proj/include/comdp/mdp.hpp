#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "comdp/types.hpp"

namespace comdp {

enum class HorizonType { Finite, Infinite };

// Finite horizon carries the stage count and terminal cost; infinite horizon
// carries the discount factor. Exactly one side is meaningful.
struct Horizon {
  HorizonType type = HorizonType::Infinite;
  int stages = 0;        // N (finite)
  Vector terminal_cost;  // g_N, one entry per state (finite)
  double discount = 0.0; // alpha in (0,1) (infinite)

  static Horizon finite(int stages, Vector terminal_cost);
  static Horizon infinite(double discount);
};

// One (successor, probability, cost) entry of a transition row.
struct Transition {
  int y = 0;
  double p = 0.0;
  double g = 0.0;
};

// Successor distribution plus per-transition costs for one (state, joint
// action). Rows with at most 10% nonzero probabilities keep the entry list;
// denser rows expand to full vectors so expectations stay vectorized.
class KernelRow {
 public:
  KernelRow() = default;
  static KernelRow from_entries(int n, std::vector<Transition> entries);
  static KernelRow from_dense(const Vector& p, const Vector& g);

  bool dense() const { return dense_; }
  int size() const { return n_; }
  int nonzeros() const;
  double prob_sum() const;
  double min_prob() const;

  // sum_y p(y) * (g(y) + discount * j(y))
  double expected(const Vector& j, double discount) const;
  // sum_y p(y) * g(y)
  double expected_cost() const;

  // Visits (y, p, g) for every stored entry with p != 0.
  template <class F>
  void for_each(F&& f) const {
    if (dense_) {
      for (int y = 0; y < n_; ++y)
        if (p_[y] != 0.0) f(y, p_[y], g_[y]);
    } else {
      for (const Transition& t : entries_) f(t.y, t.p, t.g);
    }
  }

 private:
  bool dense_ = false;
  int n_ = 0;
  std::vector<Transition> entries_;  // sparse storage, sorted by y
  Vector p_, g_;                     // dense storage
};

// A joint action is one action id per agent, agent 0 first.
struct JointAction {
  std::vector<int> u;

  bool operator==(const JointAction& o) const { return u == o.u; }
};

// Stationary joint policy: one action id per (state, agent).
class JointPolicy {
 public:
  JointPolicy() = default;
  JointPolicy(int n, int m) { a_.setZero(n, m); }

  int num_states() const { return static_cast<int>(a_.rows()); }
  int num_agents() const { return static_cast<int>(a_.cols()); }
  int operator()(int x, int agent) const { return a_(x, agent); }
  int& operator()(int x, int agent) { return a_(x, agent); }
  JointAction action(int x) const;

  bool operator==(const JointPolicy& o) const {
    return a_.rows() == o.a_.rows() && a_.cols() == o.a_.cols() &&
           (a_.array() == o.a_.array()).all();
  }
  bool operator!=(const JointPolicy& o) const { return !(*this == o); }

 private:
  Eigen::MatrixXi a_;
};

// One joint policy per stage, stage 0 first; length must equal the horizon.
struct NonstationaryPolicy {
  std::vector<JointPolicy> stages;

  bool operator==(const NonstationaryPolicy& o) const { return stages == o.stages; }
};

// Set by the grid-world generator and round-tripped through serialization;
// feature construction that needs grid geometry reads it.
struct GridMeta {
  int h = 0;
  std::array<int, 2> fly_cells{0, 0};
};

// Cooperative multi-agent MDP over states 0..n-1. Each agent i picks from its
// own ordered action set U^i(x); transition and cost rows are stored per
// (state, joint action), joint actions ordered lexicographically by the
// agents' positions in their action sets (agent 0 most significant).
// Immutable once the rows are filled in.
class CoMdp {
 public:
  CoMdp(int n, int m, std::vector<std::vector<std::vector<int>>> agent_actions,
        Horizon horizon);

  int num_states() const { return n_; }
  int num_agents() const { return m_; }
  const Horizon& horizon() const { return horizon_; }

  const std::vector<int>& actions(int x, int agent) const {
    return actions_[x][agent];
  }
  long long joint_action_count(int x) const;
  long long total_rows() const { return static_cast<long long>(rows_.size()); }

  // Position of an action id inside U^agent(x); -1 when absent.
  int position_of(int x, int agent, int action_id) const;

  // Mixed-radix rank of a position tuple (agent 0 most significant).
  long long rank_of_positions(int x, const int* positions) const;
  long long rank_of(int x, const JointAction& u) const;

  void set_row(int x, long long rank, KernelRow row);
  const KernelRow& row(int x, long long rank) const { return rows_[offset_[x] + rank]; }
  const KernelRow& row(int x, const JointAction& u) const { return row(x, rank_of(x, u)); }
  const KernelRow& policy_row(int x, const JointPolicy& mu) const;

  std::optional<GridMeta> grid_meta;

 private:
  int n_, m_;
  std::vector<std::vector<std::vector<int>>> actions_;
  std::vector<long long> offset_;
  std::vector<KernelRow> rows_;
  Horizon horizon_;
};

// Structural checks: action sets non-empty, rows stochastic (sum within 1e-12
// of one, no negative mass), successors in range, horizon parameters sane.
// Returns human-readable violations naming the offending state/action/row.
std::vector<std::string> validate(const CoMdp& mdp);

// Every joint action available at x, in lexicographic position order.
std::vector<JointAction> joint_actions(const CoMdp& mdp, int x);

// sum_y p_xy(u) * (g_xy(u) + discount * j(y))
double expected_stage_value(const CoMdp& mdp, int x, const JointAction& u,
                            const Vector& j, double discount);

// Expected one-stage cost vector g_mu under a stationary policy.
Vector stage_cost_under(const CoMdp& mdp, const JointPolicy& mu);

// Dense row-stochastic transition matrix P_mu under a stationary policy.
Matrix transition_matrix_under(const CoMdp& mdp, const JointPolicy& mu);

// Checks that every policy entry is a member of its agent's action set.
std::vector<std::string> validate_policy(const CoMdp& mdp, const JointPolicy& mu);
std::vector<std::string> validate_policy(const CoMdp& mdp, const NonstationaryPolicy& pi);

}  // namespace comdp
