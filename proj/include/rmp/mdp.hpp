// Copyright 2026 The rmp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Transient (non-discounted, total-reward) MDPs, policies and occupation
// measures.
//
// Actions are local to their state and addressed by (state, index). The flat
// "state-action" index `Mdp::sa(state, index)` orders every state's actions
// contiguously and is the column order used by all occupancy formulations.
// Probability mass that does not go to a successor leaks out of the system.

#ifndef RMP_MDP_HPP_
#define RMP_MDP_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rmp {

struct Outcome {
  int next = 0;
  double prob = 0.0;
};

struct Action {
  std::string name;
  double reward = 0.0;
  std::vector<Outcome> outcomes;
  // Resources (indices into the capacity spec) this action needs.
  std::vector<int> requires_resources;
};

class Mdp {
 public:
  // time < 0 means no time feature for this state.
  int AddState(std::string name, int time = -1);
  int AddAction(int state, Action action);

  int num_states() const { return static_cast<int>(names_.size()); }
  int num_actions(int state) const {
    return static_cast<int>(actions_[state].size());
  }
  int num_state_actions() const;
  int sa(int state, int action) const { return offset_[state] + action; }

  const Action& action(int state, int a) const { return actions_[state][a]; }
  Action& mutable_action(int state, int a) { return actions_[state][a]; }
  const std::vector<Action>& actions(int state) const {
    return actions_[state];
  }
  const std::string& state_name(int state) const { return names_[state]; }
  int FindState(const std::string& name) const;

  int time(int state) const { return times_[state]; }
  bool has_time() const;
  int max_time() const;

  // First action with no resource requirement, else 0. -1 for sinks.
  int DefaultAction(int state) const;

  // Throws Error(kInvalidInput) on probability or index violations.
  void Validate() const;

 private:
  std::vector<std::string> names_;
  std::vector<int> times_;
  std::vector<std::vector<Action>> actions_;
  std::vector<int> offset_;
};

// Dense over states. Total mass may be below 1 when entry is modeled
// externally.
struct InitialDistribution {
  std::vector<double> alpha;

  static InitialDistribution Point(int num_states, int state);
  std::vector<int> Support(double tol = 0.0) const;
};

// action_dist[s] is a distribution over the actions of s; empty when the
// policy is undefined there (sinks, unreachable states).
struct Policy {
  std::vector<std::vector<double>> action_dist;

  // Action with the largest probability, lowest index on ties; -1 if none.
  int ArgMax(int state) const;
  bool IsDeterministic(double tol = 1e-9) const;
};

// Flat over Mdp::sa indices.
struct OccupationMeasure {
  std::vector<double> x;

  double StateTotal(const Mdp& mdp, int state) const;
  double Total() const;
};

struct TransienceReport {
  bool transient = true;
  std::vector<int> retained_states;
  int steps = 0;
};

TransienceReport CheckTransient(const Mdp& mdp,
                                const InitialDistribution& alpha,
                                int horizon_cap = 10000);
// Throws NonTransientError when CheckTransient fails.
void ValidateTransient(const Mdp& mdp, const InitialDistribution& alpha,
                       int horizon_cap = 10000);

struct UnconstrainedResult {
  double value = 0.0;
  OccupationMeasure x;
};

UnconstrainedResult SolveUnconstrained(const Mdp& mdp,
                                       const InitialDistribution& alpha);

// pi(i, a) = x(i, a) / sum_a x(i, a) where the denominator exceeds 1e-9;
// otherwise the state's default action.
Policy ExtractPolicy(const Mdp& mdp, const OccupationMeasure& x);

// Expected total reward of the chain induced by `policy`. Dense elimination
// with partial pivoting for chains up to 5000 reachable states, Gauss-Seidel
// sweeps above that. Throws Error(kNonConvergent) when the chain is not
// transient.
double EvaluatePolicy(const Mdp& mdp, const Policy& policy,
                      const InitialDistribution& alpha);

// Per-state values of the induced chain (0 for unreachable states).
std::vector<double> PolicyValues(const Mdp& mdp, const Policy& policy,
                                 const InitialDistribution& alpha);

struct ResourceBundle {
  std::vector<int> held;  // sorted resource indices

  bool Holds(int resource) const;
  bool operator==(const ResourceBundle&) const = default;
};

struct Phase {
  ResourceBundle bundle;
  Policy policy;
  // Switching states at which this phase can be entered.
  std::vector<int> anchors;
  OccupationMeasure occupancy;
};

struct PhasePlan {
  std::vector<int> switching_states;
  std::vector<Phase> phases;
  // switching state -> distribution over phase indices
  std::map<int, std::vector<double>> phase_selection;
  double objective = 0.0;
  double reward = 0.0;
  double creation_cost = 0.0;
  // Filled by the fixed-phase solver: value of entering each anchor.
  std::map<int, double> anchor_values;
};

// Product chain over (phase, state): the phase index is resampled from
// phase_selection whenever a switching state is entered and kept otherwise.
double EvaluatePhasePlan(const Mdp& mdp, const PhasePlan& plan,
                         const InitialDistribution& alpha);

// Solves (I - P) v = r for a sparse substochastic chain given as rows of
// (successor, probability). Shared by every chain evaluation.
std::vector<double> SolveChain(
    const std::vector<std::vector<std::pair<int, double>>>& rows,
    const std::vector<double>& reward);

}  // namespace rmp

#endif  // RMP_MDP_HPP_
