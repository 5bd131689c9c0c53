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

// Single-agent mission phasing: the agent may reconfigure its resource bundle
// at a chosen set of switching states. Each phase k has its own occupancy
// x^k, bundle Delta^k and entry flow alpha^k; entry flow is only allowed at
// selected switching states (Lambda_j = 1).

#ifndef RMP_SRMP_HPP_
#define RMP_SRMP_HPP_

#include <string>
#include <vector>

#include "rmp/constrained.hpp"
#include "rmp/linprog.hpp"
#include "rmp/mdp.hpp"

namespace rmp {

enum class SwitchMode { kBudgeted, kCostInObjective, kGrouped };

const char* ToString(SwitchMode mode);

struct PhaseSwitchSpec {
  SwitchMode mode = SwitchMode::kBudgeted;
  // Per state (Budgeted, CostInObjective).
  std::vector<double> lambda;
  // Grouped: group id of every state, and per-group cost.
  std::vector<int> group_of;
  std::vector<double> group_lambda;
  double budget = 0.0;  // unused for CostInObjective

  static PhaseSwitchSpec Budgeted(std::vector<double> lambda, double budget);
  static PhaseSwitchSpec CostInObjective(std::vector<double> lambda);
  static PhaseSwitchSpec Grouped(std::vector<int> group_of,
                                 std::vector<double> group_lambda,
                                 double budget);

  int num_groups() const;
  // Cost unit of `state`: the state itself, or its group.
  int unit_of(int state) const;
  double unit_cost(int unit) const;
  int num_units(int num_states) const;
  bool Eligible(int state) const;
  std::vector<int> EligibleStates(int num_states) const;

  // Throws Error(kInvalidInput); also rejects initial mass at non-eligible
  // states.
  void Validate(const Mdp& mdp, const InitialDistribution& alpha) const;
};

struct SrmpModel {
  MilpModel model;
  int phases = 0;
  std::vector<int> anchor;                // per phase
  std::vector<int> x_first;               // per phase
  std::vector<std::vector<int>> alpha;    // [phase][state], -1 if absent
  std::vector<std::vector<int>> delta;    // [phase][resource]
  std::vector<int> lambda;                // per cost unit, -1 if ineligible
  double x_bound = 0.0;
};

// One phase index per eligible state. Phase k can only be entered at its
// anchor state; its entry flow at any other switching state is <= 0 and
// records a departure. One phase per switching state always suffices, so this
// only removes interchangeable copies of the same solution.
SrmpModel BuildSrmpMilp(const Mdp& mdp, const InitialDistribution& alpha,
                        const CapacitySpec& cap, const PhaseSwitchSpec& spec,
                        double x_bound);

PhasePlan ExtractPhasePlan(const SrmpModel& model, const Mdp& mdp,
                           const CapacitySpec& cap,
                           const PhaseSwitchSpec& spec,
                           const MilpSolution& solution);

PhasePlan SolveSrmp(const Mdp& mdp, const InitialDistribution& alpha,
                    const CapacitySpec& cap, const PhaseSwitchSpec& spec,
                    const SolverConfig& config = {}, SolveInfo* info = nullptr);

// Values of the anchors after each evaluation step.
struct AbstractTrace {
  std::vector<std::vector<double>> values;
  int iterations = 0;
};

// Policy iteration over phases anchored at `fixed_states`, each phase solved
// as a capacity-constrained MDP whose exits into switching states pay the
// current value of the state entered.
PhasePlan SolveFixedPhasesAbstract(const Mdp& mdp,
                                   const InitialDistribution& alpha,
                                   const CapacitySpec& cap,
                                   const std::vector<int>& fixed_states,
                                   const SolverConfig& config = {},
                                   AbstractTrace* trace = nullptr,
                                   int max_iterations = 1000);

}  // namespace rmp

#endif  // RMP_SRMP_HPP_
