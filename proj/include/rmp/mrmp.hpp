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

// Multiagent mission phasing over a finite horizon. Agents are transition and
// reward independent; they interact only through the shared resource pool,
// which a dummy agent (index 0 of every assignment) absorbs when unused.

#ifndef RMP_MRMP_HPP_
#define RMP_MRMP_HPP_

#include <string>
#include <vector>

#include "rmp/constrained.hpp"
#include "rmp/linprog.hpp"
#include "rmp/mdp.hpp"

namespace rmp {

struct AgentModel {
  std::string name;
  Mdp mdp;  // every state carries a time in [1, horizon]
  InitialDistribution alpha;
};

struct MultiagentProblem {
  std::vector<AgentModel> agents;
  int horizon = 0;
  // Resource pool; omega_hat gives the number of copies of each resource.
  CapacitySpec shared;
  // Optional per-agent capacity limits [agent][capacity], enforced at every
  // time step. Empty disables them.
  std::vector<std::vector<double>> agent_tau_hat;

  int num_agents() const { return static_cast<int>(agents.size()); }
  int num_resources() const { return shared.num_resources(); }
  void Validate() const;
};

enum class ReallocMode {
  kOneShot,
  kFixedSchedule,
  kBudget,
  kEventCost,
  kTransferCost
};

const char* ToString(ReallocMode mode);

struct ReallocSpec {
  ReallocMode mode = ReallocMode::kOneShot;
  std::vector<int> times;   // FixedSchedule; 1 is always added
  std::vector<double> psi;  // Budget/EventCost: cost of reallocating at t=1..T
  double psi_budget = 0.0;
  // TransferCost: c[o][m][t-1] for real agent m (0-based).
  std::vector<std::vector<std::vector<double>>> transfer_cost;

  static ReallocSpec OneShot();
  static ReallocSpec Fixed(std::vector<int> times);
  static ReallocSpec Budget(std::vector<double> psi, double budget);
  static ReallocSpec EventCost(std::vector<double> psi);
  static ReallocSpec Transfer(std::vector<std::vector<std::vector<double>>> c);
  static ReallocSpec UniformTransfer(const MultiagentProblem& problem,
                                     double c);

  void Validate(const MultiagentProblem& problem) const;
};

struct AllocationSchedule {
  std::vector<int> realloc_times;
  // assignment[m][o][t-1]; m = 0 is the dummy agent, m >= 1 the real ones.
  std::vector<std::vector<std::vector<int>>> assignment;
  std::vector<Policy> policies;  // per real agent
  std::vector<OccupationMeasure> occupancy;
  std::vector<double> agent_rewards;
  double reward = 0.0;
  double cost = 0.0;  // reallocation or transfer cost charged
  double utility = 0.0;
  SolveInfo info;

  int held(int agent, int resource, int t) const {
    return assignment[agent][resource][t - 1];
  }
};

struct MrmpModel {
  MilpModel model;
  std::vector<int> x_first;  // per real agent
  // delta[m][o][p]: m = 0 dummy; p indexes the model's allocation periods.
  std::vector<std::vector<std::vector<int>>> delta;
  std::vector<int> period_of_time;  // t-1 -> period index
  std::vector<int> psi;             // t-1 -> binary, -1 if absent
  std::vector<std::vector<std::vector<int>>> eps;  // [m-1][o][t-1]
};

MrmpModel BuildMrmpMilp(const MultiagentProblem& problem,
                        const ReallocSpec& spec);

// Reads a schedule back from any feasible point of the model.
AllocationSchedule ExtractSchedule(const MrmpModel& model,
                                   const MultiagentProblem& problem,
                                   const ReallocSpec& spec,
                                   const MilpSolution& solution);

AllocationSchedule SolveMrmpOneshot(const MultiagentProblem& problem,
                                    const SolverConfig& config = {});

AllocationSchedule SolveMrmp(const MultiagentProblem& problem,
                             const ReallocSpec& spec,
                             const SolverConfig& config = {});

struct ScheduleScore {
  int transfers = 0;
  double reward = 0.0;
  double utility = 0.0;
};

// Re-prices a schedule under a per-unit transfer cost: the assignment is
// canonicalized (unused resources stay with their previous holder), each
// agent's best response to it is recomputed, and every acquisition by a real
// agent, including the initial one, costs `c`.
ScheduleScore ScoreSchedule(const MultiagentProblem& problem,
                            const AllocationSchedule& schedule, double c);

}  // namespace rmp

#endif  // RMP_MRMP_HPP_
