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

// Reference solvers. BruteForce enumerates every binary assignment of a model
// and solves the remaining LP; it is the ground truth for the branch and
// bound. ExpandMdpBaseline folds the held bundle into the state and lets the
// agent drop everything or pick resources one at a time at switching states.

#ifndef RMP_BASELINES_HPP_
#define RMP_BASELINES_HPP_

#include <cstddef>
#include <vector>

#include "rmp/constrained.hpp"
#include "rmp/linprog.hpp"
#include "rmp/mdp.hpp"
#include "rmp/srmp.hpp"

namespace rmp {

struct OracleResult {
  bool feasible = false;
  double objective = -kInf;
  std::vector<double> values;     // full point of the best assignment
  std::vector<int> binaries;      // variable indices, model order
  std::vector<int> assignment;    // value of each entry of `binaries`
  long enumerated = 0;
  double wall_seconds = 0.0;
};

// Exact optimum of `model` by enumeration. Throws Error(kTooManyBinaries)
// above `binary_cap` binaries and Error(kLpUnbounded) when some assignment
// has an unbounded LP.
OracleResult BruteForce(const MilpModel& model, int binary_cap = 22);

struct ExpandConfig {
  SolverConfig solver;
  // Expanded states allowed before Error(kStateSpaceTooLarge).
  std::size_t max_states = 200'000;
};

struct ExpandResult {
  double value = 0.0;
  PhasePlan plan;
  double wall_seconds = 0.0;
  int expanded_states = 0;
  SolveInfo info;
};

// State (i, bundle, reconfiguring). At an eligible switching state the agent
// may drop its whole bundle and then pick resources one at a time, in
// increasing index order so that every bundle has one canonical path. Only
// capacity-feasible bundles exist. One binary per eligible cost unit gates
// the drop action at its states.
ExpandResult ExpandMdpBaseline(const Mdp& mdp, const InitialDistribution& alpha,
                               const CapacitySpec& cap,
                               const PhaseSwitchSpec& spec,
                               const ExpandConfig& config = {});

}  // namespace rmp

#endif  // RMP_BASELINES_HPP_
