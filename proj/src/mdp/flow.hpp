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

// Shared builders for occupancy-measure columns and conservation rows.

#ifndef RMP_SRC_MDP_FLOW_HPP_
#define RMP_SRC_MDP_FLOW_HPP_

#include <string>
#include <vector>

#include "rmp/linprog.hpp"
#include "rmp/mdp.hpp"

namespace rmp::detail {

struct FlowColumns {
  int first = 0;
  int count = 0;
  int col(int sa) const { return first + sa; }
};

// One nonnegative x column per state-action, named x<tag>_s<i>_a<k>.
FlowColumns AddFlowColumns(MilpModel& model, const Mdp& mdp,
                           const std::string& tag);

// sum_a x(j,a) - sum_{i,a} p(i,a,j) x(i,a) - extra_j = rhs_j for every j.
// extra[j] < 0 means no extra term. Returns the row indices.
std::vector<int> AddConservationRows(MilpModel& model, const Mdp& mdp,
                                     const FlowColumns& x,
                                     const std::vector<double>& rhs,
                                     const std::vector<int>& extra,
                                     const std::string& tag);

// Adds r(i,a) * scale to the objective of every flow column.
void AddRewardObjective(MilpModel& model, const Mdp& mdp, const FlowColumns& x,
                        double scale = 1.0);

OccupationMeasure ReadFlow(const Mdp& mdp, const FlowColumns& x,
                           const std::vector<double>& values);

// Largest conservation residual of an occupation measure.
double ConservationResidual(const Mdp& mdp, const std::vector<double>& x,
                            const std::vector<double>& alpha);

}  // namespace rmp::detail

#endif  // RMP_SRC_MDP_FLOW_HPP_
