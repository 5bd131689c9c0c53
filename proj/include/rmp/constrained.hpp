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

// Capacity-constrained one-shot resource selection. An action that needs a
// resource may only carry occupancy when the resource is held, which is
// linearized as sum(u * x) / X <= Delta_o with X an upper bound on total
// occupancy.

#ifndef RMP_CONSTRAINED_HPP_
#define RMP_CONSTRAINED_HPP_

#include <string>
#include <vector>

#include "rmp/linprog.hpp"
#include "rmp/mdp.hpp"

namespace rmp {

// Resource requirements live on the MDP actions (Action::requires_resources);
// this spec carries everything else.
struct CapacitySpec {
  std::vector<std::string> resources;
  std::vector<std::string> capacities;
  std::vector<std::vector<double>> tau;  // [resource][capacity]
  std::vector<double> tau_hat;           // [capacity]
  std::vector<int> omega_hat;            // [resource]; shared copies, optional

  int num_resources() const { return static_cast<int>(resources.size()); }
  int num_capacities() const { return static_cast<int>(capacities.size()); }
  bool Feasible(const ResourceBundle& bundle) const;
  // All capacity-feasible bundles in lexicographic mask order. Throws
  // Error(kStateSpaceTooLarge) when more than `cap` exist.
  std::vector<ResourceBundle> FeasibleBundles(std::size_t cap) const;
  void Validate(const Mdp* mdp = nullptr) const;
};

// Summary of a MILP solve carried alongside formulation results.
struct SolveInfo {
  SolveStatus status = SolveStatus::kOptimal;
  BranchStats stats;
  double bound = 0.0;
  int num_vars = 0;
  int num_rows = 0;
  int num_binaries = 0;
};

// Max total occupancy over the unconstrained feasible region. For MDPs with a
// time feature the horizon max_time() is returned instead when
// `use_horizon` is set.
double ComputeXBound(const Mdp& mdp, const InitialDistribution& alpha,
                     bool use_horizon = true);

struct ConstrainedModel {
  MilpModel model;
  int x_first = 0;
  std::vector<int> delta;  // per resource
  double x_bound = 0.0;
};

ConstrainedModel BuildConstrainedMilp(const Mdp& mdp,
                                      const InitialDistribution& alpha,
                                      const CapacitySpec& cap, double x_bound);

struct ConstrainedResult {
  double value = 0.0;
  ResourceBundle bundle;
  Policy policy;
  OccupationMeasure x;
  SolveInfo info;
};

ConstrainedResult SolveConstrained(const Mdp& mdp,
                                   const InitialDistribution& alpha,
                                   const CapacitySpec& cap,
                                   const SolverConfig& config = {});

// Same, reusing a precomputed occupancy bound.
ConstrainedResult SolveConstrained(const Mdp& mdp,
                                   const InitialDistribution& alpha,
                                   const CapacitySpec& cap, double x_bound,
                                   const SolverConfig& config);

// Resources actually exercised by an occupancy (some requiring action has
// flow above tol).
ResourceBundle UsedResources(const Mdp& mdp, const OccupationMeasure& x,
                             double tol = 1e-9);

// Copy of `mdp` with every action that needs a resource outside `bundle`
// removed.
Mdp RestrictToBundle(const Mdp& mdp, const ResourceBundle& bundle);

}  // namespace rmp

#endif  // RMP_CONSTRAINED_HPP_
