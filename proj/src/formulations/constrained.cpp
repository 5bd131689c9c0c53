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

#include "rmp/constrained.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mdp/flow.hpp"
#include "rmp/errors.hpp"

namespace rmp {

bool CapacitySpec::Feasible(const ResourceBundle& bundle) const {
  for (int c = 0; c < num_capacities(); ++c) {
    double used = 0.0;
    for (int o : bundle.held) used += tau[o][c];
    if (used > tau_hat[c] + 1e-9) return false;
  }
  return true;
}

std::vector<ResourceBundle> CapacitySpec::FeasibleBundles(
    std::size_t cap) const {
  const int n = num_resources();
  if (n > 30) {
    throw Error(ErrorCode::kStateSpaceTooLarge, "too many resources to enumerate");
  }
  std::vector<ResourceBundle> out;
  // Depth-first in resource order so bundles come out sorted and pruned.
  ResourceBundle cur;
  std::vector<double> used(num_capacities(), 0.0);
  auto rec = [&](auto&& self, int next) -> void {
    out.push_back(cur);
    if (out.size() > cap) {
      throw Error(ErrorCode::kStateSpaceTooLarge,
                  "more than " + std::to_string(cap) + " feasible bundles");
    }
    for (int o = next; o < n; ++o) {
      bool ok = true;
      for (int c = 0; c < num_capacities(); ++c) {
        if (used[c] + tau[o][c] > tau_hat[c] + 1e-9) ok = false;
      }
      if (!ok) continue;
      for (int c = 0; c < num_capacities(); ++c) used[c] += tau[o][c];
      cur.held.push_back(o);
      self(self, o + 1);
      cur.held.pop_back();
      for (int c = 0; c < num_capacities(); ++c) used[c] -= tau[o][c];
    }
  };
  rec(rec, 0);
  return out;
}

void CapacitySpec::Validate(const Mdp* mdp) const {
  if (static_cast<int>(tau.size()) != num_resources() ||
      static_cast<int>(tau_hat.size()) != num_capacities()) {
    throw Error(ErrorCode::kInvalidInput, "capacity tables have wrong shape");
  }
  for (const auto& row : tau) {
    if (static_cast<int>(row.size()) != num_capacities()) {
      throw Error(ErrorCode::kInvalidInput, "capacity cost row has wrong size");
    }
    for (double v : row) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidInput, "capacity costs must be >= 0");
      }
    }
  }
  for (double v : tau_hat) {
    if (!(v >= 0.0)) {
      throw Error(ErrorCode::kInvalidInput, "capacity limits must be >= 0");
    }
  }
  if (!omega_hat.empty() &&
      static_cast<int>(omega_hat.size()) != num_resources()) {
    throw Error(ErrorCode::kInvalidInput, "shared limits have wrong size");
  }
  for (int w : omega_hat) {
    if (w < 0) throw Error(ErrorCode::kInvalidInput, "shared limits must be >= 0");
  }
  if (mdp == nullptr) return;
  for (int s = 0; s < mdp->num_states(); ++s) {
    for (const Action& a : mdp->actions(s)) {
      for (int o : a.requires_resources) {
        if (o < 0 || o >= num_resources()) {
          throw Error(ErrorCode::kInvalidInput,
                      "action '" + a.name + "' requires an unknown resource");
        }
      }
    }
  }
}

double ComputeXBound(const Mdp& mdp, const InitialDistribution& alpha,
                     bool use_horizon) {
  if (use_horizon && mdp.has_time()) return mdp.max_time();
  MilpModel model;
  const detail::FlowColumns x = detail::AddFlowColumns(model, mdp, "");
  detail::AddConservationRows(model, mdp, x, alpha.alpha, {}, "");
  for (int k = 0; k < x.count; ++k) model.SetObjective(x.col(k), 1.0);
  const MilpSolution sol = SolveLp(model);
  if (sol.status == SolveStatus::kUnbounded) {
    throw Error(ErrorCode::kLpUnbounded,
                "occupancy is unbounded; the MDP is not transient");
  }
  if (sol.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kLpInfeasible, "occupancy LP is infeasible");
  }
  return sol.objective;
}

ConstrainedModel BuildConstrainedMilp(const Mdp& mdp,
                                      const InitialDistribution& alpha,
                                      const CapacitySpec& cap,
                                      double x_bound) {
  ConstrainedModel out;
  out.x_bound = x_bound;
  MilpModel& m = out.model;
  const detail::FlowColumns x = detail::AddFlowColumns(m, mdp, "");
  out.x_first = x.first;
  detail::AddConservationRows(m, mdp, x, alpha.alpha, {}, "");
  detail::AddRewardObjective(m, mdp, x);
  for (int o = 0; o < cap.num_resources(); ++o) {
    out.delta.push_back(m.AddBinary("D_o" + std::to_string(o)));
  }
  const double inv = x_bound > 0.0 ? 1.0 / x_bound : 1.0;
  std::vector<std::vector<Term>> link(cap.num_resources());
  for (int s = 0; s < mdp.num_states(); ++s) {
    for (int a = 0; a < mdp.num_actions(s); ++a) {
      for (int o : mdp.action(s, a).requires_resources) {
        link[o].push_back({x.col(mdp.sa(s, a)), inv});
      }
    }
  }
  for (int o = 0; o < cap.num_resources(); ++o) {
    link[o].push_back({out.delta[o], -1.0});
    m.AddConstraint("link_o" + std::to_string(o), std::move(link[o]),
                    Relation::kLessEqual, 0.0);
  }
  for (int c = 0; c < cap.num_capacities(); ++c) {
    std::vector<Term> row;
    for (int o = 0; o < cap.num_resources(); ++o) {
      if (cap.tau[o][c] != 0.0) row.push_back({out.delta[o], cap.tau[o][c]});
    }
    m.AddConstraint("cap_c" + std::to_string(c), std::move(row),
                    Relation::kLessEqual, cap.tau_hat[c]);
  }
  return out;
}

ResourceBundle UsedResources(const Mdp& mdp, const OccupationMeasure& x,
                             double tol) {
  std::vector<int> used;
  for (int s = 0; s < mdp.num_states(); ++s) {
    for (int a = 0; a < mdp.num_actions(s); ++a) {
      if (x.x[mdp.sa(s, a)] <= tol) continue;
      for (int o : mdp.action(s, a).requires_resources) used.push_back(o);
    }
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  return {used};
}

Mdp RestrictToBundle(const Mdp& mdp, const ResourceBundle& bundle) {
  Mdp out;
  for (int s = 0; s < mdp.num_states(); ++s) {
    out.AddState(mdp.state_name(s), mdp.time(s));
  }
  for (int s = 0; s < mdp.num_states(); ++s) {
    for (const Action& a : mdp.actions(s)) {
      const bool ok = std::all_of(a.requires_resources.begin(),
                                  a.requires_resources.end(),
                                  [&](int o) { return bundle.Holds(o); });
      if (ok) out.AddAction(s, a);
    }
  }
  return out;
}

ConstrainedResult SolveConstrained(const Mdp& mdp,
                                   const InitialDistribution& alpha,
                                   const CapacitySpec& cap,
                                   const SolverConfig& config) {
  return SolveConstrained(mdp, alpha, cap, ComputeXBound(mdp, alpha), config);
}

ConstrainedResult SolveConstrained(const Mdp& mdp,
                                   const InitialDistribution& alpha,
                                   const CapacitySpec& cap, double x_bound,
                                   const SolverConfig& config) {
  const ConstrainedModel cm = BuildConstrainedMilp(mdp, alpha, cap, x_bound);
  const MilpSolution sol = SolveMilp(cm.model, config);
  ConstrainedResult out;
  out.info.status = sol.status;
  out.info.stats = sol.stats;
  out.info.bound = sol.bound;
  out.info.num_vars = cm.model.num_vars();
  out.info.num_rows = cm.model.num_rows();
  out.info.num_binaries = cm.model.num_binaries();
  if (!sol.has_solution()) {
    throw Error(sol.status == SolveStatus::kGapLimit ? ErrorCode::kLimitReached
                                                     : ErrorCode::kLpInfeasible,
                std::string("constrained MILP: ") + ToString(sol.status));
  }
  detail::FlowColumns x{cm.x_first, mdp.num_state_actions()};
  out.x = detail::ReadFlow(mdp, x, sol.values);
  out.value = sol.objective;
  out.policy = ExtractPolicy(mdp, out.x);
  out.bundle = UsedResources(mdp, out.x);
  return out;
}

}  // namespace rmp
