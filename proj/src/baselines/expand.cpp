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

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mdp/flow.hpp"
#include "rmp/baselines.hpp"
#include "rmp/errors.hpp"

namespace rmp {
namespace {

constexpr double kFlowTol = 1e-9;

using Mask = std::uint32_t;

struct ExpandedState {
  int state = 0;
  Mask held = 0;
  bool picking = false;  // inside a reconfiguration at `state`
};

// Which expanded action an expanded state-action is.
struct Origin {
  int action = -1;  // original action index, -1 for drop or pick
  bool drop = false;
};

struct Expansion {
  Mdp mdp;
  std::vector<ExpandedState> states;
  std::vector<Origin> origin;  // per expanded sa
  InitialDistribution alpha;
};

std::uint64_t Key(int state, Mask held, bool picking) {
  return (static_cast<std::uint64_t>(state) << 33) |
         (static_cast<std::uint64_t>(picking) << 32) | held;
}

Mask MaskOf(const std::vector<int>& resources) {
  Mask m = 0;
  for (int o : resources) m |= Mask{1} << o;
  return m;
}

Expansion Expand(const Mdp& mdp, const InitialDistribution& alpha,
                 const CapacitySpec& cap, const PhaseSwitchSpec& spec,
                 std::size_t max_states) {
  if (cap.num_resources() > 31) {
    throw Error(ErrorCode::kStateSpaceTooLarge,
                "expansion supports at most 31 resources");
  }
  std::unordered_map<Mask, bool> feasible;
  for (const ResourceBundle& b : cap.FeasibleBundles(max_states)) {
    feasible[MaskOf(b.held)] = true;
  }

  Expansion out;
  std::unordered_map<std::uint64_t, int> index;
  std::deque<int> queue;
  auto intern = [&](int state, Mask held, bool picking) {
    const auto [it, fresh] =
        index.emplace(Key(state, held, picking), static_cast<int>(index.size()));
    if (fresh) {
      if (index.size() > max_states) {
        throw Error(ErrorCode::kStateSpaceTooLarge,
                    "expanded MDP exceeds " + std::to_string(max_states) +
                        " states");
      }
      std::string name = mdp.state_name(state) + "|b" + std::to_string(held);
      if (picking) name += "|pick";
      out.mdp.AddState(std::move(name));
      out.states.push_back({state, held, picking});
      queue.push_back(it->second);
    }
    return it->second;
  };

  std::vector<double> start;
  for (int s : alpha.Support()) {
    const int e = intern(s, 0, false);
    if (static_cast<int>(start.size()) <= e) start.resize(e + 1, 0.0);
    start[e] = alpha.alpha[s];
  }

  while (!queue.empty()) {
    const int e = queue.front();
    queue.pop_front();
    const ExpandedState es = out.states[e];
    for (int a = 0; a < mdp.num_actions(es.state); ++a) {
      const Action& act = mdp.action(es.state, a);
      const Mask need = MaskOf(act.requires_resources);
      if ((need & ~es.held) != 0) continue;
      Action copy;
      copy.name = act.name;
      copy.reward = act.reward;
      for (const Outcome& oc : act.outcomes) {
        copy.outcomes.push_back({intern(oc.next, es.held, false), oc.prob});
      }
      out.mdp.AddAction(e, std::move(copy));
      out.origin.push_back({a, false});
    }
    if (!spec.Eligible(es.state)) continue;
    if (!es.picking) {
      Action drop;
      drop.name = "drop-all";
      drop.outcomes.push_back({intern(es.state, 0, true), 1.0});
      out.mdp.AddAction(e, std::move(drop));
      out.origin.push_back({-1, true});
      continue;
    }
    int top = -1;
    for (int o = 0; o < cap.num_resources(); ++o) {
      if ((es.held >> o) & 1U) top = o;
    }
    for (int o = top + 1; o < cap.num_resources(); ++o) {
      const Mask next = es.held | (Mask{1} << o);
      if (!feasible.count(next)) continue;
      Action pick;
      pick.name = "pick-" + cap.resources[o];
      pick.outcomes.push_back({intern(es.state, next, true), 1.0});
      out.mdp.AddAction(e, std::move(pick));
      out.origin.push_back({-1, false});
    }
  }
  start.resize(out.states.size(), 0.0);
  out.alpha.alpha = std::move(start);
  return out;
}

}  // namespace

ExpandResult ExpandMdpBaseline(const Mdp& mdp, const InitialDistribution& alpha,
                               const CapacitySpec& cap,
                               const PhaseSwitchSpec& spec,
                               const ExpandConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  cap.Validate(&mdp);
  spec.Validate(mdp, alpha);
  Expansion ex = Expand(mdp, alpha, cap, spec, config.max_states);

  // States are processed in creation order, so `origin` is already in flat
  // state-action order.
  ex.mdp.Validate();

  const int n = mdp.num_states();
  const double x_bound = ComputeXBound(ex.mdp, ex.alpha, false);
  const double inv = x_bound > 0.0 ? 1.0 / x_bound : 1.0;

  MilpModel m;
  const detail::FlowColumns x = detail::AddFlowColumns(m, ex.mdp, "");
  detail::AddConservationRows(m, ex.mdp, x, ex.alpha.alpha, {}, "");
  detail::AddRewardObjective(m, ex.mdp, x);

  std::vector<int> lambda(spec.num_units(n), -1);
  std::vector<std::vector<Term>> gate(n);
  for (int e = 0; e < ex.mdp.num_states(); ++e) {
    for (int a = 0; a < ex.mdp.num_actions(e); ++a) {
      if (ex.origin[ex.mdp.sa(e, a)].drop) {
        gate[ex.states[e].state].push_back({x.col(ex.mdp.sa(e, a)), inv});
      }
    }
  }
  const bool grouped = spec.mode == SwitchMode::kGrouped;
  for (int j = 0; j < n; ++j) {
    if (!spec.Eligible(j) || gate[j].empty()) continue;
    const int u = spec.unit_of(j);
    if (lambda[u] < 0) {
      lambda[u] = m.AddBinary((grouped ? "L_g" : "L_s") + std::to_string(u));
    }
    gate[j].push_back({lambda[u], -1.0});
    m.AddConstraint("gate_s" + std::to_string(j), std::move(gate[j]),
                    Relation::kLessEqual, 0.0);
  }
  // Choosing the first bundle is itself a switch, as in the phasing MILP.
  for (int s : alpha.Support()) {
    const int u = lambda[spec.unit_of(s)];
    if (u >= 0) m.SetBounds(u, 1.0, 1.0);
  }
  std::vector<Term> cost;
  for (int u = 0; u < static_cast<int>(lambda.size()); ++u) {
    if (lambda[u] >= 0 && spec.unit_cost(u) != 0.0) {
      cost.push_back({lambda[u], spec.unit_cost(u)});
    }
  }
  if (spec.mode == SwitchMode::kCostInObjective) {
    for (const Term& t : cost) m.AddToObjective(t.var, -t.coef);
  } else {
    m.AddConstraint("budget", std::move(cost), Relation::kLessEqual,
                    spec.budget);
  }

  const MilpSolution sol = SolveMilp(m, config.solver);
  ExpandResult out;
  out.expanded_states = ex.mdp.num_states();
  out.info.status = sol.status;
  out.info.stats = sol.stats;
  out.info.bound = sol.bound;
  out.info.num_vars = m.num_vars();
  out.info.num_rows = m.num_rows();
  out.info.num_binaries = m.num_binaries();
  if (!sol.has_solution()) {
    throw Error(sol.status == SolveStatus::kGapLimit ? ErrorCode::kLimitReached
                                                     : ErrorCode::kLpInfeasible,
                std::string("expanded MDP: ") + ToString(sol.status));
  }
  out.value = sol.objective;

  // Map back: one phase per held bundle that carries flow.
  PhasePlan& plan = out.plan;
  plan.objective = sol.objective;
  for (int u = 0; u < static_cast<int>(lambda.size()); ++u) {
    if (lambda[u] >= 0 && sol.values[lambda[u]] > 0.5) {
      plan.creation_cost += spec.unit_cost(u);
    }
  }
  for (int j = 0; j < n; ++j) {
    const int u = spec.Eligible(j) ? lambda[spec.unit_of(j)] : -1;
    if (u >= 0 && sol.values[u] > 0.5) plan.switching_states.push_back(j);
  }
  std::map<Mask, OccupationMeasure> flow;
  std::map<Mask, std::vector<int>> anchors;
  for (int e = 0; e < ex.mdp.num_states(); ++e) {
    const ExpandedState& es = ex.states[e];
    for (int a = 0; a < ex.mdp.num_actions(e); ++a) {
      const int sa = ex.mdp.sa(e, a);
      const Origin& o = ex.origin[sa];
      const double v = sol.values[x.col(sa)];
      if (o.action < 0 || v <= kFlowTol) continue;
      OccupationMeasure& occ = flow[es.held];
      if (occ.x.empty()) occ.x.assign(mdp.num_state_actions(), 0.0);
      occ.x[mdp.sa(es.state, o.action)] += v;
      plan.reward += mdp.action(es.state, o.action).reward * v;
      const bool entry = es.picking || ex.alpha.alpha[e] > 0.0;
      auto& list = anchors[es.held];
      if (entry && (list.empty() || list.back() != es.state)) {
        list.push_back(es.state);
      }
    }
  }
  for (auto& [held, occ] : flow) {
    Phase phase;
    phase.policy = ExtractPolicy(mdp, occ);
    phase.bundle = UsedResources(mdp, occ);
    phase.anchors = anchors[held];
    std::sort(phase.anchors.begin(), phase.anchors.end());
    phase.anchors.erase(std::unique(phase.anchors.begin(), phase.anchors.end()),
                        phase.anchors.end());
    phase.occupancy = std::move(occ);
    plan.phases.push_back(std::move(phase));
  }
  for (int i : plan.switching_states) {
    std::vector<double> w;
    double total = 0.0;
    for (const Phase& p : plan.phases) {
      w.push_back(p.occupancy.StateTotal(mdp, i));
      total += w.back();
    }
    if (total <= kFlowTol) continue;
    for (double& v : w) v /= total;
    plan.phase_selection[i] = std::move(w);
  }
  out.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return out;
}

}  // namespace rmp
