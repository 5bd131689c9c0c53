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

#include "rmp/srmp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mdp/flow.hpp"
#include "rmp/errors.hpp"

namespace rmp {

namespace {

constexpr double kFlowTol = 1e-9;

void FillInfo(const MilpModel& model, const MilpSolution& sol,
              SolveInfo* info) {
  if (info == nullptr) return;
  info->status = sol.status;
  info->stats = sol.stats;
  info->bound = sol.bound;
  info->num_vars = model.num_vars();
  info->num_rows = model.num_rows();
  info->num_binaries = model.num_binaries();
}

}  // namespace

const char* ToString(SwitchMode mode) {
  switch (mode) {
    case SwitchMode::kBudgeted:
      return "budgeted";
    case SwitchMode::kCostInObjective:
      return "cost";
    case SwitchMode::kGrouped:
      return "grouped";
  }
  return "?";
}

PhaseSwitchSpec PhaseSwitchSpec::Budgeted(std::vector<double> lambda,
                                          double budget) {
  PhaseSwitchSpec s;
  s.mode = SwitchMode::kBudgeted;
  s.lambda = std::move(lambda);
  s.budget = budget;
  return s;
}

PhaseSwitchSpec PhaseSwitchSpec::CostInObjective(std::vector<double> lambda) {
  PhaseSwitchSpec s;
  s.mode = SwitchMode::kCostInObjective;
  s.lambda = std::move(lambda);
  return s;
}

PhaseSwitchSpec PhaseSwitchSpec::Grouped(std::vector<int> group_of,
                                         std::vector<double> group_lambda,
                                         double budget) {
  PhaseSwitchSpec s;
  s.mode = SwitchMode::kGrouped;
  s.group_of = std::move(group_of);
  s.group_lambda = std::move(group_lambda);
  s.budget = budget;
  return s;
}

int PhaseSwitchSpec::num_groups() const {
  return static_cast<int>(group_lambda.size());
}

int PhaseSwitchSpec::unit_of(int state) const {
  return mode == SwitchMode::kGrouped ? group_of[state] : state;
}

double PhaseSwitchSpec::unit_cost(int unit) const {
  return mode == SwitchMode::kGrouped ? group_lambda[unit] : lambda[unit];
}

int PhaseSwitchSpec::num_units(int num_states) const {
  return mode == SwitchMode::kGrouped ? num_groups() : num_states;
}

bool PhaseSwitchSpec::Eligible(int state) const {
  if (mode == SwitchMode::kCostInObjective) return true;
  return unit_cost(unit_of(state)) <= budget + 1e-12;
}

std::vector<int> PhaseSwitchSpec::EligibleStates(int num_states) const {
  std::vector<int> out;
  for (int s = 0; s < num_states; ++s) {
    if (Eligible(s)) out.push_back(s);
  }
  return out;
}

void PhaseSwitchSpec::Validate(const Mdp& mdp,
                               const InitialDistribution& alpha) const {
  const int n = mdp.num_states();
  auto nonneg = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double c) { return c >= 0.0 && std::isfinite(c); });
  };
  if (mode == SwitchMode::kGrouped) {
    if (static_cast<int>(group_of.size()) != n) {
      throw Error(ErrorCode::kInvalidInput, "every state needs a group");
    }
    for (int g : group_of) {
      if (g < 0 || g >= num_groups()) {
        throw Error(ErrorCode::kInvalidInput, "group index out of range");
      }
    }
    if (!nonneg(group_lambda)) {
      throw Error(ErrorCode::kInvalidInput, "group costs must be >= 0");
    }
  } else {
    if (static_cast<int>(lambda.size()) != n) {
      throw Error(ErrorCode::kInvalidInput,
                  "switching costs must cover every state");
    }
    if (!nonneg(lambda)) {
      throw Error(ErrorCode::kInvalidInput, "switching costs must be >= 0");
    }
  }
  if (mode != SwitchMode::kCostInObjective && !(budget >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "switching budget must be >= 0");
  }
  for (int s = 0; s < n && s < static_cast<int>(alpha.alpha.size()); ++s) {
    if (alpha.alpha[s] > 0.0 && !Eligible(s)) {
      throw Error(ErrorCode::kInvalidInput,
                  "initial state '" + mdp.state_name(s) +
                      "' cannot be a switching state");
    }
  }
}

SrmpModel BuildSrmpMilp(const Mdp& mdp, const InitialDistribution& alpha,
                        const CapacitySpec& cap, const PhaseSwitchSpec& spec,
                        double x_bound) {
  const int n = mdp.num_states();
  SrmpModel out;
  out.anchor = spec.EligibleStates(n);
  out.phases = static_cast<int>(out.anchor.size());
  out.x_bound = x_bound;
  MilpModel& m = out.model;
  const double inv = x_bound > 0.0 ? 1.0 / x_bound : 1.0;

  for (int k = 0; k < out.phases; ++k) {
    const std::string tag = "k" + std::to_string(k);
    const detail::FlowColumns x = detail::AddFlowColumns(m, mdp, tag);
    out.x_first.push_back(x.first);
    std::vector<int> a(n, -1);
    for (int j = 0; j < n; ++j) {
      // Phase k is entered only at its anchor; elsewhere alpha^k_j <= 0
      // records departures.
      if (spec.Eligible(j)) {
        a[j] = m.AddContinuous("A" + tag + "_s" + std::to_string(j), -kInf,
                               j == out.anchor[k] ? kInf : 0.0);
      }
    }
    detail::AddConservationRows(m, mdp, x, {}, a, tag);
    detail::AddRewardObjective(m, mdp, x);
    out.alpha.push_back(std::move(a));

    std::vector<int> d;
    for (int o = 0; o < cap.num_resources(); ++o) {
      d.push_back(m.AddBinary("D" + tag + "_o" + std::to_string(o)));
    }
    std::vector<std::vector<Term>> link(cap.num_resources());
    for (int s = 0; s < n; ++s) {
      for (int act = 0; act < mdp.num_actions(s); ++act) {
        for (int o : mdp.action(s, act).requires_resources) {
          link[o].push_back({x.col(mdp.sa(s, act)), inv});
        }
      }
    }
    for (int o = 0; o < cap.num_resources(); ++o) {
      link[o].push_back({d[o], -1.0});
      m.AddConstraint("link" + tag + "_o" + std::to_string(o),
                      std::move(link[o]), Relation::kLessEqual, 0.0);
    }
    for (int c = 0; c < cap.num_capacities(); ++c) {
      std::vector<Term> row;
      for (int o = 0; o < cap.num_resources(); ++o) {
        if (cap.tau[o][c] != 0.0) row.push_back({d[o], cap.tau[o][c]});
      }
      m.AddConstraint("cap" + tag + "_c" + std::to_string(c), std::move(row),
                      Relation::kLessEqual, cap.tau_hat[c]);
    }
    out.delta.push_back(std::move(d));
  }

  // Switching decisions, one binary per eligible cost unit.
  const bool grouped = spec.mode == SwitchMode::kGrouped;
  out.lambda.assign(spec.num_units(n), -1);
  for (int j = 0; j < n; ++j) {
    if (!spec.Eligible(j)) continue;
    const int u = spec.unit_of(j);
    if (out.lambda[u] < 0) {
      out.lambda[u] = m.AddBinary((grouped ? "L_g" : "L_s") + std::to_string(u));
    }
  }

  // A phase whose anchor is not a switching state carries no flow, so its
  // bundle can be empty. Cuts symmetric branching on dead phases.
  for (int k = 0; k < out.phases; ++k) {
    const int lam = out.lambda[spec.unit_of(out.anchor[k])];
    for (int o = 0; o < cap.num_resources(); ++o) {
      m.AddConstraint(
          "live_k" + std::to_string(k) + "_o" + std::to_string(o),
          {{out.delta[k][o], 1.0}, {lam, -1.0}}, Relation::kLessEqual, 0.0);
    }
  }

  for (int j = 0; j < n; ++j) {
    if (!spec.Eligible(j)) continue;
    std::vector<Term> split;
    for (int k = 0; k < out.phases; ++k) {
      split.push_back({out.alpha[k][j], 1.0});
      if (out.anchor[k] != j) continue;
      m.AddConstraint("enter_k" + std::to_string(k) + "_s" + std::to_string(j),
                      {{out.alpha[k][j], inv},
                       {out.lambda[spec.unit_of(j)], -1.0}},
                      Relation::kLessEqual, 0.0);
    }
    const double a = j < static_cast<int>(alpha.alpha.size()) ? alpha.alpha[j]
                                                               : 0.0;
    m.AddConstraint("split_s" + std::to_string(j), std::move(split),
                    Relation::kEqual, a);
  }

  std::vector<Term> cost;
  for (int u = 0; u < static_cast<int>(out.lambda.size()); ++u) {
    if (out.lambda[u] >= 0 && spec.unit_cost(u) != 0.0) {
      cost.push_back({out.lambda[u], spec.unit_cost(u)});
    }
  }
  if (spec.mode == SwitchMode::kCostInObjective) {
    for (const Term& t : cost) m.AddToObjective(t.var, -t.coef);
  } else {
    m.AddConstraint("budget", std::move(cost), Relation::kLessEqual,
                    spec.budget);
  }
  return out;
}

PhasePlan ExtractPhasePlan(const SrmpModel& model, const Mdp& mdp,
                           const CapacitySpec& cap,
                           const PhaseSwitchSpec& spec,
                           const MilpSolution& solution) {
  (void)cap;
  const int n = mdp.num_states();
  const auto& v = solution.values;
  PhasePlan plan;
  plan.objective = solution.objective;

  for (int u = 0; u < static_cast<int>(model.lambda.size()); ++u) {
    if (model.lambda[u] >= 0 && v[model.lambda[u]] > 0.5) {
      plan.creation_cost += spec.unit_cost(u);
    }
  }
  for (int j = 0; j < n; ++j) {
    if (!spec.Eligible(j)) continue;
    const int var = model.lambda[spec.unit_of(j)];
    if (v[var] > 0.5) plan.switching_states.push_back(j);
  }

  for (int k = 0; k < model.phases; ++k) {
    const detail::FlowColumns cols{model.x_first[k], mdp.num_state_actions()};
    OccupationMeasure x = detail::ReadFlow(mdp, cols, v);
    if (x.Total() <= kFlowTol) continue;
    Phase phase;
    phase.policy = ExtractPolicy(mdp, x);
    phase.bundle = UsedResources(mdp, x);
    for (int j = 0; j < n; ++j) {
      if (model.alpha[k][j] >= 0 && v[model.alpha[k][j]] > kFlowTol) {
        phase.anchors.push_back(j);
      }
    }
    for (int s = 0; s < n; ++s) {
      for (int a = 0; a < mdp.num_actions(s); ++a) {
        plan.reward += mdp.action(s, a).reward * x.x[mdp.sa(s, a)];
      }
    }
    phase.occupancy = std::move(x);
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
    for (double& x : w) x /= total;
    plan.phase_selection[i] = std::move(w);
  }
  return plan;
}

PhasePlan SolveSrmp(const Mdp& mdp, const InitialDistribution& alpha,
                    const CapacitySpec& cap, const PhaseSwitchSpec& spec,
                    const SolverConfig& config, SolveInfo* info) {
  cap.Validate(&mdp);
  spec.Validate(mdp, alpha);
  const double x_bound = ComputeXBound(mdp, alpha);
  const SrmpModel model = BuildSrmpMilp(mdp, alpha, cap, spec, x_bound);
  const MilpSolution sol = SolveMilp(model.model, config);
  FillInfo(model.model, sol, info);
  if (!sol.has_solution()) {
    throw Error(sol.status == SolveStatus::kGapLimit ? ErrorCode::kLimitReached
                                                     : ErrorCode::kLpInfeasible,
                std::string("phasing MILP: ") + ToString(sol.status));
  }
  return ExtractPhasePlan(model, mdp, cap, spec, sol);
}

namespace {

// One phase of the abstract solver: the states reachable from its anchor
// without passing through another switching state.
struct AbstractPhase {
  int anchor = 0;
  std::vector<int> global;  // local -> global state
  Mdp mdp;                  // base rewards, exits removed
  // exits[local sa] = (switching state, probability)
  std::vector<std::vector<std::pair<int, double>>> exits;
  std::vector<double> base_reward;  // per local sa
  double x_bound = 0.0;
  Policy policy;
  ResourceBundle bundle;
  OccupationMeasure x;
};

AbstractPhase BuildAbstractPhase(const Mdp& mdp, int anchor,
                                 const std::vector<char>& switching) {
  AbstractPhase ph;
  ph.anchor = anchor;
  std::vector<int> local(mdp.num_states(), -1);
  local[anchor] = 0;
  ph.global.push_back(anchor);
  for (std::size_t q = 0; q < ph.global.size(); ++q) {
    const int s = ph.global[q];
    for (const Action& a : mdp.actions(s)) {
      for (const Outcome& o : a.outcomes) {
        if (switching[o.next] || local[o.next] >= 0) continue;
        local[o.next] = static_cast<int>(ph.global.size());
        ph.global.push_back(o.next);
      }
    }
  }
  for (int g : ph.global) ph.mdp.AddState(mdp.state_name(g), mdp.time(g));
  for (int l = 0; l < static_cast<int>(ph.global.size()); ++l) {
    for (const Action& a : mdp.actions(ph.global[l])) {
      Action b;
      b.name = a.name;
      b.reward = a.reward;
      b.requires_resources = a.requires_resources;
      std::vector<std::pair<int, double>> out;
      for (const Outcome& o : a.outcomes) {
        if (switching[o.next]) {
          out.push_back({o.next, o.prob});
        } else {
          b.outcomes.push_back({local[o.next], o.prob});
        }
      }
      ph.mdp.AddAction(l, std::move(b));
      ph.exits.push_back(std::move(out));
      ph.base_reward.push_back(a.reward);
    }
  }
  return ph;
}

void InjectExitValues(AbstractPhase& ph, const std::vector<double>& value) {
  for (int l = 0; l < ph.mdp.num_states(); ++l) {
    for (int a = 0; a < ph.mdp.num_actions(l); ++a) {
      const int k = ph.mdp.sa(l, a);
      double r = ph.base_reward[k];
      for (const auto& [j, p] : ph.exits[k]) r += p * value[j];
      ph.mdp.mutable_action(l, a).reward = r;
    }
  }
}

// Exact values of entering each anchor under the current phase policies.
std::vector<double> EvaluateAbstract(const std::vector<AbstractPhase>& phases,
                                     const std::vector<int>& phase_of,
                                     int num_states) {
  std::vector<int> offset;
  int total = 0;
  for (const AbstractPhase& ph : phases) {
    offset.push_back(total);
    total += ph.mdp.num_states();
  }
  std::vector<std::vector<std::pair<int, double>>> rows(total);
  std::vector<double> reward(total, 0.0);
  for (std::size_t p = 0; p < phases.size(); ++p) {
    const AbstractPhase& ph = phases[p];
    for (int l = 0; l < ph.mdp.num_states(); ++l) {
      const int node = offset[p] + l;
      const auto& dist = ph.policy.action_dist[l];
      if (dist.empty()) continue;
      for (int a = 0; a < ph.mdp.num_actions(l); ++a) {
        const double w = dist[a];
        if (w <= 0.0) continue;
        const int k = ph.mdp.sa(l, a);
        reward[node] += w * ph.base_reward[k];
        for (const Outcome& o : ph.mdp.action(l, a).outcomes) {
          rows[node].push_back({offset[p] + o.next, w * o.prob});
        }
        for (const auto& [j, prob] : ph.exits[k]) {
          rows[node].push_back({offset[phase_of[j]], w * prob});
        }
      }
    }
  }
  // Restrict to nodes reachable from some anchor so that unvisited states
  // (whose extracted action is arbitrary) never enter the solve.
  std::vector<int> keep(total, -1);
  std::vector<int> order;
  for (std::size_t p = 0; p < phases.size(); ++p) {
    keep[offset[p]] = static_cast<int>(order.size());
    order.push_back(offset[p]);
  }
  for (std::size_t q = 0; q < order.size(); ++q) {
    for (const auto& [nx, prob] : rows[order[q]]) {
      if (prob > 0.0 && keep[nx] < 0) {
        keep[nx] = static_cast<int>(order.size());
        order.push_back(nx);
      }
    }
  }
  std::vector<std::vector<std::pair<int, double>>> sub(order.size());
  std::vector<double> sub_reward(order.size());
  for (std::size_t q = 0; q < order.size(); ++q) {
    sub_reward[q] = reward[order[q]];
    for (const auto& [nx, prob] : rows[order[q]]) {
      if (prob > 0.0) sub[q].push_back({keep[nx], prob});
    }
  }
  const std::vector<double> v = SolveChain(sub, sub_reward);
  std::vector<double> value(num_states, 0.0);
  for (std::size_t p = 0; p < phases.size(); ++p) {
    value[phases[p].anchor] = v[keep[offset[p]]];
  }
  return value;
}

}  // namespace

PhasePlan SolveFixedPhasesAbstract(const Mdp& mdp,
                                   const InitialDistribution& alpha,
                                   const CapacitySpec& cap,
                                   const std::vector<int>& fixed_states,
                                   const SolverConfig& config,
                                   AbstractTrace* trace, int max_iterations) {
  const int n = mdp.num_states();
  cap.Validate(&mdp);
  std::vector<int> anchors = fixed_states;
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  std::vector<char> switching(n, 0);
  std::vector<int> phase_of(n, -1);
  for (std::size_t p = 0; p < anchors.size(); ++p) {
    if (anchors[p] < 0 || anchors[p] >= n) {
      throw Error(ErrorCode::kInvalidInput, "switching state out of range");
    }
    switching[anchors[p]] = 1;
    phase_of[anchors[p]] = static_cast<int>(p);
  }
  for (int s : alpha.Support()) {
    if (!switching[s]) {
      throw Error(ErrorCode::kInvalidInput,
                  "initial state '" + mdp.state_name(s) +
                      "' must be a switching state");
    }
  }

  std::vector<AbstractPhase> phases;
  std::vector<double> value(n, 0.0);
  for (int s : anchors) {
    AbstractPhase ph = BuildAbstractPhase(mdp, s, switching);
    const InitialDistribution start =
        InitialDistribution::Point(ph.mdp.num_states(), 0);
    ph.x_bound = ComputeXBound(ph.mdp, start);
    value[s] = SolveUnconstrained(ph.mdp, start).value;
    phases.push_back(std::move(ph));
  }

  int iter = 0;
  for (;; ++iter) {
    if (iter >= max_iterations) {
      throw Error(ErrorCode::kNonConvergent,
                  "abstract policy iteration did not converge");
    }
    for (AbstractPhase& ph : phases) {
      InjectExitValues(ph, value);
      const InitialDistribution start =
          InitialDistribution::Point(ph.mdp.num_states(), 0);
      ConstrainedResult r =
          SolveConstrained(ph.mdp, start, cap, ph.x_bound, config);
      ph.policy = std::move(r.policy);
      ph.bundle = std::move(r.bundle);
      ph.x = std::move(r.x);
    }
    std::vector<double> next = EvaluateAbstract(phases, phase_of, n);
    if (trace != nullptr) {
      std::vector<double> row;
      for (int s : anchors) row.push_back(next[s]);
      trace->values.push_back(std::move(row));
    }
    double change = 0.0;
    for (int s : anchors) change = std::max(change, std::fabs(next[s] - value[s]));
    value = std::move(next);
    if (iter > 0 && change < 1e-9) break;
  }
  if (trace != nullptr) trace->iterations = iter + 1;

  // Phase occupancies are per entry into the anchor. Expected entries solve
  // e = alpha + B e, where B[q][p] is the mass one entry into phase p sends
  // into anchor q.
  const int K = static_cast<int>(anchors.size());
  std::vector<std::vector<std::pair<int, double>>> inflow(K);
  std::vector<double> start_mass(K, 0.0);
  for (int q = 0; q < K; ++q) {
    if (anchors[q] < static_cast<int>(alpha.alpha.size())) {
      start_mass[q] = alpha.alpha[anchors[q]];
    }
  }
  for (int p = 0; p < K; ++p) {
    std::vector<double> into(K, 0.0);
    for (std::size_t k = 0; k < phases[p].exits.size(); ++k) {
      for (const auto& [j, prob] : phases[p].exits[k]) {
        into[phase_of[j]] += prob * phases[p].x.x[k];
      }
    }
    for (int q = 0; q < K; ++q) {
      if (into[q] > 0.0) inflow[q].push_back({p, into[q]});
    }
  }
  const std::vector<double> entries = SolveChain(inflow, start_mass);

  PhasePlan plan;
  plan.switching_states = anchors;
  for (std::size_t p = 0; p < phases.size(); ++p) {
    const AbstractPhase& ph = phases[p];
    Phase out;
    out.bundle = ph.bundle;
    out.anchors = {ph.anchor};
    out.policy.action_dist.assign(n, {});
    out.occupancy.x.assign(mdp.num_state_actions(), 0.0);
    for (int l = 0; l < ph.mdp.num_states(); ++l) {
      const int g = ph.global[l];
      out.policy.action_dist[g] = ph.policy.action_dist[l];
      for (int a = 0; a < ph.mdp.num_actions(l); ++a) {
        out.occupancy.x[mdp.sa(g, a)] = entries[p] * ph.x.x[ph.mdp.sa(l, a)];
      }
    }
    plan.phases.push_back(std::move(out));
    std::vector<double> sel(anchors.size(), 0.0);
    sel[p] = 1.0;
    plan.phase_selection[ph.anchor] = std::move(sel);
    plan.anchor_values[ph.anchor] = value[ph.anchor];
  }
  for (int s = 0; s < n && s < static_cast<int>(alpha.alpha.size()); ++s) {
    plan.objective += alpha.alpha[s] * value[s];
  }
  plan.reward = plan.objective;
  return plan;
}

}  // namespace rmp
