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

#include "rmp/mrmp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mdp/flow.hpp"
#include "rmp/errors.hpp"

namespace rmp {

namespace {

constexpr double kFlowTol = 1e-9;

bool PerTime(ReallocMode mode) {
  return mode == ReallocMode::kBudget || mode == ReallocMode::kEventCost ||
         mode == ReallocMode::kTransferCost;
}

std::vector<int> NormalizedTimes(std::vector<int> times, int horizon) {
  times.push_back(1);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  times.erase(std::remove_if(times.begin(), times.end(),
                             [&](int t) { return t < 1 || t > horizon; }),
              times.end());
  return times;
}

std::string Tag(int m, int o, int p) {
  return "_m" + std::to_string(m) + "_o" + std::to_string(o) + "_p" +
         std::to_string(p);
}

}  // namespace

const char* ToString(ReallocMode mode) {
  switch (mode) {
    case ReallocMode::kOneShot:
      return "oneshot";
    case ReallocMode::kFixedSchedule:
      return "fixed";
    case ReallocMode::kBudget:
      return "budget";
    case ReallocMode::kEventCost:
      return "event";
    case ReallocMode::kTransferCost:
      return "transfer";
  }
  return "?";
}

void MultiagentProblem::Validate() const {
  if (horizon < 1) throw Error(ErrorCode::kInvalidInput, "horizon must be >= 1");
  shared.Validate();
  if (static_cast<int>(shared.omega_hat.size()) != num_resources()) {
    throw Error(ErrorCode::kInvalidInput, "every resource needs a pool size");
  }
  if (!agent_tau_hat.empty()) {
    if (static_cast<int>(agent_tau_hat.size()) != num_agents()) {
      throw Error(ErrorCode::kInvalidInput, "per-agent limits have wrong size");
    }
    for (const auto& row : agent_tau_hat) {
      if (static_cast<int>(row.size()) != shared.num_capacities()) {
        throw Error(ErrorCode::kInvalidInput, "per-agent limits have wrong size");
      }
    }
  }
  for (const AgentModel& a : agents) {
    a.mdp.Validate();
    shared.Validate(&a.mdp);
    if (static_cast<int>(a.alpha.alpha.size()) != a.mdp.num_states()) {
      throw Error(ErrorCode::kInvalidInput,
                  a.name + ": initial distribution has wrong size");
    }
    for (int s = 0; s < a.mdp.num_states(); ++s) {
      const int t = a.mdp.time(s);
      if (t < 1 || t > horizon) {
        throw Error(ErrorCode::kInvalidInput,
                    a.name + ": state '" + a.mdp.state_name(s) +
                        "' has no time in [1, horizon]");
      }
      for (const Action& act : a.mdp.actions(s)) {
        for (const Outcome& o : act.outcomes) {
          if (a.mdp.time(o.next) != t + 1) {
            throw Error(ErrorCode::kInvalidInput,
                        a.name + ": transition from '" + a.mdp.state_name(s) +
                            "' does not advance time by one");
          }
        }
      }
    }
  }
}

ReallocSpec ReallocSpec::OneShot() { return {}; }

ReallocSpec ReallocSpec::Fixed(std::vector<int> times) {
  ReallocSpec s;
  s.mode = ReallocMode::kFixedSchedule;
  s.times = std::move(times);
  return s;
}

ReallocSpec ReallocSpec::Budget(std::vector<double> psi, double budget) {
  ReallocSpec s;
  s.mode = ReallocMode::kBudget;
  s.psi = std::move(psi);
  s.psi_budget = budget;
  return s;
}

ReallocSpec ReallocSpec::EventCost(std::vector<double> psi) {
  ReallocSpec s;
  s.mode = ReallocMode::kEventCost;
  s.psi = std::move(psi);
  return s;
}

ReallocSpec ReallocSpec::Transfer(
    std::vector<std::vector<std::vector<double>>> c) {
  ReallocSpec s;
  s.mode = ReallocMode::kTransferCost;
  s.transfer_cost = std::move(c);
  return s;
}

ReallocSpec ReallocSpec::UniformTransfer(const MultiagentProblem& problem,
                                         double c) {
  return Transfer(std::vector(
      problem.num_resources(),
      std::vector(problem.num_agents(), std::vector(problem.horizon, c))));
}

void ReallocSpec::Validate(const MultiagentProblem& problem) const {
  const int horizon = problem.horizon;
  if (mode == ReallocMode::kBudget || mode == ReallocMode::kEventCost) {
    if (static_cast<int>(psi.size()) != horizon) {
      throw Error(ErrorCode::kInvalidInput,
                  "reallocation costs must cover every time step");
    }
    for (double v : psi) {
      if (!(v >= 0.0)) throw Error(ErrorCode::kInvalidInput, "costs must be >= 0");
    }
    if (mode == ReallocMode::kBudget && !(psi_budget >= 0.0)) {
      throw Error(ErrorCode::kInvalidInput, "budget must be >= 0");
    }
  }
  if (mode == ReallocMode::kFixedSchedule) {
    for (int t : times) {
      if (t < 1 || t > horizon) {
        throw Error(ErrorCode::kInvalidInput, "reallocation time out of range");
      }
    }
  }
  if (mode == ReallocMode::kTransferCost) {
    bool ok = static_cast<int>(transfer_cost.size()) == problem.num_resources();
    for (const auto& per_agent : transfer_cost) {
      ok = ok && static_cast<int>(per_agent.size()) == problem.num_agents();
      for (const auto& per_time : per_agent) {
        ok = ok && static_cast<int>(per_time.size()) == horizon;
        for (double v : per_time) ok = ok && v >= 0.0;
      }
    }
    if (!ok) {
      throw Error(ErrorCode::kInvalidInput,
                  "transfer costs must be >= 0 for every resource, agent, time");
    }
  }
}

MrmpModel BuildMrmpMilp(const MultiagentProblem& problem,
                        const ReallocSpec& spec) {
  const int agents = problem.num_agents();
  const int res = problem.num_resources();
  const int horizon = problem.horizon;
  MrmpModel out;
  MilpModel& m = out.model;

  // Allocation periods.
  std::vector<int> starts;
  if (spec.mode == ReallocMode::kOneShot) {
    starts = {1};
  } else if (spec.mode == ReallocMode::kFixedSchedule) {
    starts = NormalizedTimes(spec.times, horizon);
  } else {
    starts.resize(horizon);
    std::iota(starts.begin(), starts.end(), 1);
  }
  const int periods = static_cast<int>(starts.size());
  out.period_of_time.assign(horizon, 0);
  for (int t = 1, p = 0; t <= horizon; ++t) {
    if (p + 1 < periods && starts[p + 1] == t) ++p;
    out.period_of_time[t - 1] = p;
  }

  out.delta.assign(agents + 1, std::vector(res, std::vector<int>(periods, -1)));
  for (int o = 0; o < res; ++o) {
    for (int p = 0; p < periods; ++p) {
      out.delta[0][o][p] =
          m.AddContinuous("D" + Tag(0, o, p), 0.0, problem.shared.omega_hat[o]);
    }
  }

  for (int a = 0; a < agents; ++a) {
    const AgentModel& ag = problem.agents[a];
    const std::string tag = "m" + std::to_string(a + 1);
    const detail::FlowColumns x = detail::AddFlowColumns(m, ag.mdp, tag);
    out.x_first.push_back(x.first);
    detail::AddConservationRows(m, ag.mdp, x, ag.alpha.alpha, {}, tag);
    detail::AddRewardObjective(m, ag.mdp, x);

    for (int o = 0; o < res; ++o) {
      for (int p = 0; p < periods; ++p) {
        out.delta[a + 1][o][p] = m.AddBinary("D" + Tag(a + 1, o, p));
      }
    }
    // Linking: per period, (usage)/scale <= Delta.
    const double mass = std::accumulate(ag.alpha.alpha.begin(),
                                        ag.alpha.alpha.end(), 0.0);
    const double scale = PerTime(spec.mode) ? std::max(1.0, mass)
                                            : static_cast<double>(horizon);
    std::vector<std::vector<std::vector<Term>>> link(
        res, std::vector<std::vector<Term>>(periods));
    for (int s = 0; s < ag.mdp.num_states(); ++s) {
      const int p = out.period_of_time[ag.mdp.time(s) - 1];
      for (int k = 0; k < ag.mdp.num_actions(s); ++k) {
        for (int o : ag.mdp.action(s, k).requires_resources) {
          link[o][p].push_back({x.col(ag.mdp.sa(s, k)), 1.0 / scale});
        }
      }
    }
    for (int o = 0; o < res; ++o) {
      for (int p = 0; p < periods; ++p) {
        if (link[o][p].empty()) continue;
        link[o][p].push_back({out.delta[a + 1][o][p], -1.0});
        m.AddConstraint("link" + Tag(a + 1, o, p), std::move(link[o][p]),
                        Relation::kLessEqual, 0.0);
      }
    }
    if (!problem.agent_tau_hat.empty()) {
      for (int c = 0; c < problem.shared.num_capacities(); ++c) {
        for (int p = 0; p < periods; ++p) {
          std::vector<Term> row;
          for (int o = 0; o < res; ++o) {
            if (problem.shared.tau[o][c] != 0.0) {
              row.push_back({out.delta[a + 1][o][p], problem.shared.tau[o][c]});
            }
          }
          m.AddConstraint("cap_m" + std::to_string(a + 1) + "_c" +
                              std::to_string(c) + "_p" + std::to_string(p),
                          std::move(row), Relation::kLessEqual,
                          problem.agent_tau_hat[a][c]);
        }
      }
    }
  }

  for (int o = 0; o < res; ++o) {
    for (int p = 0; p < periods; ++p) {
      std::vector<Term> row;
      for (int a = 0; a <= agents; ++a) row.push_back({out.delta[a][o][p], 1.0});
      m.AddConstraint("pool_o" + std::to_string(o) + "_p" + std::to_string(p),
                      std::move(row), Relation::kEqual,
                      problem.shared.omega_hat[o]);
    }
  }

  out.psi.assign(horizon, -1);
  if (spec.mode == ReallocMode::kBudget || spec.mode == ReallocMode::kEventCost) {
    for (int t = 1; t <= horizon; ++t) {
      out.psi[t - 1] = m.AddBinary("P_t" + std::to_string(t));
    }
    m.SetBounds(out.psi[0], 1.0, 1.0);
    for (int a = 1; a <= agents; ++a) {
      for (int o = 0; o < res; ++o) {
        for (int t = 2; t <= horizon; ++t) {
          m.AddConstraint("switch" + Tag(a, o, t - 1),
                          {{out.delta[a][o][t - 1], 1.0},
                           {out.delta[a][o][t - 2], -1.0},
                           {out.psi[t - 1], -1.0}},
                          Relation::kLessEqual, 0.0);
        }
      }
    }
    if (spec.mode == ReallocMode::kBudget) {
      std::vector<Term> row;
      for (int t = 1; t <= horizon; ++t) {
        if (spec.psi[t - 1] != 0.0) row.push_back({out.psi[t - 1], spec.psi[t - 1]});
      }
      m.AddConstraint("budget", std::move(row), Relation::kLessEqual,
                      spec.psi_budget);
    } else {
      for (int t = 1; t <= horizon; ++t) {
        m.AddToObjective(out.psi[t - 1], -spec.psi[t - 1]);
      }
    }
  }

  if (spec.mode == ReallocMode::kTransferCost) {
    out.eps.assign(agents, std::vector(res, std::vector<int>(horizon, -1)));
    for (int a = 1; a <= agents; ++a) {
      for (int o = 0; o < res; ++o) {
        for (int t = 1; t <= horizon; ++t) {
          const int e = m.AddContinuous("E" + Tag(a, o, t - 1));
          out.eps[a - 1][o][t - 1] = e;
          m.AddToObjective(e, -spec.transfer_cost[o][a - 1][t - 1]);
          if (t == 1) {
            m.AddConstraint("acq" + Tag(a, o, 0),
                            {{e, 1.0}, {out.delta[a][o][0], -1.0}},
                            Relation::kEqual, 0.0);
          } else {
            m.AddConstraint("acq" + Tag(a, o, t - 1),
                            {{e, 1.0},
                             {out.delta[a][o][t - 1], -1.0},
                             {out.delta[a][o][t - 2], 1.0}},
                            Relation::kGreaterEqual, 0.0);
          }
        }
      }
    }
  }
  return out;
}

AllocationSchedule SolveMrmpOneshot(const MultiagentProblem& problem,
                                    const SolverConfig& config) {
  return SolveMrmp(problem, ReallocSpec::OneShot(), config);
}

AllocationSchedule SolveMrmp(const MultiagentProblem& problem,
                             const ReallocSpec& spec,
                             const SolverConfig& config) {
  problem.Validate();
  spec.Validate(problem);
  const MrmpModel mm = BuildMrmpMilp(problem, spec);
  const MilpSolution sol = SolveMilp(mm.model, config);
  if (!sol.has_solution()) {
    throw Error(sol.status == SolveStatus::kGapLimit ? ErrorCode::kLimitReached
                                                     : ErrorCode::kLpInfeasible,
                std::string("multiagent MILP: ") + ToString(sol.status));
  }
  return ExtractSchedule(mm, problem, spec, sol);
}

AllocationSchedule ExtractSchedule(const MrmpModel& mm,
                                   const MultiagentProblem& problem,
                                   const ReallocSpec& spec,
                                   const MilpSolution& sol) {
  AllocationSchedule out;
  out.info.status = sol.status;
  out.info.stats = sol.stats;
  out.info.bound = sol.bound;
  out.info.num_vars = mm.model.num_vars();
  out.info.num_rows = mm.model.num_rows();
  out.info.num_binaries = mm.model.num_binaries();
  const auto& v = sol.values;
  const int agents = problem.num_agents();
  const int res = problem.num_resources();
  const int horizon = problem.horizon;

  out.assignment.assign(agents + 1,
                        std::vector(res, std::vector<int>(horizon, 0)));
  for (int a = 0; a <= agents; ++a) {
    for (int o = 0; o < res; ++o) {
      for (int t = 1; t <= horizon; ++t) {
        out.assignment[a][o][t - 1] = static_cast<int>(
            std::lround(v[mm.delta[a][o][mm.period_of_time[t - 1]]]));
      }
    }
  }
  for (int a = 0; a < agents; ++a) {
    const Mdp& mdp = problem.agents[a].mdp;
    const detail::FlowColumns cols{mm.x_first[a], mdp.num_state_actions()};
    OccupationMeasure x = detail::ReadFlow(mdp, cols, v);
    double r = 0.0;
    for (int s = 0; s < mdp.num_states(); ++s) {
      for (int k = 0; k < mdp.num_actions(s); ++k) {
        r += mdp.action(s, k).reward * x.x[mdp.sa(s, k)];
      }
    }
    out.policies.push_back(ExtractPolicy(mdp, x));
    out.occupancy.push_back(std::move(x));
    out.agent_rewards.push_back(r);
    out.reward += r;
  }

  std::set<int> times = {1};
  switch (spec.mode) {
    case ReallocMode::kOneShot:
      break;
    case ReallocMode::kFixedSchedule:
      for (int t : NormalizedTimes(spec.times, horizon)) times.insert(t);
      break;
    case ReallocMode::kBudget:
    case ReallocMode::kEventCost:
      for (int t = 1; t <= horizon; ++t) {
        if (v[mm.psi[t - 1]] > 0.5) {
          times.insert(t);
          out.cost += spec.psi[t - 1];
        }
      }
      break;
    case ReallocMode::kTransferCost:
      for (int a = 1; a <= agents; ++a) {
        for (int o = 0; o < res; ++o) {
          for (int t = 1; t <= horizon; ++t) {
            const int prev = t == 1 ? 0 : out.assignment[a][o][t - 2];
            if (out.assignment[a][o][t - 1] > prev) {
              times.insert(t);
              out.cost += spec.transfer_cost[o][a - 1][t - 1];
            }
          }
        }
      }
      break;
  }
  out.realloc_times.assign(times.begin(), times.end());
  out.utility = spec.mode == ReallocMode::kBudget ? out.reward
                                                  : out.reward - out.cost;
  return out;
}

ScheduleScore ScoreSchedule(const MultiagentProblem& problem,
                            const AllocationSchedule& schedule, double c) {
  const int agents = problem.num_agents();
  const int res = problem.num_resources();
  const int horizon = problem.horizon;
  ScheduleScore score;

  // users[o][t-1]: real agents (1-based) whose best response uses o at t.
  std::vector<std::vector<std::vector<int>>> users(
      res, std::vector<std::vector<int>>(horizon));
  for (int a = 0; a < agents; ++a) {
    const AgentModel& ag = problem.agents[a];
    MilpModel lp;
    const detail::FlowColumns x = detail::AddFlowColumns(lp, ag.mdp, "");
    detail::AddConservationRows(lp, ag.mdp, x, ag.alpha.alpha, {}, "");
    detail::AddRewardObjective(lp, ag.mdp, x);
    for (int s = 0; s < ag.mdp.num_states(); ++s) {
      const int t = ag.mdp.time(s);
      for (int k = 0; k < ag.mdp.num_actions(s); ++k) {
        for (int o : ag.mdp.action(s, k).requires_resources) {
          if (schedule.held(a + 1, o, t) == 0) {
            lp.SetBounds(x.col(ag.mdp.sa(s, k)), 0.0, 0.0);
          }
        }
      }
    }
    const MilpSolution sol = SolveLp(lp);
    if (sol.status != SolveStatus::kOptimal) {
      throw Error(ErrorCode::kLpInfeasible, "schedule re-solve failed");
    }
    score.reward += sol.objective;
    std::vector<std::vector<char>> used(res, std::vector<char>(horizon, 0));
    for (int s = 0; s < ag.mdp.num_states(); ++s) {
      const int t = ag.mdp.time(s);
      for (int k = 0; k < ag.mdp.num_actions(s); ++k) {
        if (sol.values[x.col(ag.mdp.sa(s, k))] <= kFlowTol) continue;
        for (int o : ag.mdp.action(s, k).requires_resources) used[o][t - 1] = 1;
      }
    }
    for (int o = 0; o < res; ++o) {
      for (int t = 1; t <= horizon; ++t) {
        if (used[o][t - 1]) users[o][t - 1].push_back(a + 1);
      }
    }
  }

  // Canonical holders: users, topped up with previous holders while copies
  // remain. Every agent entering the holder set acquires one unit.
  for (int o = 0; o < res; ++o) {
    std::vector<int> prev;
    for (int t = 1; t <= horizon; ++t) {
      std::vector<int> cur = users[o][t - 1];
      for (int h : prev) {
        if (static_cast<int>(cur.size()) >= problem.shared.omega_hat[o]) break;
        if (std::find(cur.begin(), cur.end(), h) == cur.end()) cur.push_back(h);
      }
      for (int h : cur) {
        if (std::find(prev.begin(), prev.end(), h) == prev.end()) {
          ++score.transfers;
        }
      }
      prev = std::move(cur);
    }
  }
  score.utility = score.reward - c * score.transfers;
  return score;
}

}  // namespace rmp
