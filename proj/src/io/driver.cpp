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

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "mdp/flow.hpp"
#include "rmp/baselines.hpp"
#include "rmp/errors.hpp"
#include "rmp/io.hpp"

namespace rmp {
namespace {

struct Name {
  Formulation f;
  const char* name;
};

constexpr Name kNames[] = {
    {Formulation::kEq1, "eq1"},         {Formulation::kEq4, "eq4"},
    {Formulation::kEq5, "eq5"},         {Formulation::kEq6, "eq6"},
    {Formulation::kEq7, "eq7"},         {Formulation::kEq8, "eq8"},
    {Formulation::kEq9, "eq9"},         {Formulation::kEq10, "eq10"},
    {Formulation::kEq11, "eq11"},       {Formulation::kEq12, "eq12"},
    {Formulation::kAbstract, "abstract"}, {Formulation::kExpand, "expand"},
    {Formulation::kBrute, "brute"},
};

PhaseSwitchSpec WithMode(PhaseSwitchSpec spec, Formulation f) {
  switch (f) {
    case Formulation::kEq5:
      spec.mode = SwitchMode::kBudgeted;
      break;
    case Formulation::kEq6:
      spec.mode = SwitchMode::kCostInObjective;
      break;
    case Formulation::kEq7:
      spec.mode = SwitchMode::kGrouped;
      break;
    default:
      break;
  }
  return spec;
}

ReallocSpec WithMode(ReallocSpec spec, Formulation f) {
  switch (f) {
    case Formulation::kEq8:
      spec.mode = ReallocMode::kOneShot;
      break;
    case Formulation::kEq9:
      spec.mode = ReallocMode::kFixedSchedule;
      break;
    case Formulation::kEq10:
      spec.mode = ReallocMode::kBudget;
      break;
    case Formulation::kEq11:
      spec.mode = ReallocMode::kEventCost;
      break;
    case Formulation::kEq12:
      spec.mode = ReallocMode::kTransferCost;
      break;
    default:
      break;
  }
  return spec;
}

// The formulation "brute" enumerates: the one named by the file's mode.
Formulation DefaultFormulation(const ProblemFile& p) {
  if (p.kind == ProblemKind::kSingle) {
    switch (p.single.switching.mode) {
      case SwitchMode::kBudgeted:
        return Formulation::kEq5;
      case SwitchMode::kCostInObjective:
        return Formulation::kEq6;
      case SwitchMode::kGrouped:
        return Formulation::kEq7;
    }
  }
  switch (p.realloc.mode) {
    case ReallocMode::kOneShot:
      return Formulation::kEq8;
    case ReallocMode::kFixedSchedule:
      return Formulation::kEq9;
    case ReallocMode::kBudget:
      return Formulation::kEq10;
    case ReallocMode::kEventCost:
      return Formulation::kEq11;
    case ReallocMode::kTransferCost:
      return Formulation::kEq12;
  }
  return Formulation::kEq8;
}

void CheckKind(const ProblemFile& p, Formulation f) {
  if (f == Formulation::kBrute) return;
  const bool multi = p.kind == ProblemKind::kMulti;
  if (IsMultiagent(f) != multi) {
    throw Error(ErrorCode::kInvalidInput,
                std::string("formulation ") + ToString(f) + " needs a " +
                    (IsMultiagent(f) ? "multiagent" : "single-agent") +
                    " problem");
  }
}

void CopyInfo(const SolveInfo& info, SolutionFile* out) {
  out->status = info.status;
  out->stats = info.stats;
  out->bound = info.bound;
  out->num_vars = info.num_vars;
  out->num_rows = info.num_rows;
  out->num_binaries = info.num_binaries;
}

PhasePlan SinglePhase(const Mdp& mdp, const OccupationMeasure& x,
                      ResourceBundle bundle, double value) {
  PhasePlan plan;
  Phase phase;
  phase.bundle = std::move(bundle);
  phase.policy = ExtractPolicy(mdp, x);
  phase.occupancy = x;
  plan.phases.push_back(std::move(phase));
  plan.objective = value;
  plan.reward = value;
  return plan;
}

void FromPlan(PhasePlan plan, SolutionFile* out) {
  out->objective = plan.objective;
  out->reward = plan.reward;
  out->cost = plan.creation_cost;
  out->plan = std::move(plan);
}

void FromSchedule(AllocationSchedule schedule, SolutionFile* out) {
  CopyInfo(schedule.info, out);
  out->objective = schedule.utility;
  out->reward = schedule.reward;
  out->cost = schedule.cost;
  out->schedule = std::move(schedule);
}

}  // namespace

const char* ToString(Formulation f) {
  for (const Name& n : kNames) {
    if (n.f == f) return n.name;
  }
  return "unknown";
}

Formulation ParseFormulation(const std::string& name) {
  for (const Name& n : kNames) {
    if (name == n.name) return n.f;
  }
  throw Error(ErrorCode::kInvalidInput, "unknown formulation '" + name + "'");
}

bool IsMultiagent(Formulation f) {
  switch (f) {
    case Formulation::kEq8:
    case Formulation::kEq9:
    case Formulation::kEq10:
    case Formulation::kEq11:
    case Formulation::kEq12:
      return true;
    default:
      return false;
  }
}

MilpModel BuildFormulationModel(const ProblemFile& problem, Formulation f) {
  CheckKind(problem, f);
  if (f == Formulation::kBrute) f = DefaultFormulation(problem);
  if (IsMultiagent(f)) {
    const ReallocSpec spec = WithMode(problem.realloc, f);
    problem.multi.Validate();
    spec.Validate(problem.multi);
    return BuildMrmpMilp(problem.multi, spec).model;
  }
  const SingleAgentProblem& p = problem.single;
  switch (f) {
    case Formulation::kEq1: {
      MilpModel m;
      const detail::FlowColumns x = detail::AddFlowColumns(m, p.mdp, "");
      detail::AddConservationRows(m, p.mdp, x, p.alpha.alpha, {}, "");
      detail::AddRewardObjective(m, p.mdp, x);
      return m;
    }
    case Formulation::kEq4:
      return BuildConstrainedMilp(p.mdp, p.alpha, p.cap,
                                  ComputeXBound(p.mdp, p.alpha))
          .model;
    case Formulation::kEq5:
    case Formulation::kEq6:
    case Formulation::kEq7: {
      const PhaseSwitchSpec spec = WithMode(p.switching, f);
      spec.Validate(p.mdp, p.alpha);
      return BuildSrmpMilp(p.mdp, p.alpha, p.cap, spec,
                           ComputeXBound(p.mdp, p.alpha))
          .model;
    }
    default:
      throw Error(ErrorCode::kInvalidInput,
                  std::string("formulation ") + ToString(f) +
                      " is not a single model");
  }
}

SolutionFile Solve(const ProblemFile& problem, Formulation f,
                   const SolverConfig& config) {
  CheckKind(problem, f);
  const auto start = std::chrono::steady_clock::now();
  SolutionFile out;
  out.problem = problem.name;
  out.formulation = f;

  if (f == Formulation::kBrute) {
    const Formulation base = DefaultFormulation(problem);
    const MilpModel model = BuildFormulationModel(problem, base);
    const OracleResult oracle = BruteForce(model);
    out.enumerated = oracle.enumerated;
    out.stats.wall_seconds = oracle.wall_seconds;
    out.num_vars = model.num_vars();
    out.num_rows = model.num_rows();
    out.num_binaries = model.num_binaries();
    if (!oracle.feasible) {
      throw Error(ErrorCode::kLpInfeasible, "no assignment is feasible");
    }
    MilpSolution sol;
    sol.status = SolveStatus::kOptimal;
    sol.objective = oracle.objective;
    sol.bound = oracle.objective;
    sol.values = oracle.values;
    out.bound = oracle.objective;
    if (IsMultiagent(base)) {
      const ReallocSpec spec = WithMode(problem.realloc, base);
      const MrmpModel mm = BuildMrmpMilp(problem.multi, spec);
      AllocationSchedule s = ExtractSchedule(mm, problem.multi, spec, sol);
      out.objective = s.utility;
      out.reward = s.reward;
      out.cost = s.cost;
      out.schedule = std::move(s);
    } else {
      const SingleAgentProblem& p = problem.single;
      const PhaseSwitchSpec spec = WithMode(p.switching, base);
      const SrmpModel sm = BuildSrmpMilp(p.mdp, p.alpha, p.cap, spec,
                                         ComputeXBound(p.mdp, p.alpha));
      FromPlan(ExtractPhasePlan(sm, p.mdp, p.cap, spec, sol), &out);
    }
    return out;
  }

  if (IsMultiagent(f)) {
    FromSchedule(SolveMrmp(problem.multi, WithMode(problem.realloc, f), config),
                 &out);
    return out;
  }

  const SingleAgentProblem& p = problem.single;
  switch (f) {
    case Formulation::kEq1: {
      const UnconstrainedResult r = SolveUnconstrained(p.mdp, p.alpha);
      FromPlan(SinglePhase(p.mdp, r.x, UsedResources(p.mdp, r.x), r.value),
               &out);
      out.status = SolveStatus::kOptimal;
      out.bound = r.value;
      out.stats.lp_solves = 1;
      out.num_vars = p.mdp.num_state_actions();
      out.num_rows = p.mdp.num_states();
      out.stats.wall_seconds = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
      break;
    }
    case Formulation::kEq4: {
      const ConstrainedResult r = SolveConstrained(p.mdp, p.alpha, p.cap, config);
      FromPlan(SinglePhase(p.mdp, r.x, r.bundle, r.value), &out);
      CopyInfo(r.info, &out);
      break;
    }
    case Formulation::kEq5:
    case Formulation::kEq6:
    case Formulation::kEq7: {
      SolveInfo info;
      PhasePlan plan =
          SolveSrmp(p.mdp, p.alpha, p.cap, WithMode(p.switching, f), config,
                    &info);
      FromPlan(std::move(plan), &out);
      CopyInfo(info, &out);
      break;
    }
    case Formulation::kAbstract: {
      if (problem.fixed_states.empty()) {
        throw Error(ErrorCode::kInvalidInput,
                    "the abstract solver needs 'switching.fixed' states");
      }
      AbstractTrace trace;
      PhasePlan plan = SolveFixedPhasesAbstract(p.mdp, p.alpha, p.cap,
                                                problem.fixed_states, config,
                                                &trace);
      out.abstract_iterations = trace.iterations;
      FromPlan(std::move(plan), &out);
      out.status = SolveStatus::kOptimal;
      out.bound = out.objective;
      out.stats.wall_seconds = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
      break;
    }
    case Formulation::kExpand: {
      ExpandConfig ec;
      ec.solver = config;
      ExpandResult r = ExpandMdpBaseline(p.mdp, p.alpha, p.cap, p.switching, ec);
      FromPlan(std::move(r.plan), &out);
      CopyInfo(r.info, &out);
      out.stats.wall_seconds = r.wall_seconds;
      break;
    }
    default:
      throw Error(ErrorCode::kInternal, "unhandled formulation");
  }
  return out;
}

}  // namespace rmp
