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

// JSON problem and solution files, and a single entry point that runs any
// formulation on a loaded problem. The schema is documented in README.md.

#ifndef RMP_IO_HPP_
#define RMP_IO_HPP_

#include <string>
#include <vector>

#include "rmp/constrained.hpp"
#include "rmp/domains.hpp"
#include "rmp/linprog.hpp"
#include "rmp/mdp.hpp"
#include "rmp/mrmp.hpp"
#include "rmp/srmp.hpp"

namespace rmp {

inline constexpr int kFileVersion = 1;

enum class ProblemKind { kSingle, kMulti };

struct ProblemFile {
  ProblemKind kind = ProblemKind::kSingle;
  std::string name;
  // kSingle. `single.switching` carries every switching parameter; its mode
  // is only the default used by the "brute" formulation.
  SingleAgentProblem single;
  std::vector<int> fixed_states;  // for the abstract solver
  // kMulti. `realloc` likewise carries schedule, psi, budget and transfer
  // costs at once.
  MultiagentProblem multi;
  ReallocSpec realloc;
};

// Throws Error(kParse) with "<source>:<line>:<column>: ..." for malformed JSON
// and "<source>: <json pointer>: ..." for schema violations.
ProblemFile ParseProblem(const std::string& text,
                         const std::string& source = "<input>");
ProblemFile LoadProblem(const std::string& path);
std::string EmitProblem(const ProblemFile& problem);

ProblemFile MakeProblem(const SingleAgentProblem& problem);
ProblemFile MakeProblem(const MultiagentProblem& problem,
                        const ReallocSpec& realloc, const std::string& name);

// Named fixtures: "running-example" (six-state rover, with switching groups
// and fixed switching states) and "two-agent" (timed tasks, with schedule,
// reallocation costs and transfer cost filled in).
ProblemFile FixtureProblem(const std::string& name);

// Seeded grid world. Multiagent files also carry a reallocation setup: free
// at t = 1 and cost 1 after, budget psi_budget, schedule_size fixed times
// (1 plus distinct draws from 2..T on a stream separate from the layout),
// and unit transfer cost.
ProblemFile GenerateProblem(const GridWorldSpec& spec);

// Adjusts one parameter in place. Keys: "budget" (switching budget),
// "lambda_scale" (multiplies every switching cost), "psi_budget",
// "transfer_cost" (uniform per-unit cost). Throws Error(kInvalidInput) for
// unknown keys or keys that do not fit the problem kind.
void ApplyOverride(ProblemFile& problem, const std::string& key, double value);

enum class Formulation {
  kEq1,       // unconstrained MDP
  kEq4,       // one-shot capacity constrained
  kEq5,       // phasing under a switching budget
  kEq6,       // phasing with switching cost in the objective
  kEq7,       // grouped switching states
  kEq8,       // multiagent one-shot
  kEq9,       // multiagent fixed schedule
  kEq10,      // multiagent reallocation budget
  kEq11,      // multiagent reallocation cost in the objective
  kEq12,      // multiagent per-transfer cost
  kAbstract,  // policy iteration over fixed switching states
  kExpand,    // expanded-MDP baseline
  kBrute,     // enumeration of the file's default formulation
};

const char* ToString(Formulation f);
// Throws Error(kInvalidInput) for unknown names.
Formulation ParseFormulation(const std::string& name);
bool IsMultiagent(Formulation f);

struct SolutionFile {
  std::string problem;
  Formulation formulation = Formulation::kEq1;
  SolveStatus status = SolveStatus::kOptimal;
  double objective = 0.0;
  double reward = 0.0;
  double cost = 0.0;
  double bound = 0.0;
  // Single agent.
  PhasePlan plan;
  int abstract_iterations = 0;
  // Multiagent.
  AllocationSchedule schedule;
  // Stats. Only wall_seconds varies between identical runs.
  BranchStats stats;
  int num_vars = 0;
  int num_rows = 0;
  int num_binaries = 0;
  long enumerated = 0;
};

// MILP the formulation compiles to. Throws Error(kInvalidInput) for the
// abstract and expand formulations, which are not a single model.
MilpModel BuildFormulationModel(const ProblemFile& problem, Formulation f);

// Runs `f`. A run that stops at a limit with an incumbent returns it with
// status kGapLimit; without one it throws Error(kLimitReached).
SolutionFile Solve(const ProblemFile& problem, Formulation f,
                   const SolverConfig& config = {});

std::string EmitSolution(const ProblemFile& problem,
                         const SolutionFile& solution);
SolutionFile ParseSolution(const ProblemFile& problem, const std::string& text,
                           const std::string& source = "<input>");

// Expected reward of the stored policies, recomputed from the problem.
double Reevaluate(const ProblemFile& problem, const SolutionFile& solution);

// Short human summary: objective, switching points, bundles.
std::string Summarize(const ProblemFile& problem, const SolutionFile& solution);

}  // namespace rmp

#endif  // RMP_IO_HPP_
