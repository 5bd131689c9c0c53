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

// rmp: solve, generate and benchmark resource-constrained MDP problems.
//
// Exit codes: 0 optimal, 1 bad input or parse error, 2 infeasible or
// unbounded, 3 a limit was hit (time, nodes, enumeration caps), 4 internal.

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rmp_c.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitLimit = 3;
constexpr int kExitInternal = 4;

int ExitCodeFor(rmp_error e) {
  switch (e) {
    case RMP_OK:
      return kExitOk;
    case RMP_ERR_INVALID_INPUT:
    case RMP_ERR_PARSE:
    case RMP_ERR_NON_TRANSIENT:
    case RMP_ERR_RETRY_EXHAUSTED:
      return kExitInput;
    case RMP_ERR_INFEASIBLE:
    case RMP_ERR_UNBOUNDED:
      return kExitInfeasible;
    case RMP_ERR_TOO_MANY_BINARIES:
    case RMP_ERR_STATE_SPACE_TOO_LARGE:
    case RMP_ERR_LIMIT_REACHED:
      return kExitLimit;
    default:
      return kExitInternal;
  }
}

// Thrown to unwind with a given exit code after the message is printed.
struct Exit {
  int code;
};

void Check(rmp_error e) {
  if (e == RMP_OK) return;
  std::cerr << "rmp: " << rmp_last_error() << "\n";
  throw Exit{ExitCodeFor(e)};
}

struct ProblemDeleter {
  void operator()(rmp_problem* p) const { rmp_problem_free(p); }
};
struct SolutionDeleter {
  void operator()(rmp_solution* s) const { rmp_solution_free(s); }
};
using ProblemPtr = std::unique_ptr<rmp_problem, ProblemDeleter>;
using SolutionPtr = std::unique_ptr<rmp_solution, SolutionDeleter>;

// Takes ownership of a malloc'd C string.
std::string Take(char* s) {
  std::string out = s == nullptr ? "" : s;
  rmp_free(s);
  return out;
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "rmp: cannot write " << path << "\n";
    throw Exit{kExitInput};
  }
}

// RMP_SEED, when set, wins over --seed.
std::uint64_t SeedFromEnv(std::uint64_t seed) {
  const char* env = std::getenv("RMP_SEED");
  if (env == nullptr || *env == '\0') return seed;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || *end != '\0') {
    std::cerr << "rmp: RMP_SEED is not an unsigned integer: " << env << "\n";
    throw Exit{kExitInput};
  }
  return v;
}

struct SolverFlags {
  double time_limit = 600.0;
  std::int64_t node_limit = 50'000'000;
  double gap = 0.0;
  bool no_heuristics = false;

  void Add(CLI::App* app) {
    app->add_option("--time-limit", time_limit, "Seconds per solve")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--node-limit", node_limit, "Branch-and-bound nodes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--gap", gap, "Relative optimality gap")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_flag("--no-heuristics", no_heuristics,
                  "Disable diving for early incumbents");
  }

  rmp_solver_config Config() const {
    rmp_solver_config c;
    rmp_solver_config_default(&c);
    c.time_limit = time_limit;
    c.node_limit = node_limit;
    c.optimality_gap = gap;
    c.heuristics = no_heuristics ? 0 : 1;
    return c;
  }
};

struct SolveArgs {
  std::string path;
  std::string fixture;
  std::string formulation;
  std::string out;
  std::string dump_model;
  std::optional<double> budget, lambda_scale, psi_budget, transfer_cost;
  std::vector<int> schedule;
  bool quiet = false;
  SolverFlags solver;
};

int RunSolve(const SolveArgs& a) {
  rmp_problem* raw = nullptr;
  if (!a.fixture.empty()) {
    Check(rmp_problem_fixture(a.fixture.c_str(), &raw));
  } else {
    Check(rmp_problem_load(a.path.c_str(), &raw));
  }
  ProblemPtr problem(raw);
  auto set = [&](const char* key, const std::optional<double>& v) {
    if (v) Check(rmp_problem_set(problem.get(), key, *v));
  };
  set("budget", a.budget);
  set("lambda_scale", a.lambda_scale);
  set("psi_budget", a.psi_budget);
  set("transfer_cost", a.transfer_cost);
  if (!a.schedule.empty()) {
    Check(rmp_problem_set_schedule(problem.get(), a.schedule.data(),
                                   static_cast<int>(a.schedule.size())));
  }

  if (!a.dump_model.empty()) {
    char* lp = nullptr;
    Check(rmp_problem_dump_model(problem.get(), a.formulation.c_str(), &lp));
    WriteText(a.dump_model, Take(lp));
  }

  const rmp_solver_config config = a.solver.Config();
  rmp_solution* sraw = nullptr;
  Check(rmp_solve(problem.get(), a.formulation.c_str(), &config, &sraw));
  SolutionPtr solution(sraw);

  char* json = nullptr;
  Check(rmp_solution_to_json(solution.get(), &json));
  const std::string text = Take(json);
  if (!a.out.empty()) WriteText(a.out, text);
  if (!a.quiet) {
    char* summary = nullptr;
    Check(rmp_solution_summary(solution.get(), &summary));
    // The summary goes to stderr when the solution itself is on stdout.
    (a.out.empty() || a.out == "-" ? std::cerr : std::cout) << Take(summary);
  }
  if (a.out.empty()) std::cout << text;

  switch (rmp_solution_status(solution.get())) {
    case RMP_STATUS_OPTIMAL:
      return kExitOk;
    case RMP_STATUS_INFEASIBLE:
    case RMP_STATUS_UNBOUNDED:
      return kExitInfeasible;
    default:
      return kExitLimit;
  }
}

struct GenerateArgs {
  std::string fixture;
  std::optional<int> grid, resources, agents, horizon, schedule_size;
  std::optional<double> capacity, budget, psi_budget;
  std::uint64_t seed = 1;
  bool multiagent = false;
  std::string out;
};

int RunGenerate(const GenerateArgs& a) {
  rmp_problem* raw = nullptr;
  if (!a.fixture.empty()) {
    Check(rmp_problem_fixture(a.fixture.c_str(), &raw));
  } else {
    rmp_grid_spec spec;
    rmp_grid_spec_default(&spec);
    spec.seed = SeedFromEnv(a.seed);
    spec.multiagent = a.multiagent || a.agents || a.horizon ? 1 : 0;
    if (a.grid) spec.n = *a.grid;
    if (a.resources) spec.num_resources = *a.resources;
    if (a.capacity) spec.capacity = *a.capacity;
    if (a.agents) spec.agents = *a.agents;
    if (a.horizon) spec.horizon = *a.horizon;
    if (a.schedule_size) spec.schedule_size = *a.schedule_size;
    if (a.budget) spec.switch_budget = *a.budget;
    if (a.psi_budget) spec.psi_budget = *a.psi_budget;
    Check(rmp_problem_generate(&spec, &raw));
  }
  ProblemPtr problem(raw);
  char* json = nullptr;
  Check(rmp_problem_to_json(problem.get(), &json));
  WriteText(a.out, Take(json));
  return kExitOk;
}

struct BenchArgs {
  std::string suite;
  int trials = 20;
  std::uint64_t seed = 1;
  int grid = 5;
  std::vector<double> values;
  std::string out;
  bool quiet = false;
  SolverFlags solver;
};

void PrintProgress(const char* line, void*) { std::cerr << line << "\n"; }

int RunBench(const BenchArgs& a) {
  rmp_bench_config c;
  c.suite = a.suite.c_str();
  c.trials = a.trials;
  c.seed = SeedFromEnv(a.seed);
  c.grid = a.grid;
  c.values = a.values.empty() ? nullptr : a.values.data();
  c.num_values = static_cast<int>(a.values.size());
  c.solver = a.solver.Config();
  char* csv = nullptr;
  Check(rmp_bench(&c, a.quiet ? nullptr : PrintProgress, nullptr, &csv));
  WriteText(a.out, Take(csv));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resource-constrained MDP planning with phases and reallocation"};
  app.set_version_flag("--version", std::string(rmp_version()));
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* cmd_solve =
      app.add_subcommand("solve", "Solve a problem file or built-in fixture");
  auto* src = cmd_solve->add_option("problem", solve.path, "Problem JSON file")
                  ->check(CLI::ExistingFile);
  auto* fix = cmd_solve->add_option("--fixture", solve.fixture,
                                    "Built-in problem: running-example, "
                                    "two-agent");
  src->excludes(fix);
  fix->excludes(src);
  cmd_solve
      ->add_option("--formulation", solve.formulation,
                   "eq1 eq4 eq5 eq6 eq7 eq8 eq9 eq10 eq11 eq12 abstract "
                   "expand brute")
      ->required()
      ->check(CLI::IsMember({"eq1", "eq4", "eq5", "eq6", "eq7", "eq8", "eq9",
                             "eq10", "eq11", "eq12", "abstract", "expand",
                             "brute"}));
  cmd_solve->add_option("--out", solve.out,
                        "Solution JSON path; stdout when omitted");
  cmd_solve->add_option("--dump-model", solve.dump_model,
                        "Write the compiled model in LP format");
  cmd_solve->add_option("--budget", solve.budget, "Switching budget");
  cmd_solve->add_option("--lambda-scale", solve.lambda_scale,
                        "Multiply every switching cost");
  cmd_solve->add_option("--psi-budget", solve.psi_budget,
                        "Reallocation budget");
  cmd_solve->add_option("--transfer-cost", solve.transfer_cost,
                        "Uniform per-transfer cost");
  cmd_solve->add_option("--schedule", solve.schedule,
                        "Fixed reallocation times, e.g. 1,3,6,8")
      ->delimiter(',');
  cmd_solve->add_flag("-q,--quiet", solve.quiet, "Skip the summary");
  solve.solver.Add(cmd_solve);

  GenerateArgs gen;
  CLI::App* cmd_gen =
      app.add_subcommand("generate", "Emit a seeded grid world problem");
  cmd_gen->add_option("--grid", gen.grid, "Side length n")
      ->check(CLI::PositiveNumber);
  cmd_gen->add_option("--resources", gen.resources, "Number of resources");
  cmd_gen->add_option("--seed", gen.seed, "RNG seed (RMP_SEED overrides)")
      ->capture_default_str();
  cmd_gen->add_option("--capacity", gen.capacity, "Resources held at once");
  cmd_gen->add_option("--budget", gen.budget, "Switching budget");
  cmd_gen->add_option("--agents", gen.agents, "Agents (multiagent)");
  cmd_gen->add_option("--horizon", gen.horizon, "Horizon T (multiagent)");
  cmd_gen->add_option("--psi-budget", gen.psi_budget,
                      "Reallocation budget (multiagent)");
  cmd_gen->add_option("--schedule-size", gen.schedule_size,
                      "Fixed reallocation times drawn, including t=1");
  cmd_gen->add_flag("--multiagent", gen.multiagent, "Timed multiagent variant");
  cmd_gen->add_option("--fixture", gen.fixture,
                      "Emit a built-in problem instead");
  cmd_gen->add_option("--out", gen.out, "Output path; stdout when omitted");

  BenchArgs bench;
  CLI::App* cmd_bench =
      app.add_subcommand("bench", "Run a benchmark sweep and write CSV");
  cmd_bench->add_option("--suite", bench.suite)
      ->required()
      ->check(CLI::IsMember(
          {"phases", "resources", "gridsize", "horizon", "agents"}));
  cmd_bench->add_option("--trials", bench.trials, "Instances per axis value")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_bench->add_option("--seed", bench.seed,
                        "First seed; trial k uses seed+k (RMP_SEED overrides)")
      ->capture_default_str();
  cmd_bench->add_option("--grid", bench.grid, "n for fixed-size suites")
      ->capture_default_str();
  cmd_bench->add_option("--values", bench.values, "Axis values, e.g. 0,2,4")
      ->delimiter(',');
  cmd_bench->add_option("--out", bench.out, "CSV path; stdout when omitted");
  cmd_bench->add_flag("-q,--quiet", bench.quiet, "No progress on stderr");
  bench.solver.Add(cmd_bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*cmd_solve) {
      if (solve.path.empty() && solve.fixture.empty()) {
        std::cerr << "rmp: solve needs a problem file or --fixture\n";
        return kExitInput;
      }
      return RunSolve(solve);
    }
    if (*cmd_gen) return RunGenerate(gen);
    if (*cmd_bench) return RunBench(bench);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitInput;
}
