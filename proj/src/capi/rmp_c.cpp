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

#include "rmp_c.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <functional>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "rmp/bench.hpp"
#include "rmp/errors.hpp"
#include "rmp/io.hpp"

struct rmp_problem {
  rmp::ProblemFile file;
};

struct rmp_solution {
  rmp::ProblemFile problem;  // snapshot taken at solve time
  rmp::SolutionFile file;
};

namespace {

thread_local std::string g_last_error;

rmp_error Fail(rmp_error code, std::string message) {
  g_last_error = std::move(message);
  return code;
}

// Runs `body`, translating exceptions into error codes.
template <typename F>
rmp_error Guard(F&& body) {
  try {
    body();
    return RMP_OK;
  } catch (const rmp::Error& e) {
    return Fail(static_cast<rmp_error>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(RMP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(RMP_ERR_INVALID_INPUT, e.what());
  }
}

rmp_error Null(const char* what) {
  return Fail(RMP_ERR_INVALID_INPUT, std::string(what) + " is NULL");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rmp::SolverConfig ToConfig(const rmp_solver_config* c) {
  rmp::SolverConfig out;
  if (c == nullptr) return out;
  out.time_limit = c->time_limit;
  out.node_limit = static_cast<long>(c->node_limit);
  out.optimality_gap = c->optimality_gap;
  out.heuristics = c->heuristics != 0;
  return out;
}

rmp::GridWorldSpec ToSpec(const rmp_grid_spec& s) {
  rmp::GridWorldSpec g;
  g.n = s.n;
  g.num_resources = s.num_resources;
  g.capacity = s.capacity;
  g.seed = s.seed;
  g.variant = s.multiagent ? rmp::GridVariant::kMultiAgent
                           : rmp::GridVariant::kSingleAgent;
  g.agents = s.agents;
  g.horizon = s.horizon;
  g.switch_budget = s.switch_budget;
  g.psi_budget = s.psi_budget;
  g.schedule_size = s.schedule_size;
  g.max_retries = s.max_retries;
  return g;
}

rmp_error NewProblem(rmp::ProblemFile file, rmp_problem** out) {
  *out = new rmp_problem{std::move(file)};
  return RMP_OK;
}

}  // namespace

extern "C" {

const char* rmp_version(void) { return "1.0.0"; }

const char* rmp_last_error(void) { return g_last_error.c_str(); }

void rmp_free(void* p) { std::free(p); }

void rmp_solver_config_default(rmp_solver_config* config) {
  if (config == nullptr) return;
  const rmp::SolverConfig d;
  config->time_limit = d.time_limit;
  config->node_limit = d.node_limit;
  config->optimality_gap = d.optimality_gap;
  config->heuristics = d.heuristics ? 1 : 0;
}

void rmp_grid_spec_default(rmp_grid_spec* spec) {
  if (spec == nullptr) return;
  const rmp::GridWorldSpec d;
  spec->n = d.n;
  spec->num_resources = d.num_resources;
  spec->capacity = d.capacity;
  spec->seed = d.seed;
  spec->multiagent = 0;
  spec->agents = d.agents;
  spec->horizon = d.horizon;
  spec->switch_budget = d.switch_budget;
  spec->psi_budget = d.psi_budget;
  spec->schedule_size = d.schedule_size;
  spec->max_retries = d.max_retries;
}

rmp_error rmp_problem_load(const char* path, rmp_problem** out) {
  if (path == nullptr) return Null("path");
  if (out == nullptr) return Null("out");
  *out = nullptr;
  return Guard([&] { NewProblem(rmp::LoadProblem(path), out); });
}

rmp_error rmp_problem_parse(const char* json, rmp_problem** out) {
  if (json == nullptr) return Null("json");
  if (out == nullptr) return Null("out");
  *out = nullptr;
  return Guard([&] { NewProblem(rmp::ParseProblem(json), out); });
}

rmp_error rmp_problem_fixture(const char* name, rmp_problem** out) {
  if (name == nullptr) return Null("name");
  if (out == nullptr) return Null("out");
  *out = nullptr;
  return Guard([&] { NewProblem(rmp::FixtureProblem(name), out); });
}

rmp_error rmp_problem_generate(const rmp_grid_spec* spec, rmp_problem** out) {
  if (spec == nullptr) return Null("spec");
  if (out == nullptr) return Null("out");
  *out = nullptr;
  return Guard([&] { NewProblem(rmp::GenerateProblem(ToSpec(*spec)), out); });
}

void rmp_problem_free(rmp_problem* problem) { delete problem; }

int rmp_problem_is_multiagent(const rmp_problem* problem) {
  return problem != nullptr && problem->file.kind == rmp::ProblemKind::kMulti;
}

rmp_error rmp_problem_set(rmp_problem* problem, const char* key,
                          double value) {
  if (problem == nullptr) return Null("problem");
  if (key == nullptr) return Null("key");
  return Guard([&] { rmp::ApplyOverride(problem->file, key, value); });
}

rmp_error rmp_problem_set_schedule(rmp_problem* problem, const int* times,
                                   int count) {
  if (problem == nullptr) return Null("problem");
  if (times == nullptr && count > 0) return Null("times");
  if (problem->file.kind != rmp::ProblemKind::kMulti) {
    return Fail(RMP_ERR_INVALID_INPUT, "schedules apply to multiagent problems");
  }
  problem->file.realloc.times.assign(times, times + count);
  return RMP_OK;
}

rmp_error rmp_problem_to_json(const rmp_problem* problem, char** out) {
  if (problem == nullptr) return Null("problem");
  if (out == nullptr) return Null("out");
  *out = nullptr;
  return Guard([&] { *out = CopyString(rmp::EmitProblem(problem->file)); });
}

rmp_error rmp_problem_dump_model(const rmp_problem* problem,
                                 const char* formulation, char** out) {
  if (problem == nullptr) return Null("problem");
  if (formulation == nullptr) return Null("formulation");
  if (out == nullptr) return Null("out");
  *out = nullptr;
  return Guard([&] {
    const rmp::MilpModel model = rmp::BuildFormulationModel(
        problem->file, rmp::ParseFormulation(formulation));
    *out = CopyString(rmp::ToLpFormat(model, problem->file.name));
  });
}

rmp_error rmp_solve(const rmp_problem* problem, const char* formulation,
                    const rmp_solver_config* config, rmp_solution** out) {
  if (problem == nullptr) return Null("problem");
  if (formulation == nullptr) return Null("formulation");
  if (out == nullptr) return Null("out");
  *out = nullptr;
  return Guard([&] {
    auto sol = std::make_unique<rmp_solution>();
    sol->problem = problem->file;
    sol->file = rmp::Solve(problem->file, rmp::ParseFormulation(formulation),
                           ToConfig(config));
    *out = sol.release();
  });
}

void rmp_solution_free(rmp_solution* solution) { delete solution; }

rmp_status rmp_solution_status(const rmp_solution* solution) {
  if (solution == nullptr) return RMP_STATUS_INFEASIBLE;
  return static_cast<rmp_status>(solution->file.status);
}

double rmp_solution_objective(const rmp_solution* solution) {
  return solution == nullptr ? 0.0 : solution->file.objective;
}

double rmp_solution_reward(const rmp_solution* solution) {
  return solution == nullptr ? 0.0 : solution->file.reward;
}

double rmp_solution_wall_seconds(const rmp_solution* solution) {
  return solution == nullptr ? 0.0 : solution->file.stats.wall_seconds;
}

int64_t rmp_solution_nodes(const rmp_solution* solution) {
  return solution == nullptr ? 0 : solution->file.stats.nodes;
}

rmp_error rmp_solution_to_json(const rmp_solution* solution, char** out) {
  if (solution == nullptr) return Null("solution");
  if (out == nullptr) return Null("out");
  *out = nullptr;
  return Guard([&] {
    *out = CopyString(rmp::EmitSolution(solution->problem, solution->file));
  });
}

rmp_error rmp_solution_summary(const rmp_solution* solution, char** out) {
  if (solution == nullptr) return Null("solution");
  if (out == nullptr) return Null("out");
  *out = nullptr;
  return Guard([&] {
    *out = CopyString(rmp::Summarize(solution->problem, solution->file));
  });
}

rmp_error rmp_solution_reevaluate(const rmp_solution* solution, double* out) {
  if (solution == nullptr) return Null("solution");
  if (out == nullptr) return Null("out");
  return Guard([&] { *out = rmp::Reevaluate(solution->problem, solution->file); });
}

rmp_error rmp_bench(const rmp_bench_config* config, rmp_progress_fn progress,
                    void* user, char** csv_out) {
  if (config == nullptr) return Null("config");
  if (config->suite == nullptr) return Null("suite");
  if (csv_out == nullptr) return Null("csv_out");
  *csv_out = nullptr;
  return Guard([&] {
    rmp::BenchConfig bc;
    bc.suite = config->suite;
    bc.trials = config->trials;
    bc.seed = config->seed;
    bc.grid = config->grid;
    if (config->values != nullptr) {
      bc.values.assign(config->values, config->values + config->num_values);
    }
    bc.solver = ToConfig(&config->solver);
    std::function<void(const rmp::BenchRow&)> cb;
    if (progress != nullptr) {
      cb = [&](const rmp::BenchRow& r) {
        char line[256];
        std::snprintf(line, sizeof line,
                      "%s=%g trial %d seed %llu %s %s objective %.6f "
                      "%.3f s %ld nodes",
                      rmp::BenchAxis(bc.suite).c_str(), r.value, r.trial,
                      static_cast<unsigned long long>(r.seed),
                      r.formulation.c_str(), r.status.c_str(),
                      r.has_value ? r.objective : 0.0, r.wall_seconds,
                      r.nodes);
        progress(line, user);
      };
    }
    const auto rows = rmp::RunBench(bc, cb);
    *csv_out = CopyString(rmp::BenchCsv(bc.suite, rows));
  });
}

}  // extern "C"
