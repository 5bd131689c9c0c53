/* Copyright 2026 The rmp Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of librmp. Every function that can fail returns an rmp_error;
 * on failure rmp_last_error() describes it (thread local, valid until the
 * next failing call on the same thread). Strings returned through char**
 * are owned by the caller and released with rmp_free. */

#ifndef RMP_C_H_
#define RMP_C_H_

#include <stdint.h>

#if defined(_WIN32)
#define RMP_API __declspec(dllexport)
#else
#define RMP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rmp_error {
  RMP_OK = 0,
  RMP_ERR_INVALID_INPUT = 1,
  RMP_ERR_PARSE = 2,
  RMP_ERR_NON_TRANSIENT = 3,
  RMP_ERR_INFEASIBLE = 4,
  RMP_ERR_UNBOUNDED = 5,
  RMP_ERR_NON_CONVERGENT = 6,
  RMP_ERR_RETRY_EXHAUSTED = 7,
  RMP_ERR_TOO_MANY_BINARIES = 8,
  RMP_ERR_STATE_SPACE_TOO_LARGE = 9,
  RMP_ERR_LIMIT_REACHED = 10,
  RMP_ERR_INTERNAL = 11
} rmp_error;

typedef enum rmp_status {
  RMP_STATUS_OPTIMAL = 0,
  RMP_STATUS_INFEASIBLE = 1,
  RMP_STATUS_UNBOUNDED = 2,
  RMP_STATUS_GAP_LIMIT = 3
} rmp_status;

typedef struct rmp_problem rmp_problem;
typedef struct rmp_solution rmp_solution;

typedef struct rmp_solver_config {
  double time_limit;     /* seconds */
  int64_t node_limit;
  double optimality_gap; /* relative; 0 proves optimality */
  int heuristics;        /* nonzero enables diving for incumbents */
} rmp_solver_config;

typedef struct rmp_grid_spec {
  int n;
  int num_resources;
  double capacity;
  uint64_t seed;
  int multiagent;  /* nonzero for the timed multiagent variant */
  int agents;
  int horizon;
  double switch_budget;
  double psi_budget;
  int schedule_size;
  int max_retries;
} rmp_grid_spec;

typedef struct rmp_bench_config {
  const char* suite; /* phases, resources, gridsize, horizon, agents */
  int trials;
  uint64_t seed;
  int grid;
  const double* values; /* NULL for the suite's default axis values */
  int num_values;
  rmp_solver_config solver;
} rmp_bench_config;

/* Called after every benchmark row with a one-line description. */
typedef void (*rmp_progress_fn)(const char* line, void* user);

RMP_API const char* rmp_version(void);
RMP_API const char* rmp_last_error(void);
RMP_API void rmp_free(void* p);

RMP_API void rmp_solver_config_default(rmp_solver_config* config);
RMP_API void rmp_grid_spec_default(rmp_grid_spec* spec);

/* Problems. */
RMP_API rmp_error rmp_problem_load(const char* path, rmp_problem** out);
RMP_API rmp_error rmp_problem_parse(const char* json, rmp_problem** out);
RMP_API rmp_error rmp_problem_fixture(const char* name, rmp_problem** out);
RMP_API rmp_error rmp_problem_generate(const rmp_grid_spec* spec,
                                       rmp_problem** out);
RMP_API void rmp_problem_free(rmp_problem* problem);
RMP_API int rmp_problem_is_multiagent(const rmp_problem* problem);
/* Keys: budget, lambda_scale, psi_budget, transfer_cost. */
RMP_API rmp_error rmp_problem_set(rmp_problem* problem, const char* key,
                                  double value);
RMP_API rmp_error rmp_problem_set_schedule(rmp_problem* problem,
                                           const int* times, int count);
RMP_API rmp_error rmp_problem_to_json(const rmp_problem* problem, char** out);
/* LP-format text of the model a formulation compiles to. */
RMP_API rmp_error rmp_problem_dump_model(const rmp_problem* problem,
                                         const char* formulation, char** out);

/* Solving. On failure *out is NULL. */
RMP_API rmp_error rmp_solve(const rmp_problem* problem, const char* formulation,
                            const rmp_solver_config* config,
                            rmp_solution** out);
RMP_API void rmp_solution_free(rmp_solution* solution);
RMP_API rmp_status rmp_solution_status(const rmp_solution* solution);
RMP_API double rmp_solution_objective(const rmp_solution* solution);
RMP_API double rmp_solution_reward(const rmp_solution* solution);
RMP_API double rmp_solution_wall_seconds(const rmp_solution* solution);
RMP_API int64_t rmp_solution_nodes(const rmp_solution* solution);
RMP_API rmp_error rmp_solution_to_json(const rmp_solution* solution,
                                       char** out);
RMP_API rmp_error rmp_solution_summary(const rmp_solution* solution,
                                       char** out);
/* Expected reward of the stored policies, recomputed from the problem. */
RMP_API rmp_error rmp_solution_reevaluate(const rmp_solution* solution,
                                          double* out);

/* Benchmarks. Writes the full CSV (header, rows, summary) to *csv_out. */
RMP_API rmp_error rmp_bench(const rmp_bench_config* config,
                            rmp_progress_fn progress, void* user,
                            char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* RMP_C_H_ */
