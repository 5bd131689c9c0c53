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

// Benchmark sweeps over seeded grid worlds. Each suite varies one parameter
// and runs a fixed set of formulations on every (value, trial) instance.
//
//   suite      axis       values      formulations      fixed
//   phases     budget     0..6        eq5 expand        |O|=9 tau=3
//   resources  resources  3..12       eq5 expand        tau=3 budget=2
//   gridsize   n          5..10       eq5 expand        |O|=9 tau=3 budget=2
//   horizon    horizon    6..14       eq8 eq9 eq10      m=5 |O|=5 psi=3
//   agents     agents     1..5        eq8 eq9 eq10      |O|=5 T=10 psi=3

#ifndef RMP_BENCH_HPP_
#define RMP_BENCH_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rmp/linprog.hpp"

namespace rmp {

struct BenchConfig {
  std::string suite = "phases";
  int trials = 20;
  std::uint64_t seed = 1;  // trial k uses seed + k
  int grid = 5;            // n for every suite but gridsize
  std::vector<double> values;  // axis values; empty uses the suite default
  SolverConfig solver;
};

struct BenchRow {
  double value = 0.0;  // axis value
  int trial = 0;
  std::uint64_t seed = 0;
  std::string formulation;
  std::string status;  // solve status or error code name
  double objective = 0.0;
  double reward = 0.0;
  double wall_seconds = 0.0;
  long nodes = 0;
  bool has_value = false;  // objective and reward are meaningful
  // Instance parameters.
  int n = 0;
  int resources = 0;
  double capacity = 0.0;
  double budget = 0.0;
  int agents = 0;
  int horizon = 0;
};

// Axis name of a suite; throws Error(kInvalidInput) for unknown suites.
std::string BenchAxis(const std::string& suite);

// Rows ordered by (value, trial, formulation). `progress` sees each row as
// it completes.
std::vector<BenchRow> RunBench(
    const BenchConfig& config,
    const std::function<void(const BenchRow&)>& progress = {});

// Header, one line per row, then a mean and a std line per
// (value, formulation) over the rows that have a value.
std::string BenchCsv(const std::string& suite,
                     const std::vector<BenchRow>& rows);

inline constexpr char kBenchCsvHeader[] =
    "suite,kind,axis,value,trial,seed,formulation,status,objective,reward,"
    "wall_seconds,nodes,n,resources,capacity,budget,agents,horizon";

}  // namespace rmp

#endif  // RMP_BENCH_HPP_
