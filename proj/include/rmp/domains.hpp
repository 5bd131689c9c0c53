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

// Fixtures and seeded grid-world generators.

#ifndef RMP_DOMAINS_HPP_
#define RMP_DOMAINS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rmp/constrained.hpp"
#include "rmp/mdp.hpp"
#include "rmp/mrmp.hpp"
#include "rmp/srmp.hpp"

namespace rmp {

struct SingleAgentProblem {
  std::string name;
  Mdp mdp;
  InitialDistribution alpha;
  CapacitySpec cap;
  // Default switching setup: free at the initial state, cost 1 elsewhere.
  PhaseSwitchSpec switching;
};

// Directory holding the shipped fixture files: $RMP_DATA_DIR if set, else the
// source tree's data/ directory.
std::string DataDir();

// Six-state rover with five single-use tools and room for one of them.
// Throws Error(kParse) if the fixture file is missing or malformed.
SingleAgentProblem LoadRunningExample();
SingleAgentProblem LoadRunningExample(const std::string& path);

// Two agents with three timed tasks each over a 10-step horizon, sharing
// one copy of each of two resources. `copies` overrides the pool size.
MultiagentProblem LoadTwoAgentExample(int copies = 1);

// xoshiro256** seeded through splitmix64. Every random draw in the
// generators goes through Uniform/Below in a fixed order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t Next();
  double Uniform();                    // [0, 1), 53-bit
  int Below(int n);                    // [0, n), rejection sampled
  int Range(int lo, int hi);           // [lo, hi]

 private:
  std::uint64_t s_[4];
};

enum class GridVariant { kSingleAgent, kMultiAgent };

struct GridWorldSpec {
  int n = 5;
  double wall_fraction = 0.40;
  double task_fraction = 0.10;
  int num_resources = 5;
  double capacity = 2.0;  // single agent: how many resources fit
  std::uint64_t seed = 1;
  GridVariant variant = GridVariant::kSingleAgent;
  int agents = 1;    // multiagent
  int horizon = 10;  // multiagent
  double switch_budget = 2.0;  // default single-agent switching budget
  double psi_budget = 3.0;     // default multiagent reallocation budget
  int schedule_size = 5;       // fixed reallocation times, including t = 1
  int max_retries = 1000;
};

// A sampled layout, kept for ASCII dumps and tests.
struct GridLayout {
  int n = 0;
  std::vector<char> wall;            // row-major, row 0 on top
  std::vector<int> task_cells;       // in reward order (task i has reward i+1)
  std::vector<int> move_resource;    // per cell, -1 for walls
  std::vector<int> task_resource;    // per task
  std::vector<int> task_release;     // multiagent only
  int start = 0;

  std::string Render() const;
};

// Single-agent world: throws Error(kRetryExhausted) if max_retries layouts in
// a row fail the reachability filter.
SingleAgentProblem GenGridworld(const GridWorldSpec& spec,
                                GridLayout* layout = nullptr);

MultiagentProblem GenMultiagentGridworld(
    const GridWorldSpec& spec, std::vector<GridLayout>* layouts = nullptr);

}  // namespace rmp

#endif  // RMP_DOMAINS_HPP_
