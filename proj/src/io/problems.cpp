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
#include <string>
#include <vector>

#include "rmp/errors.hpp"
#include "rmp/io.hpp"

namespace rmp {
namespace {

// Keeps the fixed-schedule draws off the layout stream.
constexpr std::uint64_t kScheduleStream = 0x9e3779b97f4a7c15ULL;

std::vector<double> FreeFirst(int horizon) {
  std::vector<double> psi(horizon, 1.0);
  if (horizon > 0) psi[0] = 0.0;
  return psi;
}

}  // namespace

ProblemFile FixtureProblem(const std::string& name) {
  if (name == "running-example") {
    ProblemFile p = MakeProblem(LoadRunningExample());
    p.name = name;
    const Mdp& mdp = p.single.mdp;
    p.fixed_states = {mdp.FindState("S1"), mdp.FindState("S3"),
                      mdp.FindState("S4")};
    // {S1} {S2,S3} {S4,S5} {S6}; the start group is free.
    std::vector<int> groups(mdp.num_states(), 0);
    const char* names[] = {"S1", "S2", "S3", "S4", "S5", "S6"};
    const int group[] = {0, 1, 1, 2, 2, 3};
    for (int i = 0; i < 6; ++i) groups[mdp.FindState(names[i])] = group[i];
    p.single.switching.group_of = std::move(groups);
    p.single.switching.group_lambda = {0.0, 1.0, 1.0, 1.0};
    return p;
  }
  if (name == "two-agent") {
    const MultiagentProblem mp = LoadTwoAgentExample();
    ReallocSpec r = ReallocSpec::Budget(FreeFirst(mp.horizon), 3.0);
    r.times = {1, 3, 6, 8};
    r.transfer_cost = ReallocSpec::UniformTransfer(mp, 5.0).transfer_cost;
    return MakeProblem(mp, r, name);
  }
  throw Error(ErrorCode::kInvalidInput, "unknown fixture '" + name +
                                            "' (running-example, two-agent)");
}

ProblemFile GenerateProblem(const GridWorldSpec& spec) {
  const std::string name =
      std::string(spec.variant == GridVariant::kSingleAgent ? "grid" : "multi") +
      "-n" + std::to_string(spec.n) + "-o" + std::to_string(spec.num_resources) +
      "-s" + std::to_string(spec.seed);
  if (spec.variant == GridVariant::kSingleAgent) {
    ProblemFile p = MakeProblem(GenGridworld(spec));
    p.name = name;
    return p;
  }
  const MultiagentProblem mp = GenMultiagentGridworld(spec);
  ReallocSpec r = ReallocSpec::Budget(FreeFirst(mp.horizon), spec.psi_budget);
  std::vector<int> later;
  for (int t = 2; t <= mp.horizon; ++t) later.push_back(t);
  Rng rng(spec.seed ^ kScheduleStream);
  const int extra =
      std::clamp(spec.schedule_size - 1, 0, static_cast<int>(later.size()));
  r.times = {1};
  for (int i = 0; i < extra; ++i) {
    const int j = i + rng.Below(static_cast<int>(later.size()) - i);
    std::swap(later[i], later[j]);
    r.times.push_back(later[i]);
  }
  std::sort(r.times.begin(), r.times.end());
  r.transfer_cost = ReallocSpec::UniformTransfer(mp, 1.0).transfer_cost;
  return MakeProblem(mp, r, name);
}

void ApplyOverride(ProblemFile& problem, const std::string& key, double value) {
  const bool single = problem.kind == ProblemKind::kSingle;
  if (single && key == "budget") {
    problem.single.switching.budget = value;
  } else if (single && key == "lambda_scale") {
    for (double& l : problem.single.switching.lambda) l *= value;
    for (double& l : problem.single.switching.group_lambda) l *= value;
  } else if (!single && key == "psi_budget") {
    problem.realloc.psi_budget = value;
  } else if (!single && key == "transfer_cost") {
    problem.realloc.transfer_cost =
        ReallocSpec::UniformTransfer(problem.multi, value).transfer_cost;
  } else {
    throw Error(ErrorCode::kInvalidInput,
                "parameter '" + key + "' does not apply to this problem");
  }
}

}  // namespace rmp
