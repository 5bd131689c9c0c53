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

#include <string>
#include <vector>

#include "doctest.h"
#include "rmp/constrained.hpp"
#include "rmp/domains.hpp"
#include "rmp/errors.hpp"
#include "rmp/srmp.hpp"
#include "support/golden.hpp"
#include "support/instances.hpp"
#include "support/invariants.hpp"

namespace rmp {
namespace {

using testing::RandomSingle;

std::vector<std::string> Names(const Mdp& mdp, const std::vector<int>& states) {
  std::vector<std::string> out;
  for (int s : states) out.push_back(mdp.state_name(s));
  return out;
}

std::string BundleName(const CapacitySpec& cap, const ResourceBundle& b) {
  std::string out;
  for (int o : b.held) out += cap.resources[o];
  return out;
}

TEST_CASE("running example phasing with budget 2") {
  const SingleAgentProblem p = LoadRunningExample();
  PhaseSwitchSpec spec = p.switching;
  spec.budget = 2.0;
  SolveInfo info;
  const PhasePlan plan = SolveSrmp(p.mdp, p.alpha, p.cap, spec, {}, &info);
  CHECK(testing::Golden(plan.objective, 173.80));
  CHECK(Names(p.mdp, plan.switching_states) ==
        std::vector<std::string>{"S1", "S3", "S5"});
  std::vector<std::string> bundles;
  for (const Phase& ph : plan.phases) {
    if (ph.occupancy.Total() > 1e-9) bundles.push_back(BundleName(p.cap, ph.bundle));
  }
  CHECK(bundles == std::vector<std::string>{"o1", "o3", "o5"});
  CHECK(EvaluatePhasePlan(p.mdp, plan, p.alpha) ==
        doctest::Approx(plan.reward).epsilon(1e-9));
}

TEST_CASE("zero budget reduces to one-shot allocation") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    CAPTURE(seed);
    SingleAgentProblem p = RandomSingle(seed);
    p.switching.budget = 0.0;
    const PhasePlan plan = SolveSrmp(p.mdp, p.alpha, p.cap, p.switching);
    CHECK(plan.objective ==
          doctest::Approx(SolveConstrained(p.mdp, p.alpha, p.cap).value)
              .epsilon(1e-7));
  }
}

TEST_CASE("objective is nondecreasing in the switching budget") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    CAPTURE(seed);
    SingleAgentProblem p = RandomSingle(seed);
    double last = -kInf;
    for (int budget = 0; budget <= 6; ++budget) {
      p.switching.budget = budget;
      const PhasePlan plan = SolveSrmp(p.mdp, p.alpha, p.cap, p.switching);
      CHECK(plan.objective >= last - 1e-6);
      last = plan.objective;
    }
    // An unlimited budget can never beat the unconstrained MDP.
    CHECK(last <= SolveUnconstrained(p.mdp, p.alpha).value + 1e-6);
  }
}

TEST_CASE("plans satisfy conservation and linking") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    CAPTURE(seed);
    const SingleAgentProblem p = RandomSingle(seed);
    const PhasePlan plan = SolveSrmp(p.mdp, p.alpha, p.cap, p.switching);
    CHECK(testing::PhasePlanViolation(p.mdp, p.alpha, p.cap, p.switching,
                                      plan) < 1e-7);
    CHECK(EvaluatePhasePlan(p.mdp, plan, p.alpha) ==
          doctest::Approx(plan.reward).epsilon(1e-7));
  }
}

TEST_CASE("singleton groups behave like per-state costs") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    const SingleAgentProblem p = RandomSingle(seed);
    const int S = p.mdp.num_states();
    std::vector<int> group_of(S);
    for (int s = 0; s < S; ++s) group_of[s] = s;
    const PhaseSwitchSpec grouped =
        PhaseSwitchSpec::Grouped(group_of, p.switching.lambda, p.switching.budget);
    const PhasePlan a = SolveSrmp(p.mdp, p.alpha, p.cap, p.switching);
    const PhasePlan b = SolveSrmp(p.mdp, p.alpha, p.cap, grouped);
    CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-7));
  }
}

TEST_CASE("grouped switching dominates paying the group cost per member") {
  // One payment buys every member of the group, and unused switching states
  // cost nothing.
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    const SingleAgentProblem p = RandomSingle(seed);
    const PhaseSwitchSpec g = testing::RandomGroups(p, seed);
    std::vector<double> lambda(p.mdp.num_states());
    for (int s = 0; s < p.mdp.num_states(); ++s) {
      lambda[s] = g.group_lambda[g.group_of[s]];
    }
    const PhasePlan grouped = SolveSrmp(p.mdp, p.alpha, p.cap, g);
    const PhasePlan per_state = SolveSrmp(
        p.mdp, p.alpha, p.cap, PhaseSwitchSpec::Budgeted(lambda, g.budget));
    CHECK(grouped.objective >= per_state.objective - 1e-6);
    CHECK(testing::PhasePlanViolation(p.mdp, p.alpha, p.cap, g, grouped) <
          1e-7);
  }
}

TEST_CASE("running example grouped switching") {
  const SingleAgentProblem p = LoadRunningExample();
  auto id = [&](const char* s) { return p.mdp.FindState(s); };
  std::vector<int> group_of(6);
  group_of[id("S1")] = 0;
  group_of[id("S2")] = group_of[id("S3")] = 1;
  group_of[id("S4")] = group_of[id("S5")] = 2;
  group_of[id("S6")] = 3;
  const PhaseSwitchSpec spec =
      PhaseSwitchSpec::Grouped(group_of, {0.0, 1.0, 1.0, 1.0}, 1.0);
  const PhasePlan plan = SolveSrmp(p.mdp, p.alpha, p.cap, spec);
  CHECK(testing::Golden(plan.reward, 165.68));
  CHECK(Names(p.mdp, plan.switching_states) ==
        std::vector<std::string>{"S1", "S4", "S5"});
}

TEST_CASE("cost in objective charges every non-free switch") {
  const SingleAgentProblem p = LoadRunningExample();
  std::vector<double> lambda(6, 50.0);
  lambda[p.mdp.FindState("S1")] = 0.0;
  const PhasePlan plan = SolveSrmp(p.mdp, p.alpha, p.cap,
                                   PhaseSwitchSpec::CostInObjective(lambda));
  CHECK(Names(p.mdp, plan.switching_states) ==
        std::vector<std::string>{"S1", "S5"});
  CHECK(testing::Golden(plan.reward, 152.55));
  CHECK(plan.creation_cost == doctest::Approx(50.0));
  CHECK(testing::Golden(plan.objective, 102.55));
}

TEST_CASE("abstract solver on the running example") {
  const SingleAgentProblem p = LoadRunningExample();
  const std::vector<int> fixed = {p.mdp.FindState("S1"), p.mdp.FindState("S3"),
                                  p.mdp.FindState("S4")};
  AbstractTrace trace;
  const PhasePlan plan =
      SolveFixedPhasesAbstract(p.mdp, p.alpha, p.cap, fixed, {}, &trace);
  CHECK(testing::Golden(plan.anchor_values.at(fixed[0]), 113.65));
  CHECK(testing::Golden(plan.anchor_values.at(fixed[1]), 120.65));
  CHECK(testing::Golden(plan.anchor_values.at(fixed[2]), 123.05));
  std::vector<std::string> bundles;
  for (const Phase& ph : plan.phases) bundles.push_back(BundleName(p.cap, ph.bundle));
  CHECK(bundles == std::vector<std::string>{"o1", "o5", "o5"});
}

TEST_CASE("abstract values improve monotonically and sit between bounds") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    const SingleAgentProblem p = RandomSingle(seed);
    std::vector<int> fixed;
    for (int s = 0; s < p.mdp.num_states(); ++s) {
      if (p.switching.Eligible(s)) fixed.push_back(s);
    }
    AbstractTrace trace;
    const PhasePlan plan =
        SolveFixedPhasesAbstract(p.mdp, p.alpha, p.cap, fixed, {}, &trace);
    for (std::size_t k = 1; k < trace.values.size(); ++k) {
      for (std::size_t i = 0; i < trace.values[k].size(); ++i) {
        CHECK(trace.values[k][i] >= trace.values[k - 1][i] - 1e-7);
      }
    }
    // Every one-shot policy is available to the abstract MDP, and the MILP
    // with free switching at the same states can also decline to switch.
    std::vector<double> lambda(p.mdp.num_states(), 1.0);
    for (int s : fixed) lambda[s] = 0.0;
    const PhasePlan milp = SolveSrmp(p.mdp, p.alpha, p.cap,
                                     PhaseSwitchSpec::Budgeted(lambda, 0.0));
    const double one_shot = SolveConstrained(p.mdp, p.alpha, p.cap).value;
    CHECK(plan.objective >= one_shot - 1e-6);
    CHECK(plan.objective <= milp.objective + 1e-6);
    CHECK(EvaluatePhasePlan(p.mdp, plan, p.alpha) ==
          doctest::Approx(plan.objective).epsilon(1e-7));
  }
}

TEST_CASE("switching specs are validated") {
  const SingleAgentProblem p = LoadRunningExample();
  std::vector<double> lambda(6, 1.0);  // start state not free
  CHECK_THROWS_AS(SolveSrmp(p.mdp, p.alpha, p.cap,
                            PhaseSwitchSpec::Budgeted(lambda, 0.5)),
                  Error);
  CHECK_THROWS_AS(
      SolveSrmp(p.mdp, p.alpha, p.cap, PhaseSwitchSpec::Budgeted({0.0}, 1.0)),
      Error);
}

}  // namespace
}  // namespace rmp
