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

#include <vector>

#include "doctest.h"
#include "rmp/baselines.hpp"
#include "rmp/domains.hpp"
#include "rmp/errors.hpp"
#include "rmp/io.hpp"
#include "support/golden.hpp"
#include "support/instances.hpp"
#include "support/invariants.hpp"
#include "support/tableau_oracle.hpp"

namespace rmp {
namespace {

using testing::RandomSingle;

TEST_CASE("brute force agrees with branch and bound on one-shot models") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    CAPTURE(seed);
    const SingleAgentProblem p = RandomSingle(seed, {3, 6, 1, 5, 0.6});
    const ConstrainedModel cm = BuildConstrainedMilp(
        p.mdp, p.alpha, p.cap, ComputeXBound(p.mdp, p.alpha));
    const OracleResult brute = BruteForce(cm.model);
    const MilpSolution milp = SolveMilp(cm.model);
    REQUIRE(brute.feasible);
    CHECK(brute.enumerated == (1L << cm.model.num_binaries()));
    CHECK(milp.objective == doctest::Approx(brute.objective).epsilon(1e-9));
    CHECK(cm.model.MaxViolation(brute.values) < 1e-7);
  }
}

TEST_CASE("brute force matches the tableau oracle") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    CAPTURE(seed);
    const SingleAgentProblem p = RandomSingle(seed, {3, 4, 1, 3, 0.6});
    const MilpModel m = BuildSrmpMilp(p.mdp, p.alpha, p.cap, p.switching,
                                      ComputeXBound(p.mdp, p.alpha))
                            .model;
    if (m.num_binaries() > 10) continue;
    const testing::OracleLp t = testing::BruteForceTableau(m);
    const OracleResult b = BruteForce(m);
    REQUIRE(t.status == testing::OracleStatus::kOptimal);
    CHECK(b.objective == doctest::Approx(t.objective).epsilon(1e-7));
  }
}

TEST_CASE("brute force refuses large or unbounded models") {
  MilpModel big;
  for (int i = 0; i < 5; ++i) big.AddBinary("b" + std::to_string(i));
  try {
    BruteForce(big, 4);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooManyBinaries);
  }
  MilpModel open;
  const int y = open.AddContinuous("y");
  open.AddBinary("b");
  open.SetObjective(y, 1.0);
  CHECK_THROWS_AS(BruteForce(open), Error);

  MilpModel none;
  const int x = none.AddContinuous("x", 0, 1);
  none.SetObjective(x, 2.0);
  const OracleResult r = BruteForce(none);
  CHECK(r.enumerated == 1);
  CHECK(r.objective == doctest::Approx(2.0));
}

TEST_CASE("expansion baseline reproduces the phasing optimum") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    const SingleAgentProblem p = RandomSingle(seed, {3, 5, 1, 3, 0.6});
    const PhasePlan milp = SolveSrmp(p.mdp, p.alpha, p.cap, p.switching);
    const ExpandResult e = ExpandMdpBaseline(p.mdp, p.alpha, p.cap, p.switching);
    CHECK(e.value == doctest::Approx(milp.objective).epsilon(1e-7));
    CHECK(EvaluatePhasePlan(p.mdp, e.plan, p.alpha) ==
          doctest::Approx(e.value).epsilon(1e-7));
    CHECK(testing::PhasePlanViolation(p.mdp, p.alpha, p.cap, p.switching,
                                      e.plan) < 1e-7);
  }
}

TEST_CASE("expansion baseline on the running example and a grid") {
  const SingleAgentProblem p = LoadRunningExample();
  PhaseSwitchSpec spec = p.switching;
  spec.budget = 2.0;
  const ExpandResult e = ExpandMdpBaseline(p.mdp, p.alpha, p.cap, spec);
  CHECK(testing::Golden(e.value, 173.80));

  GridWorldSpec g;
  g.seed = 3;
  const SingleAgentProblem w = GenGridworld(g);
  CHECK(ExpandMdpBaseline(w.mdp, w.alpha, w.cap, w.switching).value ==
        doctest::Approx(SolveSrmp(w.mdp, w.alpha, w.cap, w.switching).objective)
            .epsilon(1e-7));
}

TEST_CASE("expansion baseline enforces its state cap") {
  const SingleAgentProblem p = LoadRunningExample();
  ExpandConfig config;
  config.max_states = 10;
  try {
    ExpandMdpBaseline(p.mdp, p.alpha, p.cap, p.switching, config);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStateSpaceTooLarge);
  }
}

}  // namespace
}  // namespace rmp
