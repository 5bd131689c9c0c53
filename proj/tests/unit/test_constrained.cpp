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
#include <vector>

#include "doctest.h"
#include "rmp/constrained.hpp"
#include "rmp/domains.hpp"
#include "rmp/errors.hpp"
#include "support/golden.hpp"
#include "support/instances.hpp"
#include "support/invariants.hpp"

namespace rmp {
namespace {

using testing::RandomSingle;

// Best bundle by enumeration: each feasible bundle turns into an ordinary
// MDP with the unusable actions removed.
double BestBundleValue(const SingleAgentProblem& p) {
  double best = -kInf;
  for (const ResourceBundle& b : p.cap.FeasibleBundles(1 << 20)) {
    best = std::max(best,
                    SolveUnconstrained(RestrictToBundle(p.mdp, b), p.alpha).value);
  }
  return best;
}

TEST_CASE("running example one-shot allocation") {
  const SingleAgentProblem p = LoadRunningExample();
  const ConstrainedResult r = SolveConstrained(p.mdp, p.alpha, p.cap);
  CHECK(testing::Golden(r.value, 65.02));
  REQUIRE(r.bundle.held.size() == 1);
  CHECK(p.cap.resources[r.bundle.held[0]] == "o5");
  CHECK(r.info.status == SolveStatus::kOptimal);
}

TEST_CASE("one-shot optimum equals the best enumerated bundle") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    CAPTURE(seed);
    const SingleAgentProblem p = RandomSingle(seed, {3, 6, 1, 4, 0.6});
    const ConstrainedResult r = SolveConstrained(p.mdp, p.alpha, p.cap);
    CHECK(r.value == doctest::Approx(BestBundleValue(p)).epsilon(1e-7));
  }
}

TEST_CASE("constrained value is sandwiched") {
  for (std::uint64_t seed = 100; seed <= 160; ++seed) {
    CAPTURE(seed);
    const SingleAgentProblem p = RandomSingle(seed, {3, 6, 1, 4, 0.6});
    const ConstrainedResult r = SolveConstrained(p.mdp, p.alpha, p.cap);
    const double free = SolveUnconstrained(p.mdp, p.alpha).value;
    const double bare =
        SolveUnconstrained(RestrictToBundle(p.mdp, {}), p.alpha).value;
    CHECK(r.value <= free + 1e-7);
    CHECK(r.value >= bare - 1e-7);
  }
}

TEST_CASE("returned occupancy respects flow, bundle and capacity") {
  for (std::uint64_t seed = 200; seed <= 260; ++seed) {
    CAPTURE(seed);
    const SingleAgentProblem p = RandomSingle(seed, {3, 6, 1, 4, 0.6});
    const ConstrainedResult r = SolveConstrained(p.mdp, p.alpha, p.cap);
    CHECK(testing::FlowViolation(p.mdp, p.alpha, r.x) < 1e-7);
    CHECK(testing::LinkingViolation(p.mdp, r.x, r.bundle) < 1e-7);
    CHECK(testing::CapacityViolation(p.cap, r.bundle) < 1e-9);
    CHECK(EvaluatePolicy(p.mdp, r.policy, p.alpha) ==
          doctest::Approx(r.value).epsilon(1e-7));
  }
}

TEST_CASE("occupancy bound covers every policy") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    const SingleAgentProblem p = RandomSingle(seed);
    const double X = ComputeXBound(p.mdp, p.alpha);
    const UnconstrainedResult r = SolveUnconstrained(p.mdp, p.alpha);
    CHECK(r.x.Total() <= X + 1e-7);
  }
}

TEST_CASE("empty resource set gives the noop value") {
  SingleAgentProblem p = RandomSingle(7);
  CapacitySpec none;
  const Mdp bare = RestrictToBundle(p.mdp, {});
  const ConstrainedResult r = SolveConstrained(bare, p.alpha, none);
  CHECK(r.value == doctest::Approx(SolveUnconstrained(bare, p.alpha).value));
  CHECK(r.bundle.held.empty());
}

TEST_CASE("bundle enumeration") {
  CapacitySpec cap;
  cap.capacities = {"w"};
  cap.tau_hat = {2.0};
  for (int o = 0; o < 4; ++o) {
    cap.resources.push_back("r" + std::to_string(o));
    cap.tau.push_back({o == 3 ? 2.0 : 1.0});
  }
  // {} + 4 singles + pairs of the three unit resources.
  const std::vector<ResourceBundle> all = cap.FeasibleBundles(100);
  CHECK(all.size() == 8);
  for (const ResourceBundle& b : all) CHECK(cap.Feasible(b));
  try {
    cap.FeasibleBundles(5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStateSpaceTooLarge);
  }
}

}  // namespace
}  // namespace rmp
