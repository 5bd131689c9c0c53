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
#include "rmp/domains.hpp"
#include "rmp/errors.hpp"
#include "rmp/mrmp.hpp"
#include "support/golden.hpp"
#include "support/instances.hpp"
#include "support/invariants.hpp"

namespace rmp {
namespace {

using testing::RandomMulti;

std::vector<double> FreeFirst(int horizon) {
  std::vector<double> psi(horizon, 1.0);
  psi[0] = 0.0;
  return psi;
}

std::vector<int> AllTimes(int horizon) {
  std::vector<int> t;
  for (int i = 1; i <= horizon; ++i) t.push_back(i);
  return t;
}

double UnconstrainedSum(const MultiagentProblem& mp) {
  double sum = 0.0;
  for (const AgentModel& a : mp.agents) {
    sum += SolveUnconstrained(a.mdp, a.alpha).value;
  }
  return sum;
}

TEST_CASE("two-agent fixture values") {
  const MultiagentProblem mp = LoadTwoAgentExample();
  CHECK(testing::Golden(UnconstrainedSum(mp), 93.64));

  const AllocationSchedule one = SolveMrmpOneshot(mp);
  CHECK(testing::Golden(one.utility, 49.64));

  const AllocationSchedule fixed =
      SolveMrmp(mp, ReallocSpec::Fixed({1, 3, 6, 8}));
  CHECK(testing::Golden(fixed.utility, 65.04));

  const AllocationSchedule budget =
      SolveMrmp(mp, ReallocSpec::Budget(FreeFirst(mp.horizon), 3.0));
  CHECK(testing::Golden(budget.utility, 72.25));
  CHECK(budget.realloc_times == std::vector<int>{1, 4, 5, 8});

  const AllocationSchedule transfer =
      SolveMrmp(mp, ReallocSpec::UniformTransfer(mp, 5.0));
  CHECK(testing::Golden(transfer.utility, 48.72));
  CHECK(transfer.cost == doctest::Approx(20.0));
  const ScheduleScore score = ScoreSchedule(mp, transfer, 5.0);
  CHECK(score.transfers == 4);
}

TEST_CASE("re-pricing schedules at a transfer cost") {
  const MultiagentProblem mp = LoadTwoAgentExample();
  const double c = 5.0;
  const AllocationSchedule fixed =
      SolveMrmp(mp, ReallocSpec::Fixed({1, 3, 6, 8}));
  const AllocationSchedule budget =
      SolveMrmp(mp, ReallocSpec::Budget(FreeFirst(10), 3.0));
  CHECK(testing::Golden(ScoreSchedule(mp, SolveMrmpOneshot(mp), c).utility,
                        39.64));
  CHECK(testing::Golden(ScoreSchedule(mp, fixed, c).utility, 30.04));
  CHECK(testing::Golden(ScoreSchedule(mp, budget, c).utility, 47.25));
}

TEST_CASE("every formulation is bounded by the unconstrained sum") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    const MultiagentProblem mp = RandomMulti(seed);
    const double ub = UnconstrainedSum(mp);
    CHECK(SolveMrmpOneshot(mp).reward <= ub + 1e-7);
    CHECK(SolveMrmp(mp, ReallocSpec::Fixed(AllTimes(mp.horizon))).reward <=
          ub + 1e-7);
    CHECK(SolveMrmp(mp, ReallocSpec::Budget(FreeFirst(mp.horizon), 9)).reward <=
          ub + 1e-7);
  }
}

TEST_CASE("objective is nondecreasing in the reallocation budget") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    const MultiagentProblem mp = RandomMulti(seed);
    double last = -kInf;
    for (int budget = 0; budget <= mp.horizon; ++budget) {
      const AllocationSchedule s =
          SolveMrmp(mp, ReallocSpec::Budget(FreeFirst(mp.horizon), budget));
      CHECK(s.utility >= last - 1e-6);
      last = s.utility;
    }
  }
}

TEST_CASE("refining a fixed schedule never hurts") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    const MultiagentProblem mp = RandomMulti(seed);
    testing::TestRng rng(seed);
    std::vector<int> times = {1};
    double last = SolveMrmp(mp, ReallocSpec::Fixed(times)).utility;
    std::vector<int> rest;
    for (int t = 2; t <= mp.horizon; ++t) rest.push_back(t);
    while (!rest.empty()) {
      const int k = rng.Below(static_cast<int>(rest.size()));
      times.push_back(rest[k]);
      rest.erase(rest.begin() + k);
      const double v = SolveMrmp(mp, ReallocSpec::Fixed(times)).utility;
      CHECK(v >= last - 1e-6);
      last = v;
    }
  }
}

TEST_CASE("degenerate settings coincide") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    CAPTURE(seed);
    const MultiagentProblem mp = RandomMulti(seed);
    const int T = mp.horizon;
    const double oneshot = SolveMrmpOneshot(mp).utility;
    const double every = SolveMrmp(mp, ReallocSpec::Fixed(AllTimes(T))).utility;
    CHECK(SolveMrmp(mp, ReallocSpec::Fixed({1})).utility ==
          doctest::Approx(oneshot).epsilon(1e-7));
    CHECK(SolveMrmp(mp, ReallocSpec::Budget(FreeFirst(T), 0)).utility ==
          doctest::Approx(oneshot).epsilon(1e-7));
    CHECK(SolveMrmp(mp, ReallocSpec::Budget(FreeFirst(T), T)).utility ==
          doctest::Approx(every).epsilon(1e-7));
    CHECK(SolveMrmp(mp, ReallocSpec::EventCost(std::vector<double>(T, 0.0)))
              .utility == doctest::Approx(every).epsilon(1e-7));
    CHECK(SolveMrmp(mp, ReallocSpec::UniformTransfer(mp, 0.0)).utility ==
          doctest::Approx(every).epsilon(1e-7));
  }
}

TEST_CASE("transfer cost counts exactly the acquisitions") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    const MultiagentProblem mp = RandomMulti(seed);
    const double c = 0.37;
    const AllocationSchedule s = SolveMrmp(mp, ReallocSpec::UniformTransfer(mp, c));
    int acquisitions = 0;
    for (int m = 1; m <= mp.num_agents(); ++m) {
      for (int o = 0; o < mp.num_resources(); ++o) {
        for (int t = 1; t <= mp.horizon; ++t) {
          const int before = t == 1 ? 0 : s.held(m, o, t - 1);
          if (s.held(m, o, t) > before) acquisitions += s.held(m, o, t) - before;
        }
      }
    }
    CHECK(s.cost == doctest::Approx(c * acquisitions).epsilon(1e-9));
    CHECK(s.utility == doctest::Approx(s.reward - s.cost).epsilon(1e-9));
  }
}

TEST_CASE("schedules satisfy conservation, linking and pool sizes") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    const MultiagentProblem mp = RandomMulti(seed);
    const ReallocSpec r = testing::RandomRealloc(mp, seed);
    ReallocSpec fixed = ReallocSpec::Fixed(r.times);
    for (const ReallocSpec& spec :
         {ReallocSpec::OneShot(), fixed, r, ReallocSpec::EventCost(r.psi),
          ReallocSpec::Transfer(r.transfer_cost)}) {
      const std::string mode = ToString(spec.mode);
      CAPTURE(mode);
      const AllocationSchedule s = SolveMrmp(mp, spec);
      CHECK(testing::ScheduleViolation(mp, s) < 1e-7);
      double reward = 0.0;
      for (int m = 0; m < mp.num_agents(); ++m) {
        reward += EvaluatePolicy(mp.agents[m].mdp, s.policies[m],
                                 mp.agents[m].alpha);
      }
      CHECK(reward == doctest::Approx(s.reward).epsilon(1e-7));
    }
  }
}

TEST_CASE("more copies of a resource never hurt") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CAPTURE(seed);
    MultiagentProblem mp = RandomMulti(seed);
    const double base = SolveMrmpOneshot(mp).utility;
    for (int& c : mp.shared.omega_hat) c += 1;
    CHECK(SolveMrmpOneshot(mp).utility >= base - 1e-7);
  }
}

TEST_CASE("reallocation specs are validated") {
  const MultiagentProblem mp = LoadTwoAgentExample();
  CHECK_THROWS_AS(SolveMrmp(mp, ReallocSpec::Fixed({0, 3})), Error);
  CHECK_THROWS_AS(SolveMrmp(mp, ReallocSpec::Budget({0.0, 1.0}, 1.0)), Error);
  CHECK_THROWS_AS(SolveMrmp(mp, ReallocSpec::Transfer({})), Error);
}

}  // namespace
}  // namespace rmp
