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
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "doctest.h"
#include "rmp/domains.hpp"
#include "rmp/errors.hpp"
#include "rmp/io.hpp"

namespace rmp {
namespace {

int Count(const std::vector<char>& v) {
  return static_cast<int>(std::count(v.begin(), v.end(), 1));
}

// Open cells reachable from the start through 4-neighbour moves.
int Reachable(const GridLayout& g) {
  const int n = g.n;
  std::vector<char> seen(n * n, 0);
  std::queue<int> q;
  q.push(g.start);
  seen[g.start] = 1;
  int count = 0;
  while (!q.empty()) {
    const int c = q.front();
    q.pop();
    ++count;
    const int r = c / n, k = c % n;
    const int nb[4][2] = {{r - 1, k}, {r + 1, k}, {r, k - 1}, {r, k + 1}};
    for (const auto& p : nb) {
      if (p[0] < 0 || p[0] >= n || p[1] < 0 || p[1] >= n) continue;
      const int d = p[0] * n + p[1];
      if (!seen[d] && !g.wall[d]) {
        seen[d] = 1;
        q.push(d);
      }
    }
  }
  return count;
}

TEST_CASE("rng is deterministic and in range") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = a.Next();
    CHECK(x == b.Next());
    differs |= x != c.Next();
  }
  CHECK(differs);
  Rng r(7);
  std::vector<int> hist(6, 0);
  for (int i = 0; i < 60000; ++i) {
    const int v = r.Below(6);
    REQUIRE(v >= 0);
    REQUIRE(v < 6);
    ++hist[v];
    const double u = r.Uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  for (int i = 0; i < 100; ++i) {
    const int v = r.Range(-2, 2);
    CHECK(v >= -2);
    CHECK(v <= 2);
  }
}

TEST_CASE("grid generation is deterministic per seed") {
  GridWorldSpec spec;
  spec.n = 6;
  spec.seed = 11;
  const std::string a = EmitProblem(GenerateProblem(spec));
  CHECK(a == EmitProblem(GenerateProblem(spec)));
  spec.seed = 12;
  CHECK(a != EmitProblem(GenerateProblem(spec)));
}

TEST_CASE("wall and task counts follow the documented rounding") {
  for (int n : {4, 5, 6, 8, 10}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      CAPTURE(n);
      CAPTURE(seed);
      GridWorldSpec spec;
      spec.n = n;
      spec.seed = seed;
      GridLayout g;
      GenGridworld(spec, &g);
      const int cells = n * n;
      CHECK(Count(g.wall) == static_cast<int>(std::lround(0.4 * cells)));
      CHECK(static_cast<int>(g.task_cells.size()) ==
            static_cast<int>(std::lround(0.1 * cells)));
      CHECK_FALSE(g.wall[g.start]);
      for (int t : g.task_cells) {
        CHECK_FALSE(g.wall[t]);
        CHECK(t != g.start);
      }
      CHECK(Reachable(g) * 2 > cells);
    }
  }
  // n = 8: 25.6 walls round to 26, 6.4 tasks round to 6.
  GridWorldSpec spec;
  spec.n = 8;
  GridLayout g;
  GenGridworld(spec, &g);
  CHECK(Count(g.wall) == 26);
  CHECK(g.task_cells.size() == 6);
}

TEST_CASE("single-agent worlds are valid transient problems") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    GridWorldSpec spec;
    spec.seed = seed;
    const SingleAgentProblem p = GenGridworld(spec);
    CHECK_NOTHROW(p.mdp.Validate());
    CHECK_NOTHROW(p.cap.Validate(&p.mdp));
    CHECK(CheckTransient(p.mdp, p.alpha).transient);
    CHECK(p.cap.num_resources() == spec.num_resources);
  }
}

TEST_CASE("multiagent task windows are three steps wide") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    GridWorldSpec spec;
    spec.variant = GridVariant::kMultiAgent;
    spec.agents = 3;
    spec.horizon = 10;
    spec.seed = seed;
    std::vector<GridLayout> layouts;
    const MultiagentProblem mp = GenMultiagentGridworld(spec, &layouts);
    REQUIRE(mp.num_agents() == 3);
    REQUIRE(layouts.size() == 3);
    CHECK_NOTHROW(mp.Validate());
    for (int m = 0; m < 3; ++m) {
      const GridLayout& g = layouts[m];
      const Mdp& mdp = mp.agents[m].mdp;
      std::map<int, std::set<int>> paying;  // task -> times
      for (int s = 0; s < mdp.num_states(); ++s) {
        for (const Action& a : mdp.actions(s)) {
          if (a.name == "do" && a.reward > 0) {
            const int task = static_cast<int>(std::lround(a.reward)) - 1;
            paying[task].insert(mdp.time(s));
          }
        }
      }
      for (std::size_t k = 0; k < g.task_cells.size(); ++k) {
        const int release = g.task_release[k];
        CHECK(release >= 1);
        CHECK(release + 2 <= spec.horizon);
        for (int t : paying[static_cast<int>(k)]) {
          CHECK(t >= release);
          CHECK(t < release + 3);
        }
      }
    }
  }
}

TEST_CASE("impossible layouts exhaust the retries") {
  GridWorldSpec spec;
  spec.n = 5;
  spec.wall_fraction = 0.9;
  spec.max_retries = 5;
  try {
    GenGridworld(spec);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRetryExhausted);
  }
}

TEST_CASE("fixtures load") {
  const SingleAgentProblem p = LoadRunningExample();
  CHECK(p.mdp.num_states() == 6);
  CHECK(p.cap.num_resources() == 5);
  CHECK(p.cap.tau_hat == std::vector<double>{1.0});
  CHECK_THROWS_AS(LoadRunningExample("/nonexistent/fixture.rmp"), Error);
  const MultiagentProblem mp = LoadTwoAgentExample();
  CHECK(mp.num_agents() == 2);
  CHECK(mp.horizon == 10);
  CHECK(mp.shared.omega_hat == std::vector<int>{1, 1});
  CHECK(LoadTwoAgentExample(2).shared.omega_hat == std::vector<int>{2, 2});
}

}  // namespace
}  // namespace rmp
