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
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "rmp/domains.hpp"
#include "rmp/errors.hpp"

namespace rmp {

namespace {

std::uint64_t SplitMix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& s : s_) s = SplitMix64(seed);
}

std::uint64_t Rng::Next() {
  const std::uint64_t result = Rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = Rotl(s_[3], 45);
  return result;
}

double Rng::Uniform() { return (Next() >> 11) * 0x1.0p-53; }

int Rng::Below(int n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = Next();
  } while (v >= limit);
  return static_cast<int>(v % bound);
}

int Rng::Range(int lo, int hi) { return lo + Below(hi - lo + 1); }

namespace {

// Action outcome constants.
constexpr double kWaitStay = 0.95;
constexpr double kUnsafeIntended = 0.4;
constexpr double kUnsafeOther = 0.1;
constexpr double kUnsafeStay = 0.1;
constexpr double kSafeIntended = 0.95;
constexpr double kDoStay = 0.95;

// up, left, down, right; row 0 is the top row.
constexpr std::array<int, 4> kDr = {-1, 0, 1, 0};
constexpr std::array<int, 4> kDc = {0, -1, 0, 1};
constexpr std::array<const char*, 4> kDirName = {"up", "left", "down", "right"};

int Round(double v) { return static_cast<int>(std::floor(v + 0.5)); }

int Target(const GridLayout& g, int cell, int dir) {
  const int r = cell / g.n + kDr[dir];
  const int c = cell % g.n + kDc[dir];
  if (r < 0 || r >= g.n || c < 0 || c >= g.n) return cell;
  const int t = r * g.n + c;
  return g.wall[t] ? cell : t;
}

std::vector<int> ReachableCells(const GridLayout& g) {
  std::vector<char> seen(g.n * g.n, 0);
  std::vector<int> order = {g.start};
  seen[g.start] = 1;
  for (std::size_t q = 0; q < order.size(); ++q) {
    for (int d = 0; d < 4; ++d) {
      const int t = Target(g, order[q], d);
      if (!seen[t]) {
        seen[t] = 1;
        order.push_back(t);
      }
    }
  }
  std::sort(order.begin(), order.end());
  return order;
}

// First `count` entries of a partial Fisher-Yates shuffle of `pool`.
std::vector<int> Choose(Rng& rng, std::vector<int> pool, int count) {
  count = std::min<int>(count, static_cast<int>(pool.size()));
  for (int i = 0; i < count; ++i) {
    const int j = i + rng.Below(static_cast<int>(pool.size()) - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

// Draw order: walls, then (after the reachability filter) tasks, then one
// move resource per open cell in row-major order, then one resource per task
// in selection order, then release times (multiagent).
GridLayout SampleLayout(const GridWorldSpec& spec, Rng& rng, int start,
                        bool timed) {
  const int n = spec.n;
  const int cells = n * n;
  for (int attempt = 0; attempt < spec.max_retries; ++attempt) {
    GridLayout g;
    g.n = n;
    g.start = start;
    g.wall.assign(cells, 0);
    std::vector<int> pool;
    for (int c = 0; c < cells; ++c) {
      if (c != start) pool.push_back(c);
    }
    for (int c : Choose(rng, pool, Round(spec.wall_fraction * cells))) {
      g.wall[c] = 1;
    }
    if (2 * static_cast<int>(ReachableCells(g).size()) <= cells) continue;

    pool.clear();
    for (int c = 0; c < cells; ++c) {
      if (!g.wall[c] && c != start) pool.push_back(c);
    }
    g.task_cells = Choose(rng, pool, Round(spec.task_fraction * cells));
    g.move_resource.assign(cells, -1);
    for (int c = 0; c < cells; ++c) {
      if (!g.wall[c]) g.move_resource[c] = rng.Below(spec.num_resources);
    }
    for (std::size_t i = 0; i < g.task_cells.size(); ++i) {
      g.task_resource.push_back(rng.Below(spec.num_resources));
    }
    if (timed) {
      for (std::size_t i = 0; i < g.task_cells.size(); ++i) {
        g.task_release.push_back(rng.Range(1, std::max(1, spec.horizon - 2)));
      }
    }
    return g;
  }
  throw Error(ErrorCode::kRetryExhausted,
              "no grid passed the reachability filter in " +
                  std::to_string(spec.max_retries) + " attempts");
}

std::string CellName(int n, int cell) {
  return "r" + std::to_string(cell / n) + "c" + std::to_string(cell % n);
}

void AddOutcome(std::vector<Outcome>& out, int next, double p) {
  for (Outcome& o : out) {
    if (o.next == next) {
      o.prob += p;
      return;
    }
  }
  out.push_back({next, p});
}

// Movement actions shared by both variants. `state_of` maps a cell to the
// successor state index (-1 drops the mass).
template <typename StateOf>
void AddMoveActions(Mdp& mdp, int s, const GridLayout& g, int cell,
                    StateOf state_of) {
  auto to = [&](int c) { return state_of(c); };
  Action wait;
  wait.name = "wait";
  if (int t = to(cell); t >= 0) AddOutcome(wait.outcomes, t, kWaitStay);
  mdp.AddAction(s, std::move(wait));
  for (int d = 0; d < 4; ++d) {
    Action a;
    a.name = kDirName[d];
    for (int e = 0; e < 4; ++e) {
      const double p = e == d ? kUnsafeIntended : kUnsafeOther;
      if (int t = to(Target(g, cell, e)); t >= 0) AddOutcome(a.outcomes, t, p);
    }
    if (int t = to(cell); t >= 0) AddOutcome(a.outcomes, t, kUnsafeStay);
    mdp.AddAction(s, std::move(a));
  }
  for (int d = 0; d < 4; ++d) {
    Action a;
    a.name = std::string("safe-") + kDirName[d];
    a.requires_resources = {g.move_resource[cell]};
    if (int t = to(Target(g, cell, d)); t >= 0) {
      AddOutcome(a.outcomes, t, kSafeIntended);
    }
    mdp.AddAction(s, std::move(a));
  }
}

CapacitySpec MakeResources(int count) {
  CapacitySpec cap;
  for (int o = 0; o < count; ++o) cap.resources.push_back("o" + std::to_string(o + 1));
  return cap;
}

}  // namespace

std::string GridLayout::Render() const {
  std::vector<std::string> rows(n, std::string(n, '.'));
  for (int c = 0; c < n * n; ++c) {
    if (wall[c]) rows[c / n][c % n] = '#';
  }
  const std::string digits =
      "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
  for (std::size_t i = 0; i < task_cells.size(); ++i) {
    rows[task_cells[i] / n][task_cells[i] % n] =
        i < digits.size() ? digits[i] : '*';
  }
  rows[start / n][start % n] = 'S';
  std::string out;
  for (const auto& r : rows) out += r + "\n";
  return out;
}

SingleAgentProblem GenGridworld(const GridWorldSpec& spec,
                                GridLayout* layout) {
  if (spec.n < 2 || spec.num_resources < 1) {
    throw Error(ErrorCode::kInvalidInput, "grid needs n >= 2 and resources");
  }
  const int n = spec.n;
  Rng rng(spec.seed);
  GridLayout g = SampleLayout(spec, rng, (n - 1) * n, false);

  // Reward i for the i-th closest task to the start; ties in row-major order.
  std::vector<int> idx(g.task_cells.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto dist = [&](int c) {
    return std::abs(c / n - g.start / n) + std::abs(c % n - g.start % n);
  };
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    const int da = dist(g.task_cells[a]), db = dist(g.task_cells[b]);
    return da != db ? da < db : g.task_cells[a] < g.task_cells[b];
  });
  std::vector<int> cells, res;
  for (int i : idx) {
    cells.push_back(g.task_cells[i]);
    res.push_back(g.task_resource[i]);
  }
  g.task_cells = std::move(cells);
  g.task_resource = std::move(res);

  SingleAgentProblem p;
  p.name = "grid_n" + std::to_string(n) + "_seed" + std::to_string(spec.seed);
  const std::vector<int> reach = ReachableCells(g);
  std::vector<int> state(n * n, -1);
  for (int c : reach) state[c] = p.mdp.AddState(CellName(n, c));
  std::vector<int> task_at(n * n, -1);
  for (std::size_t i = 0; i < g.task_cells.size(); ++i) {
    task_at[g.task_cells[i]] = static_cast<int>(i);
  }
  for (int c : reach) {
    AddMoveActions(p.mdp, state[c], g, c, [&](int t) { return state[t]; });
    if (task_at[c] >= 0) {
      Action a;
      a.name = "do";
      a.reward = task_at[c] + 1;
      a.requires_resources = {g.task_resource[task_at[c]]};
      p.mdp.AddAction(state[c], std::move(a));
    }
  }
  p.alpha = InitialDistribution::Point(p.mdp.num_states(), state[g.start]);
  p.cap = MakeResources(spec.num_resources);
  p.cap.capacities = {"hold"};
  p.cap.tau.assign(spec.num_resources, {1.0});
  p.cap.tau_hat = {spec.capacity};
  std::vector<double> lambda(p.mdp.num_states(), 1.0);
  lambda[state[g.start]] = 0.0;
  p.switching = PhaseSwitchSpec::Budgeted(std::move(lambda), spec.switch_budget);
  if (layout != nullptr) *layout = std::move(g);
  return p;
}

MultiagentProblem GenMultiagentGridworld(const GridWorldSpec& spec,
                                         std::vector<GridLayout>* layouts) {
  if (spec.n < 2 || spec.num_resources < 1 || spec.agents < 1 ||
      spec.horizon < 1) {
    throw Error(ErrorCode::kInvalidInput, "invalid multiagent grid spec");
  }
  const int n = spec.n;
  const int horizon = spec.horizon;
  Rng rng(spec.seed);
  MultiagentProblem p;
  p.horizon = horizon;
  p.shared = MakeResources(spec.num_resources);
  p.shared.tau.assign(spec.num_resources, {});
  p.shared.omega_hat.assign(spec.num_resources, 1);
  if (layouts != nullptr) layouts->clear();

  for (int m = 0; m < spec.agents; ++m) {
    const GridLayout g = SampleLayout(spec, rng, (n / 2) * n + n / 2, true);
    AgentModel agent;
    agent.name = "agent" + std::to_string(m + 1);
    std::vector<int> task_at(n * n, -1);
    for (std::size_t i = 0; i < g.task_cells.size(); ++i) {
      task_at[g.task_cells[i]] = static_cast<int>(i);
    }
    // States (t, cell) reachable from (1, start), built breadth-first in time.
    std::map<std::pair<int, int>, int> index;
    std::vector<std::pair<int, int>> order;
    auto intern = [&](int t, int cell) {
      if (t > horizon) return -1;
      auto [it, fresh] = index.emplace(std::make_pair(t, cell),
                                       static_cast<int>(order.size()));
      if (fresh) {
        order.emplace_back(t, cell);
        agent.mdp.AddState("t" + std::to_string(t) + "_" + CellName(n, cell), t);
      }
      return it->second;
    };
    intern(1, g.start);
    for (std::size_t q = 0; q < order.size(); ++q) {
      const auto [t, cell] = order[q];
      const int s = static_cast<int>(q);
      AddMoveActions(agent.mdp, s, g, cell,
                     [&](int c) { return intern(t + 1, c); });
      if (const int k = task_at[cell]; k >= 0) {
        Action a;
        a.name = "do";
        const int release = g.task_release[k];
        a.reward = (t >= release && t < release + 3) ? k + 1 : 0.0;
        a.requires_resources = {g.task_resource[k]};
        if (int nx = intern(t + 1, cell); nx >= 0) {
          a.outcomes.push_back({nx, kDoStay});
        }
        agent.mdp.AddAction(s, std::move(a));
      }
    }
    agent.alpha = InitialDistribution::Point(agent.mdp.num_states(), 0);
    p.agents.push_back(std::move(agent));
    if (layouts != nullptr) layouts->push_back(g);
  }
  return p;
}

}  // namespace rmp
