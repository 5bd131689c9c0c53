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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <queue>
#include <utility>
#include <vector>

#include "rmp/linprog.hpp"
#include "simplex.hpp"

namespace rmp {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Fixing {
  int var;
  std::uint8_t value;
};

struct Node {
  double bound = 0.0;
  long seq = 0;
  std::vector<Fixing> fixings;
  std::shared_ptr<const detail::Basis> basis;
};

// Best bound first; among equal bounds the node created first.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.seq > b.seq;
  }
};

void ApplyFixings(detail::Simplex& lp, const std::vector<Fixing>& fixings) {
  lp.ResetBounds();
  for (const Fixing& f : fixings) lp.SetBounds(f.var, f.value, f.value);
}

// True when a relaxation value `z` can still beat the incumbent.
bool Improves(double z, double incumbent, const SolverConfig& config) {
  if (incumbent == -kInf) return true;
  const double scale = std::max(1.0, std::fabs(incumbent));
  const double tol = 1e-9 * scale + config.optimality_gap * std::fabs(incumbent);
  return z > incumbent + tol;
}

// Diving rounds one binary at a time and follows the LP down to a leaf.
// It only seeds the incumbent; the search tree is untouched.
constexpr long kDiveEvery = 200;

}  // namespace

MilpSolution SolveLp(const MilpModel& model, const SolverConfig& config) {
  (void)config;
  const auto start = Clock::now();
  model.Validate();
  detail::Simplex lp(model);
  MilpSolution sol;
  const detail::LpStatus st = lp.Solve();
  sol.stats.lp_solves = 1;
  sol.stats.simplex_iterations = lp.iterations();
  switch (st) {
    case detail::LpStatus::kOptimal:
      sol.status = SolveStatus::kOptimal;
      sol.values = lp.StructuralValues();
      sol.objective = lp.Objective();
      sol.bound = sol.objective;
      break;
    case detail::LpStatus::kInfeasible:
      sol.status = SolveStatus::kInfeasible;
      break;
    case detail::LpStatus::kUnbounded:
      sol.status = SolveStatus::kUnbounded;
      sol.bound = kInf;
      break;
    case detail::LpStatus::kIterationLimit:
      sol.status = SolveStatus::kGapLimit;
      sol.bound = kInf;
      break;
  }
  sol.stats.wall_seconds = Seconds(start);
  return sol;
}

MilpSolution SolveMilp(const MilpModel& model, const SolverConfig& config) {
  const auto start = Clock::now();
  model.Validate();
  detail::Simplex lp(model);
  MilpSolution best;
  best.status = SolveStatus::kInfeasible;
  double incumbent = -kInf;

  std::vector<int> binaries;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.var(j).kind == VarKind::kBinary) binaries.push_back(j);
  }

  // Integral leaf of a dive or of the tree: pin every binary, re-solve so the
  // stored point satisfies the rows exactly, and keep it if it improves.
  auto offer = [&](std::vector<Fixing> fixings, std::vector<double> x,
                   const detail::Basis& basis) {
    for (int j : binaries) {
      fixings.push_back({j, static_cast<std::uint8_t>(std::lround(x[j]))});
    }
    ApplyFixings(lp, fixings);
    const detail::LpStatus polish = lp.SolveFrom(basis);
    ++best.stats.lp_solves;
    if (polish == detail::LpStatus::kOptimal) {
      x = lp.StructuralValues();
    } else {
      for (int j : binaries) x[j] = std::round(x[j]);
    }
    const double value = model.Evaluate(x);
    if (value > incumbent) {
      incumbent = value;
      best.values = std::move(x);
      best.objective = value;
    }
  };

  auto dive = [&](std::vector<Fixing> fixings, std::vector<double> x,
                  detail::Basis basis) {
    std::vector<char> fixed(model.num_vars(), 0);
    for (const Fixing& f : fixings) fixed[f.var] = 1;
    for (std::size_t step = 0; step <= binaries.size(); ++step) {
      if (Seconds(start) > config.time_limit) return;
      // Least fractional first: the cheapest rounding to follow.
      int pick = -1;
      double least = 1.0;
      for (int j : binaries) {
        if (fixed[j]) continue;
        const double frac = std::fabs(x[j] - std::round(x[j]));
        if (frac > config.integrality_tol && frac < least) {
          least = frac;
          pick = j;
        }
      }
      if (pick < 0) {
        offer(std::move(fixings), std::move(x), basis);
        return;
      }
      fixed[pick] = 1;
      const auto first = static_cast<std::uint8_t>(std::lround(x[pick]));
      bool moved = false;
      for (std::uint8_t v : {first, static_cast<std::uint8_t>(1 - first)}) {
        fixings.push_back({pick, v});
        ApplyFixings(lp, fixings);
        const detail::LpStatus st = lp.SolveFrom(basis);
        ++best.stats.lp_solves;
        if (st == detail::LpStatus::kOptimal &&
            Improves(lp.Objective(), incumbent, config)) {
          x = lp.StructuralValues();
          basis = lp.CurrentBasis();
          moved = true;
          break;
        }
        fixings.pop_back();
      }
      if (!moved) return;
    }
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_seq = 0;
  open.push(Node{kInf, next_seq++, {}, nullptr});
  bool limit_hit = false;
  bool unbounded = false;

  while (!open.empty()) {
    if (best.stats.nodes >= config.node_limit ||
        Seconds(start) > config.time_limit) {
      limit_hit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (!Improves(node.bound, incumbent, config)) {
      continue;
    }
    ++best.stats.nodes;

    ApplyFixings(lp, node.fixings);
    const detail::LpStatus st =
        node.basis ? lp.SolveFrom(*node.basis) : lp.Solve();
    ++best.stats.lp_solves;
    if (st == detail::LpStatus::kInfeasible) continue;
    if (st == detail::LpStatus::kUnbounded) {
      unbounded = true;
      break;
    }
    if (st == detail::LpStatus::kIterationLimit) {
      limit_hit = true;
      continue;
    }
    const double z = lp.Objective();
    if (!Improves(z, incumbent, config)) continue;

    std::vector<double> x = lp.StructuralValues();
    int branch = -1;
    double most = config.integrality_tol;
    for (int j : binaries) {
      const double frac = std::fabs(x[j] - std::round(x[j]));
      if (frac > most + 1e-15) {
        most = frac;
        branch = j;
      }
    }

    auto basis = std::make_shared<const detail::Basis>(lp.CurrentBasis());
    if (branch < 0) {
      offer(node.fixings, std::move(x), *basis);
      continue;
    }
    if (config.heuristics && (best.stats.nodes - 1) % kDiveEvery == 0) {
      dive(node.fixings, x, *basis);
    }

    for (std::uint8_t v : {std::uint8_t{0}, std::uint8_t{1}}) {
      Node child{z, next_seq++, node.fixings, basis};
      child.fixings.push_back({branch, v});
      open.push(std::move(child));
    }
  }

  best.stats.simplex_iterations = lp.iterations();
  best.stats.wall_seconds = Seconds(start);
  if (unbounded) {
    best.status = SolveStatus::kUnbounded;
    best.values.clear();
    best.bound = kInf;
    return best;
  }
  double open_bound = -kInf;
  if (!open.empty()) open_bound = open.top().bound;
  if (limit_hit) {
    best.status = SolveStatus::kGapLimit;
    best.bound = std::max(open_bound, incumbent);
    if (!best.has_solution()) best.objective = -kInf;
    return best;
  }
  if (!best.has_solution()) {
    best.status = SolveStatus::kInfeasible;
    return best;
  }
  best.status = SolveStatus::kOptimal;
  best.bound = best.objective;
  return best;
}

}  // namespace rmp
