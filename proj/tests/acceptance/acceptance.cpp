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

// Acceptance checks. Prints one PASS or FAIL line per criterion and exits
// nonzero if any criterion fails. Pass criterion numbers to run a subset.
// Diagnostics for failures go to stderr.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rmp/baselines.hpp"
#include "rmp/constrained.hpp"
#include "rmp/domains.hpp"
#include "rmp/errors.hpp"
#include "rmp/io.hpp"
#include "rmp/linprog.hpp"
#include "rmp/mdp.hpp"
#include "rmp/mrmp.hpp"
#include "rmp/srmp.hpp"
#include "support/golden.hpp"
#include "support/instances.hpp"
#include "support/invariants.hpp"

namespace rmp {
namespace {

// Pinned tolerances.
constexpr double kGolden = 0.01;        // published two-decimal values
constexpr double kThreshold = 0.01;     // cost-sweep breakpoints
constexpr double kOracle = 1e-6;        // MILP vs brute force, MILP vs expand
constexpr double kInvariant = 1e-7;     // conservation and linking residuals
constexpr double kMonotone = 1e-6;      // allowed decrease along a sweep
constexpr double kSignTestP = 0.01;     // phasing vs one-shot
constexpr double kRepriceCost = 50.0;   // per extra switching state
constexpr double kTransferPrice = 5.0;  // per unit transfer

// Instance counts.
constexpr int kOracleInstances = 200;   // per formulation
constexpr int kOracleMaxBinaries = 14;  // brute force stays well under 22
constexpr int kBaselineInstances = 50;
constexpr int kSweepsPerFamily = 40;    // three families
constexpr int kTrendSeeds = 20;

class Report {
 public:
  void Fail(const std::string& what) {
    ++failures_;
    if (failures_ <= 10) std::cerr << "  " << what << "\n";
  }
  void Check(bool ok, const std::string& what) {
    if (!ok) Fail(what);
  }
  void Golden(double value, double expected, const std::string& what) {
    std::ostringstream s;
    s << what << " = " << value << ", expected " << expected;
    Check(testing::Golden(value, expected, kGolden), s.str());
  }
  void Note(const std::string& note) {
    if (!notes_.empty()) notes_ += "; ";
    notes_ += note;
  }
  bool ok() const { return failures_ == 0; }
  int failures() const { return failures_; }
  const std::string& notes() const { return notes_; }

 private:
  int failures_ = 0;
  std::string notes_;
};

std::string Fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string Join(const std::vector<std::string>& parts) {
  std::string out = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out + "}";
}

std::vector<std::string> Names(const Mdp& mdp, const std::vector<int>& states) {
  std::vector<std::string> out;
  for (int s : states) out.push_back(mdp.state_name(s));
  std::sort(out.begin(), out.end());
  return out;
}

std::string BundleName(const CapacitySpec& cap, const ResourceBundle& b) {
  std::string out;
  for (int o : b.held) out += cap.resources[o];
  return out;
}

// Bundles of the phases that carry flow, in phase order.
std::vector<std::string> ActiveBundles(const CapacitySpec& cap,
                                       const PhasePlan& plan) {
  std::vector<std::string> out;
  for (const Phase& ph : plan.phases) {
    if (ph.occupancy.Total() > 1e-9) out.push_back(BundleName(cap, ph.bundle));
  }
  return out;
}

bool Near(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<double> FreeFirst(int horizon) {
  std::vector<double> psi(horizon, 1.0);
  psi[0] = 0.0;
  return psi;
}

std::vector<double> CostAtOthers(const SingleAgentProblem& p, double c) {
  std::vector<double> lambda(p.mdp.num_states(), c);
  lambda[p.mdp.FindState("S1")] = 0.0;
  return lambda;
}

// ---------------------------------------------------------------------------

void Criterion1(Report& r) {
  const SingleAgentProblem p = LoadRunningExample();
  r.Golden(SolveUnconstrained(p.mdp, p.alpha).value, 174.65,
           "unconstrained value");
  r.Golden(ComputeXBound(p.mdp, p.alpha), 70.24, "X");
  const ConstrainedResult c = SolveConstrained(p.mdp, p.alpha, p.cap);
  r.Golden(c.value, 65.02, "one-shot value");
  std::vector<int> delta(p.cap.num_resources(), 0);
  for (int o : c.bundle.held) delta[o] = 1;
  r.Check(delta == std::vector<int>{0, 0, 0, 0, 1}, "one-shot bundle");
  r.Note("174.65 / X 70.24 / 65.02 with " + BundleName(p.cap, c.bundle));
}

void Criterion2(Report& r) {
  const SingleAgentProblem p = LoadRunningExample();
  const std::vector<int> fixed = {p.mdp.FindState("S1"), p.mdp.FindState("S3"),
                                  p.mdp.FindState("S4")};
  const PhasePlan plan = SolveFixedPhasesAbstract(p.mdp, p.alpha, p.cap, fixed);
  const double expected[] = {113.65, 120.65, 123.05};
  for (int k = 0; k < 3; ++k) {
    r.Golden(plan.anchor_values.at(fixed[k]), expected[k],
             "V(" + p.mdp.state_name(fixed[k]) + ")");
  }
  std::vector<std::string> bundles;
  for (const Phase& ph : plan.phases) {
    bundles.push_back(BundleName(p.cap, ph.bundle));
  }
  r.Check(bundles == std::vector<std::string>{"o1", "o5", "o5"},
          "phase bundles " + Join(bundles));
  r.Note("V = " + Fmt(plan.anchor_values.at(fixed[0])) + " / " +
         Fmt(plan.anchor_values.at(fixed[1])) + " / " +
         Fmt(plan.anchor_values.at(fixed[2])) + ", bundles " + Join(bundles));
}

void Criterion3(Report& r) {
  const SingleAgentProblem p = LoadRunningExample();
  PhaseSwitchSpec spec = p.switching;
  spec.budget = 2.0;
  const PhasePlan plan = SolveSrmp(p.mdp, p.alpha, p.cap, spec);
  r.Golden(plan.objective, 173.80, "objective");
  const std::vector<std::string> states = Names(p.mdp, plan.switching_states);
  r.Check(states == std::vector<std::string>{"S1", "S3", "S5"},
          "switching states " + Join(states));
  const std::vector<std::string> bundles = ActiveBundles(p.cap, plan);
  r.Check(bundles == std::vector<std::string>{"o1", "o3", "o5"},
          "phase bundles " + Join(bundles));
  r.Note(Fmt(plan.objective) + " via " + Join(states) + ", bundles " +
         Join(bundles));
}

void Criterion4(Report& r) {
  const SingleAgentProblem p = LoadRunningExample();
  auto solve = [&](double c) {
    return SolveSrmp(p.mdp, p.alpha, p.cap,
                     PhaseSwitchSpec::CostInObjective(CostAtOthers(p, c)));
  };
  auto set_at = [&](double c) {
    return Names(p.mdp, solve(c).switching_states);
  };

  // Coarse scan, then bisection inside every interval where the set changes.
  std::vector<double> grid = {0.01, 0.25, 0.5, 0.75, 1.0, 2.5};
  for (double c = 5.0; c <= 150.0; c += 5.0) grid.push_back(c);
  std::vector<double> thresholds;
  std::vector<std::vector<std::string>> sets = {set_at(grid[0])};
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const std::vector<std::string> next = set_at(grid[i]);
    if (next == sets.back()) continue;
    double lo = grid[i - 1];
    double hi = grid[i];
    while (hi - lo > 1e-4) {
      const double mid = 0.5 * (lo + hi);
      (set_at(mid) == sets.back() ? lo : hi) = mid;
    }
    thresholds.push_back(0.5 * (lo + hi));
    sets.push_back(next);
  }
  const std::vector<double> want = {0.85, 21.25, 87.53};
  r.Check(thresholds.size() == want.size(),
          "found " + std::to_string(thresholds.size()) + " transitions");
  for (std::size_t k = 0; k < std::min(want.size(), thresholds.size()); ++k) {
    r.Check(std::abs(thresholds[k] - want[k]) <= kThreshold,
            "threshold " + Fmt(thresholds[k], 4) + ", expected " +
                Fmt(want[k]));
  }
  const std::vector<std::vector<std::string>> want_sets = {
      {"S1", "S3", "S4", "S5"}, {"S1", "S3", "S5"}, {"S1", "S5"}, {"S1"}};
  r.Check(sets == want_sets, "switching sets along the sweep");

  const PhasePlan at50 = solve(kRepriceCost);
  r.Check(Names(p.mdp, at50.switching_states) ==
              std::vector<std::string>{"S1", "S5"},
          "set at c=50");
  r.Golden(at50.reward, 152.55, "reward at c=50");
  r.Golden(at50.objective, 102.55, "utility at c=50");

  // Re-price the five solutions at 50 per switching state beyond S1. The
  // unconstrained policy needs to reconfigure everywhere.
  const int start = p.mdp.FindState("S1");
  auto price = [&](double reward, const std::vector<int>& switching) {
    int extra = 0;
    for (int s : switching) extra += s != start;
    return reward - kRepriceCost * extra;
  };
  std::vector<int> all(p.mdp.num_states());
  for (int s = 0; s < p.mdp.num_states(); ++s) all[s] = s;
  const std::vector<int> fixed = {start, p.mdp.FindState("S3"),
                                  p.mdp.FindState("S4")};
  PhaseSwitchSpec budget2 = p.switching;
  budget2.budget = 2.0;
  const PhasePlan abstract =
      SolveFixedPhasesAbstract(p.mdp, p.alpha, p.cap, fixed);
  const PhasePlan phased = SolveSrmp(p.mdp, p.alpha, p.cap, budget2);
  const std::vector<double> table = {
      price(SolveUnconstrained(p.mdp, p.alpha).value, all),
      price(SolveConstrained(p.mdp, p.alpha, p.cap).value, {start}),
      price(EvaluatePhasePlan(p.mdp, abstract, p.alpha), fixed),
      price(EvaluatePhasePlan(p.mdp, phased, p.alpha), phased.switching_states),
      price(EvaluatePhasePlan(p.mdp, at50, p.alpha), at50.switching_states)};
  const std::vector<double> want_table = {-75.35, 65.02, 13.65, 73.80, 102.55};
  std::string row;
  for (std::size_t k = 0; k < table.size(); ++k) {
    r.Golden(table[k], want_table[k], "re-priced utility " + std::to_string(k));
    row += (k ? " / " : "") + Fmt(table[k]);
  }
  std::string breaks;
  for (double t : thresholds) breaks += (breaks.empty() ? "" : ", ") + Fmt(t, 3);
  r.Note("breakpoints " + breaks + "; c=50 " +
         Fmt(at50.reward) + "/" + Fmt(at50.objective) + "; re-priced " + row);
}

void Criterion5(Report& r) {
  const SingleAgentProblem p = LoadRunningExample();
  auto id = [&](const char* s) { return p.mdp.FindState(s); };
  std::vector<int> group_of(p.mdp.num_states());
  group_of[id("S1")] = 0;
  group_of[id("S2")] = group_of[id("S3")] = 1;
  group_of[id("S4")] = group_of[id("S5")] = 2;
  group_of[id("S6")] = 3;
  const PhasePlan plan = SolveSrmp(
      p.mdp, p.alpha, p.cap,
      PhaseSwitchSpec::Grouped(group_of, {0.0, 1.0, 1.0, 1.0}, 1.0));
  r.Golden(plan.reward, 165.68, "grouped reward");
  const std::vector<std::string> states = Names(p.mdp, plan.switching_states);
  r.Check(states == std::vector<std::string>{"S1", "S4", "S5"},
          "switching states " + Join(states));
  r.Note(Fmt(plan.reward) + " via " + Join(states));
}

void Criterion6(Report& r) {
  const MultiagentProblem mp = LoadTwoAgentExample();
  double sum = 0.0;
  for (const AgentModel& a : mp.agents) {
    sum += SolveUnconstrained(a.mdp, a.alpha).value;
  }
  r.Golden(sum, 93.64, "unconstrained sum");
  const AllocationSchedule one = SolveMrmpOneshot(mp);
  r.Golden(one.utility, 49.64, "one-shot");
  const AllocationSchedule fixed =
      SolveMrmp(mp, ReallocSpec::Fixed({1, 3, 6, 8}));
  r.Golden(fixed.utility, 65.04, "fixed schedule");
  const AllocationSchedule budget =
      SolveMrmp(mp, ReallocSpec::Budget(FreeFirst(mp.horizon), 3.0));
  r.Golden(budget.utility, 72.25, "reallocation budget 3");
  r.Check(budget.realloc_times == std::vector<int>{1, 4, 5, 8},
          "reallocation times");
  const AllocationSchedule transfer =
      SolveMrmp(mp, ReallocSpec::UniformTransfer(mp, kTransferPrice));
  r.Golden(transfer.utility, 48.72, "transfer cost 5");
  const ScheduleScore ts = ScoreSchedule(mp, transfer, kTransferPrice);
  r.Check(ts.transfers == 4,
          "transfers = " + std::to_string(ts.transfers) + ", expected 4");

  const std::vector<double> repriced = {
      ScoreSchedule(mp, one, kTransferPrice).utility,
      ScoreSchedule(mp, fixed, kTransferPrice).utility,
      ScoreSchedule(mp, budget, kTransferPrice).utility, ts.utility};
  const std::vector<double> want = {39.64, 30.04, 47.25, 48.72};
  std::string row;
  for (std::size_t k = 0; k < want.size(); ++k) {
    r.Golden(repriced[k], want[k], "re-priced schedule " + std::to_string(k));
    row += (k ? " / " : "") + Fmt(repriced[k]);
  }
  r.Note(Fmt(sum) + " / " + Fmt(one.utility) + " / " + Fmt(fixed.utility) +
         " / " + Fmt(budget.utility) + " / " + Fmt(transfer.utility) + " (" +
         std::to_string(ts.transfers) + " transfers); re-priced " + row);
}

// Random problem files cover every formulation from one seed.
ProblemFile OracleInstance(Formulation f, std::uint64_t seed) {
  if (IsMultiagent(f)) {
    testing::MultiShape shape;
    shape.horizon = 2 + static_cast<int>(seed % 3);
    return testing::RandomMultiFile(seed, shape);
  }
  return testing::RandomSingleFile(seed, {3, 5, 1, 3, 0.6});
}

void Criterion7(Report& r) {
  const std::vector<Formulation> formulations = {
      Formulation::kEq1,  Formulation::kEq4,  Formulation::kEq5,
      Formulation::kEq6,  Formulation::kEq7,  Formulation::kEq8,
      Formulation::kEq9,  Formulation::kEq10, Formulation::kEq11,
      Formulation::kEq12};
  int total = 0;
  int max_binaries = 0;
  for (Formulation f : formulations) {
    int accepted = 0;
    for (std::uint64_t seed = 1; accepted < kOracleInstances && seed < 20000;
         ++seed) {
      const MilpModel model = BuildFormulationModel(OracleInstance(f, seed), f);
      if (model.num_binaries() > kOracleMaxBinaries) continue;
      ++accepted;
      max_binaries = std::max(max_binaries, model.num_binaries());
      const MilpSolution milp = SolveMilp(model);
      const OracleResult brute = BruteForce(model);
      const std::string where = std::string(ToString(f)) + " seed " +
                                std::to_string(seed);
      if (!brute.feasible || milp.status != SolveStatus::kOptimal) {
        r.Check(!brute.feasible && milp.status == SolveStatus::kInfeasible,
                where + ": feasibility disagrees");
        continue;
      }
      r.Check(Near(milp.objective, brute.objective, kOracle),
              where + ": milp " + Fmt(milp.objective, 9) + " vs brute " +
                  Fmt(brute.objective, 9));
    }
    r.Check(accepted >= kOracleInstances,
            std::string(ToString(f)) + ": only " + std::to_string(accepted) +
                " instances");
    total += accepted;
  }
  r.Note(std::to_string(total) + " instances over " +
         std::to_string(formulations.size()) + " formulations, up to " +
         std::to_string(max_binaries) + " binaries");
}

void Criterion8(Report& r) {
  int count = 0;
  int largest = 0;
  for (std::uint64_t seed = 1; count < kBaselineInstances; ++seed) {
    GridWorldSpec g;
    g.seed = seed;
    g.n = 3 + static_cast<int>(seed % 3);
    g.num_resources = 2 + static_cast<int>(seed % 3);
    g.capacity = 1.0 + static_cast<double>(seed % 2);
    SingleAgentProblem p = GenGridworld(g);
    p.switching.budget = static_cast<double>(seed % 4);
    const PhasePlan milp = SolveSrmp(p.mdp, p.alpha, p.cap, p.switching);
    const ExpandResult e = ExpandMdpBaseline(p.mdp, p.alpha, p.cap, p.switching);
    r.Check(Near(e.value, milp.objective, kOracle),
            "seed " + std::to_string(seed) + ": expand " + Fmt(e.value, 9) +
                " vs milp " + Fmt(milp.objective, 9));
    largest = std::max(largest, e.expanded_states);
    ++count;
  }
  r.Note(std::to_string(count) +
         " gridworlds (n 3..5, |O| 2..4, capacity 1..2), largest expansion " +
         std::to_string(largest) + " states");
}

SwitchMode ModeOf(Formulation f) {
  switch (f) {
    case Formulation::kEq6:
      return SwitchMode::kCostInObjective;
    case Formulation::kEq7:
      return SwitchMode::kGrouped;
    default:
      return SwitchMode::kBudgeted;
  }
}

// Checks every solution the driver returns on one problem file, and the
// model rows at the MILP point of each formulation that has a model.
int CheckInvariants(const ProblemFile& p, Report& r, double* worst) {
  int checked = 0;
  const std::vector<Formulation> single = {
      Formulation::kEq1, Formulation::kEq4,      Formulation::kEq5,
      Formulation::kEq6, Formulation::kEq7,      Formulation::kAbstract,
      Formulation::kExpand};
  const std::vector<Formulation> multi = {
      Formulation::kEq8, Formulation::kEq9, Formulation::kEq10,
      Formulation::kEq11, Formulation::kEq12};
  const bool is_multi = p.kind == ProblemKind::kMulti;
  for (Formulation f : is_multi ? multi : single) {
    if (f == Formulation::kAbstract && p.fixed_states.empty()) continue;
    if (f == Formulation::kEq7 && p.single.switching.group_of.empty()) continue;
    const std::string where = p.name + " " + ToString(f);
    const SolutionFile s = Solve(p, f);
    double v = 0.0;
    if (is_multi) {
      v = testing::ScheduleViolation(p.multi, s.schedule);
    } else {
      const SingleAgentProblem& sp = p.single;
      PhaseSwitchSpec spec = sp.switching;
      spec.mode = ModeOf(f);
      const bool phased = f != Formulation::kEq1 && f != Formulation::kEq4;
      if (phased) {
        // The abstract solver ignores the switching budget by design.
        v = testing::PhasePlanViolation(sp.mdp, sp.alpha, sp.cap, spec, s.plan,
                                        f != Formulation::kAbstract);
      } else {
        const Phase& ph = s.plan.phases.at(0);
        v = std::max({testing::FlowViolation(sp.mdp, sp.alpha, ph.occupancy),
                      testing::LinkingViolation(sp.mdp, ph.occupancy, ph.bundle),
                      f == Formulation::kEq4
                          ? testing::CapacityViolation(sp.cap, ph.bundle)
                          : 0.0});
      }
    }
    *worst = std::max(*worst, v);
    r.Check(v <= kInvariant, where + ": residual " + std::to_string(v));
    ++checked;
    if (f == Formulation::kAbstract || f == Formulation::kExpand) continue;
    const MilpModel model = BuildFormulationModel(p, f);
    const MilpSolution m = SolveMilp(model);
    const double mv = model.MaxViolation(m.values);
    *worst = std::max(*worst, mv);
    r.Check(mv <= kInvariant, where + ": model rows " + std::to_string(mv));
    ++checked;
  }
  return checked;
}

void Criterion9(Report& r) {
  std::vector<ProblemFile> corpus = {FixtureProblem("running-example"),
                                     FixtureProblem("two-agent")};
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    corpus.push_back(testing::RandomSingleFile(seed));
    corpus.push_back(testing::RandomMultiFile(seed));
  }
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    GridWorldSpec g;
    g.seed = seed;
    g.n = 4;
    g.num_resources = 3;
    corpus.push_back(GenerateProblem(g));
    g.variant = GridVariant::kMultiAgent;
    g.agents = 2;
    g.n = 3;
    g.horizon = 4;
    g.num_resources = 2;
    corpus.push_back(GenerateProblem(g));
  }
  int checked = 0;
  double worst = 0.0;
  for (const ProblemFile& p : corpus) checked += CheckInvariants(p, r, &worst);
  r.Note(std::to_string(checked) + " solutions on " +
         std::to_string(corpus.size()) + " problems, worst residual " +
         [&] {
           char buf[32];
           std::snprintf(buf, sizeof buf, "%.1e", worst);
           return std::string(buf);
         }());
}

void Criterion10(Report& r) {
  int sweeps = 0;
  int violations = 0;
  auto step = [&](double prev, double next, const std::string& where) {
    if (next < prev - kMonotone) {
      ++violations;
      r.Fail(where + ": " + Fmt(prev, 9) + " -> " + Fmt(next, 9));
    }
  };
  for (std::uint64_t seed = 1; seed <= kSweepsPerFamily; ++seed) {
    SingleAgentProblem p = testing::RandomSingle(seed);
    double last = -kInf;
    for (int budget = 0; budget <= 6; ++budget) {
      p.switching.budget = budget;
      const double v = SolveSrmp(p.mdp, p.alpha, p.cap, p.switching).objective;
      step(last, v, "switching budget, seed " + std::to_string(seed));
      last = v;
    }
    ++sweeps;
  }
  testing::MultiShape shape;
  shape.horizon = 4;
  for (std::uint64_t seed = 1; seed <= kSweepsPerFamily; ++seed) {
    const MultiagentProblem mp = testing::RandomMulti(seed, shape);
    double last = -kInf;
    for (int budget = 0; budget <= mp.horizon; ++budget) {
      const double v =
          SolveMrmp(mp, ReallocSpec::Budget(FreeFirst(mp.horizon), budget))
              .utility;
      step(last, v, "reallocation budget, seed " + std::to_string(seed));
      last = v;
    }
    ++sweeps;
  }
  for (std::uint64_t seed = 1; seed <= kSweepsPerFamily; ++seed) {
    const MultiagentProblem mp = testing::RandomMulti(seed, shape);
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
      step(last, v, "schedule refinement, seed " + std::to_string(seed));
      last = v;
    }
    ++sweeps;
  }
  r.Check(sweeps >= 100, "only " + std::to_string(sweeps) + " sweeps");
  r.Note(std::to_string(sweeps) + " sweeps, " + std::to_string(violations) +
         " violations");
}

// One-sided sign test: P(at least `wins` successes out of wins + losses).
double SignTestP(int wins, int losses) {
  const int n = wins + losses;
  double p = 0.0;
  for (int k = wins; k <= n; ++k) {
    p += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0) - n * std::log(2.0));
  }
  return p;
}

void Criterion11(Report& r) {
  constexpr int kMaxBudget = 6;
  constexpr int kCompareBudget = 2;
  std::vector<double> runtime(kMaxBudget + 1, 0.0);
  double oneshot_sum = 0.0;
  double phased_sum = 0.0;
  double milp_time = 0.0;
  double expand_time = 0.0;
  int wins = 0;
  int losses = 0;
  for (std::uint64_t seed = 1; seed <= kTrendSeeds; ++seed) {
    GridWorldSpec g;
    g.seed = seed;
    g.n = 5;
    g.num_resources = 9;
    g.capacity = 3.0;
    SingleAgentProblem p = GenGridworld(g);
    std::vector<double> value(kMaxBudget + 1);
    for (int b = 0; b <= kMaxBudget; ++b) {
      p.switching.budget = b;
      const auto start = std::chrono::steady_clock::now();
      value[b] = SolveSrmp(p.mdp, p.alpha, p.cap, p.switching).objective;
      const double t = Seconds(start);
      runtime[b] += t / kTrendSeeds;
      if (b == kCompareBudget) milp_time += t / kTrendSeeds;
    }
    p.switching.budget = kCompareBudget;
    const auto start = std::chrono::steady_clock::now();
    const ExpandResult e = ExpandMdpBaseline(p.mdp, p.alpha, p.cap, p.switching);
    expand_time += Seconds(start) / kTrendSeeds;
    r.Check(Near(e.value, value[kCompareBudget], kOracle),
            "seed " + std::to_string(seed) + ": expansion disagrees");
    oneshot_sum += value[0];
    phased_sum += value[kCompareBudget];
    if (value[kCompareBudget] > value[0] + kOracle) ++wins;
    if (value[kCompareBudget] < value[0] - kOracle) ++losses;
  }
  const double p_value = SignTestP(wins, losses);
  r.Check(phased_sum > oneshot_sum, "phasing does not improve the mean");
  r.Check(p_value < kSignTestP, "sign test p = " + std::to_string(p_value));
  const int peak = static_cast<int>(
      std::max_element(runtime.begin(), runtime.end()) - runtime.begin());
  r.Check(peak > 0 && peak < kMaxBudget,
          "runtime peak at budget " + std::to_string(peak));
  r.Check(milp_time < expand_time, "MILP mean " + Fmt(milp_time, 3) +
                                       " s vs expansion " +
                                       Fmt(expand_time, 3) + " s");
  std::string curve;
  for (int b = 0; b <= kMaxBudget; ++b) {
    curve += (b ? " " : "") + Fmt(runtime[b], 3);
  }
  char p_text[32];
  std::snprintf(p_text, sizeof p_text, "%.1e", p_value);
  r.Note("mean one-shot " + Fmt(oneshot_sum / kTrendSeeds) + " vs phased " +
         Fmt(phased_sum / kTrendSeeds) + ", " + std::to_string(wins) + "-" +
         std::to_string(losses) + " p=" + p_text + "; runtime by budget [" +
         curve + "] s; MILP " + Fmt(milp_time, 3) + " s vs expansion " +
         Fmt(expand_time, 3) + " s");
}

std::string Stable(const ProblemFile& p, SolutionFile s) {
  s.stats.wall_seconds = 0.0;
  return EmitSolution(p, s);
}

void Criterion12(Report& r) {
  std::vector<ProblemFile> corpus = {FixtureProblem("running-example"),
                                     FixtureProblem("two-agent")};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    corpus.push_back(testing::RandomSingleFile(seed));
    corpus.push_back(testing::RandomMultiFile(seed));
  }
  GridWorldSpec g;
  g.seed = 11;
  g.n = 4;
  corpus.push_back(GenerateProblem(g));
  int runs = 0;
  for (const ProblemFile& p : corpus) {
    for (int i = 0; i <= static_cast<int>(Formulation::kBrute); ++i) {
      const Formulation f = static_cast<Formulation>(i);
      if (IsMultiagent(f) != (p.kind == ProblemKind::kMulti)) continue;
      if (f == Formulation::kAbstract && p.fixed_states.empty()) continue;
      std::string a;
      std::string b;
      for (std::string* out : {&a, &b}) {
        try {
          *out = Stable(p, Solve(p, f));
        } catch (const Error& e) {
          *out = std::string("error: ") + e.what();
        }
      }
      r.Check(a == b, p.name + " " + ToString(f) + ": reruns differ");
      ++runs;
    }
  }
  r.Note(std::to_string(runs) + " solver/problem pairs rerun, outputs equal");
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Report&)> run;
};

}  // namespace
}  // namespace rmp

int main(int argc, char** argv) {
  using rmp::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "running example one-shot values", rmp::Criterion1},
      {2, "abstract solver on fixed switching states", rmp::Criterion2},
      {3, "phasing under a switching budget", rmp::Criterion3},
      {4, "switching cost sweep and re-pricing", rmp::Criterion4},
      {5, "grouped switching states", rmp::Criterion5},
      {6, "two-agent fixture and re-pricing", rmp::Criterion6},
      {7, "MILP matches brute force", rmp::Criterion7},
      {8, "expansion baseline matches phasing MILP", rmp::Criterion8},
      {9, "conservation and linking invariants", rmp::Criterion9},
      {10, "monotonicity sweeps", rmp::Criterion10},
      {11, "trends over 20 gridworld seeds", rmp::Criterion11},
      {12, "deterministic reruns", rmp::Criterion12},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  int ran = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    ++ran;
    rmp::Report report;
    const auto start = std::chrono::steady_clock::now();
    std::cerr << "criterion " << c.id << ": " << c.title << "\n";
    try {
      c.run(report);
    } catch (const std::exception& e) {
      report.Fail(std::string("exception: ") + e.what());
    }
    if (!report.ok()) ++failed;
    std::printf("%s %2d %s: %s (%.1f s)\n", report.ok() ? "PASS" : "FAIL", c.id,
                c.title,
                report.ok() ? report.notes().c_str()
                            : (std::to_string(report.failures()) +
                               " check(s) failed, see stderr")
                                  .c_str(),
                rmp::Seconds(start));
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
