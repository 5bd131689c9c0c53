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

#include "rmp/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rmp/errors.hpp"
#include "rmp/io.hpp"

namespace rmp {
namespace {

struct Suite {
  const char* name;
  const char* axis;
  bool multi;
  double first, last;
  std::vector<Formulation> formulations;
};

const std::vector<Suite>& Suites() {
  static const std::vector<Suite> kSuites = {
      {"phases", "budget", false, 0, 6, {Formulation::kEq5, Formulation::kExpand}},
      {"resources", "resources", false, 3, 12,
       {Formulation::kEq5, Formulation::kExpand}},
      {"gridsize", "n", false, 5, 10, {Formulation::kEq5, Formulation::kExpand}},
      {"horizon", "horizon", true, 6, 14,
       {Formulation::kEq8, Formulation::kEq9, Formulation::kEq10}},
      {"agents", "agents", true, 1, 5,
       {Formulation::kEq8, Formulation::kEq9, Formulation::kEq10}},
  };
  return kSuites;
}

const Suite& FindSuite(const std::string& name) {
  for (const Suite& s : Suites()) {
    if (name == s.name) return s;
  }
  throw Error(ErrorCode::kInvalidInput,
              "unknown suite '" + name +
                  "' (phases, resources, gridsize, horizon, agents)");
}

GridWorldSpec SpecFor(const Suite& suite, const BenchConfig& config,
                      double value, std::uint64_t seed) {
  GridWorldSpec g;
  g.seed = seed;
  g.n = config.grid;
  if (!suite.multi) {
    g.num_resources = 9;
    g.capacity = 3;
    g.switch_budget = 2;
  } else {
    g.variant = GridVariant::kMultiAgent;
    g.num_resources = 5;
    g.agents = 5;
    g.horizon = 10;
    g.psi_budget = 3;
  }
  const int v = static_cast<int>(std::lround(value));
  const std::string axis = suite.name;
  if (axis == "phases") g.switch_budget = value;
  if (axis == "resources") g.num_resources = v;
  if (axis == "gridsize") g.n = v;
  if (axis == "horizon") g.horizon = v;
  if (axis == "agents") g.agents = v;
  return g;
}

std::string Num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string BenchAxis(const std::string& suite) {
  return FindSuite(suite).axis;
}

std::vector<BenchRow> RunBench(
    const BenchConfig& config,
    const std::function<void(const BenchRow&)>& progress) {
  const Suite& suite = FindSuite(config.suite);
  if (config.trials < 1) {
    throw Error(ErrorCode::kInvalidInput, "trials must be at least 1");
  }
  std::vector<double> values = config.values;
  if (values.empty()) {
    for (double v = suite.first; v <= suite.last + 1e-9; v += 1.0) {
      values.push_back(v);
    }
  }

  std::vector<BenchRow> rows;
  for (double value : values) {
    for (int trial = 0; trial < config.trials; ++trial) {
      const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(trial);
      const GridWorldSpec g = SpecFor(suite, config, value, seed);
      BenchRow base;
      base.value = value;
      base.trial = trial;
      base.seed = seed;
      base.n = g.n;
      base.resources = g.num_resources;
      if (suite.multi) {
        base.agents = g.agents;
        base.horizon = g.horizon;
        base.budget = g.psi_budget;
      } else {
        base.capacity = g.capacity;
        base.budget = g.switch_budget;
        base.agents = 1;
      }

      ProblemFile problem;
      std::string generate_error;
      try {
        problem = GenerateProblem(g);
      } catch (const Error& e) {
        generate_error = ErrorCodeName(e.code());
      }
      for (Formulation f : suite.formulations) {
        BenchRow row = base;
        row.formulation = ToString(f);
        if (!generate_error.empty()) {
          row.status = generate_error;
        } else {
          const auto start = std::chrono::steady_clock::now();
          try {
            const SolutionFile s = Solve(problem, f, config.solver);
            row.status = ToString(s.status);
            row.objective = s.objective;
            row.reward = s.reward;
            row.nodes = s.stats.nodes;
            row.has_value = true;
          } catch (const Error& e) {
            row.status = ErrorCodeName(e.code());
          }
          row.wall_seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        }
        if (progress) progress(row);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string BenchCsv(const std::string& suite,
                     const std::vector<BenchRow>& rows) {
  const std::string axis = BenchAxis(suite);
  std::ostringstream out;
  out << kBenchCsvHeader << "\n";
  auto params = [](const BenchRow& r) {
    return std::to_string(r.n) + "," + std::to_string(r.resources) + "," +
           Num(r.capacity) + "," + Num(r.budget) + "," +
           std::to_string(r.agents) + "," + std::to_string(r.horizon);
  };
  for (const BenchRow& r : rows) {
    out << suite << ",trial," << axis << "," << Num(r.value) << "," << r.trial
        << "," << r.seed << "," << r.formulation << "," << r.status << ","
        << (r.has_value ? Num(r.objective) : "") << ","
        << (r.has_value ? Num(r.reward) : "") << "," << Num(r.wall_seconds)
        << "," << r.nodes << "," << params(r) << "\n";
  }

  // Summary rows in first-seen (value, formulation) order.
  std::vector<std::pair<double, std::string>> keys;
  std::map<std::pair<double, std::string>, std::vector<const BenchRow*>> groups;
  for (const BenchRow& r : rows) {
    const auto key = std::make_pair(r.value, r.formulation);
    if (!groups.count(key)) keys.push_back(key);
    groups[key].push_back(&r);
  }
  for (const auto& key : keys) {
    std::vector<const BenchRow*> ok;
    for (const BenchRow* r : groups[key]) {
      if (r->has_value) ok.push_back(r);
    }
    const double n = static_cast<double>(ok.size());
    auto mean = [&](auto field) {
      double s = 0.0;
      for (const BenchRow* r : ok) s += field(*r);
      return ok.empty() ? NAN : s / n;
    };
    auto stdev = [&](auto field) {
      if (ok.size() < 2) return ok.empty() ? NAN : 0.0;
      const double m = mean(field);
      double s = 0.0;
      for (const BenchRow* r : ok) s += (field(*r) - m) * (field(*r) - m);
      return std::sqrt(s / (n - 1.0));
    };
    const auto obj = [](const BenchRow& r) { return r.objective; };
    const auto rew = [](const BenchRow& r) { return r.reward; };
    const auto wall = [](const BenchRow& r) { return r.wall_seconds; };
    const auto nodes = [](const BenchRow& r) {
      return static_cast<double>(r.nodes);
    };
    const BenchRow& first = *groups[key].front();
    const std::string status =
        std::to_string(ok.size()) + "/" + std::to_string(groups[key].size());
    for (const char* kind : {"mean", "std"}) {
      const bool is_mean = kind[0] == 'm';
      auto stat = [&](auto field) {
        return Num(is_mean ? mean(field) : stdev(field));
      };
      out << suite << "," << kind << "," << axis << "," << Num(key.first)
          << ",,," << key.second << "," << status << "," << stat(obj) << ","
          << stat(rew) << "," << stat(wall) << "," << stat(nodes) << ","
          << params(first) << "\n";
    }
  }
  return out.str();
}

}  // namespace rmp
