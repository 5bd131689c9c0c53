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

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "rmp/domains.hpp"
#include "rmp/errors.hpp"

#ifndef RMP_SOURCE_DATA_DIR
#define RMP_SOURCE_DATA_DIR "data"
#endif

namespace rmp {

std::string DataDir() {
  if (const char* env = std::getenv("RMP_DATA_DIR"); env && *env) return env;
  return RMP_SOURCE_DATA_DIR;
}

SingleAgentProblem LoadRunningExample() {
  return LoadRunningExample(DataDir() + "/running_example.rmp");
}

namespace {

[[noreturn]] void ParseFail(const std::string& path, int line,
                            const std::string& what) {
  throw Error(ErrorCode::kParse,
              path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

SingleAgentProblem LoadRunningExample(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open fixture " + path);

  SingleAgentProblem p;
  p.name = "running_example";
  std::map<std::string, int> resource, capacity;
  std::vector<std::tuple<int, int, double>> costs;
  std::vector<std::pair<std::string, double>> starts, switches;
  double budget = 0.0;
  struct PendingAction {
    int line;
    std::string state, name, needs;
    double reward;
    std::vector<std::pair<std::string, double>> outcomes;
  };
  std::vector<PendingAction> actions;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string kind;
    if (!(ls >> kind)) continue;
    if (kind == "state") {
      std::string name;
      if (!(ls >> name)) ParseFail(path, line_no, "state needs a name");
      p.mdp.AddState(name);
    } else if (kind == "resource") {
      std::string name;
      if (!(ls >> name)) ParseFail(path, line_no, "resource needs a name");
      resource[name] = p.cap.num_resources();
      p.cap.resources.push_back(name);
    } else if (kind == "capacity") {
      std::string name;
      double limit;
      if (!(ls >> name >> limit)) ParseFail(path, line_no, "bad capacity");
      capacity[name] = p.cap.num_capacities();
      p.cap.capacities.push_back(name);
      p.cap.tau_hat.push_back(limit);
    } else if (kind == "cost") {
      std::string o, c;
      double v;
      if (!(ls >> o >> c >> v) || !resource.count(o) || !capacity.count(c)) {
        ParseFail(path, line_no, "bad cost");
      }
      costs.emplace_back(resource[o], capacity[c], v);
    } else if (kind == "start" || kind == "switch") {
      std::string s;
      double v;
      if (!(ls >> s >> v)) ParseFail(path, line_no, "bad " + kind);
      (kind == "start" ? starts : switches).emplace_back(s, v);
    } else if (kind == "budget") {
      if (!(ls >> budget)) ParseFail(path, line_no, "bad budget");
    } else if (kind == "action") {
      PendingAction a;
      a.line = line_no;
      std::string colon;
      if (!(ls >> a.state >> a.name >> a.reward >> a.needs >> colon) ||
          colon != ":") {
        ParseFail(path, line_no, "bad action");
      }
      std::string next;
      double prob;
      while (ls >> next) {
        if (!(ls >> prob)) ParseFail(path, line_no, "outcome needs a probability");
        a.outcomes.emplace_back(next, prob);
      }
      actions.push_back(std::move(a));
    } else {
      ParseFail(path, line_no, "unknown record '" + kind + "'");
    }
  }

  const int n = p.mdp.num_states();
  auto state = [&](const std::string& name, int line) {
    const int s = p.mdp.FindState(name);
    if (s < 0) ParseFail(path, line, "unknown state '" + name + "'");
    return s;
  };
  p.cap.tau.assign(p.cap.num_resources(),
                   std::vector<double>(p.cap.num_capacities(), 0.0));
  for (const auto& [o, c, v] : costs) p.cap.tau[o][c] = v;
  for (const PendingAction& pa : actions) {
    Action a;
    a.name = pa.name;
    a.reward = pa.reward;
    if (pa.needs != "-") {
      std::istringstream ns(pa.needs);
      std::string o;
      while (std::getline(ns, o, ',')) {
        if (!resource.count(o)) ParseFail(path, pa.line, "unknown resource " + o);
        a.requires_resources.push_back(resource[o]);
      }
    }
    for (const auto& [next, prob] : pa.outcomes) {
      a.outcomes.push_back({state(next, pa.line), prob});
    }
    p.mdp.AddAction(state(pa.state, pa.line), std::move(a));
  }
  p.alpha.alpha.assign(n, 0.0);
  for (const auto& [s, v] : starts) p.alpha.alpha[state(s, 0)] += v;
  std::vector<double> lambda(n, 0.0);
  for (const auto& [s, v] : switches) lambda[state(s, 0)] = v;
  p.switching = PhaseSwitchSpec::Budgeted(std::move(lambda), budget);
  try {
    p.mdp.Validate();
    p.cap.Validate(&p.mdp);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
  return p;
}

namespace {

// Timed task of the two-agent fixture. Work may start at or after `release`;
// a completion during step t pays `reward` when t < deadline.
struct TimedTask {
  double reward;
  int release;
  int deadline;
  std::vector<int> needs;
};

// Probability that work finishes during the e-th consecutive step (1-based)
// given it has not finished before: durations 1, 2, 3 with 0.3, 0.4, 0.3.
double FinishHazard(int e) {
  switch (e) {
    case 1:
      return 0.3;
    case 2:
      return 0.4 / 0.7;
    default:
      return 1.0;
  }
}

AgentModel BuildTaskAgent(const std::string& name,
                          const std::vector<TimedTask>& tasks, int horizon) {
  // State: (t, completed mask, task in progress or -1, steps already spent).
  using Key = std::tuple<int, int, int, int>;
  AgentModel agent;
  agent.name = name;
  std::map<Key, int> index;
  std::vector<Key> order;
  auto intern = [&](const Key& k) {
    auto [it, fresh] = index.emplace(k, static_cast<int>(order.size()));
    if (fresh) {
      order.push_back(k);
      const auto& [t, done, cur, el] = k;
      std::string label = "t" + std::to_string(t) + "_d" + std::to_string(done);
      label += cur < 0 ? std::string("_idle")
                       : "_w" + std::to_string(cur + 1) + "x" + std::to_string(el);
      agent.mdp.AddState(label, t);
    }
    return it->second;
  };
  intern({1, 0, -1, 0});
  for (std::size_t q = 0; q < order.size(); ++q) {
    const auto [t, done, cur, el] = order[q];
    const int s = static_cast<int>(q);
    Action idle;
    idle.name = "idle";
    if (t < horizon) idle.outcomes.push_back({intern({t + 1, done, -1, 0}), 1.0});
    agent.mdp.AddAction(s, std::move(idle));
    for (int k = 0; k < static_cast<int>(tasks.size()); ++k) {
      if (done >> k & 1) continue;
      const int spent = cur == k ? el : 0;
      if (spent == 0 && t < tasks[k].release) continue;
      const double h = FinishHazard(spent + 1);
      Action work;
      work.name = "work" + std::to_string(k + 1);
      work.reward = t < tasks[k].deadline ? h * tasks[k].reward : 0.0;
      work.requires_resources = tasks[k].needs;
      if (t < horizon) {
        work.outcomes.push_back({intern({t + 1, done | 1 << k, -1, 0}), h});
        if (h < 1.0) {
          work.outcomes.push_back({intern({t + 1, done, k, spent + 1}), 1.0 - h});
        }
      }
      agent.mdp.AddAction(s, std::move(work));
    }
  }
  agent.alpha = InitialDistribution::Point(agent.mdp.num_states(), 0);
  return agent;
}

}  // namespace

MultiagentProblem LoadTwoAgentExample(int copies) {
  constexpr int kHorizon = 10;
  MultiagentProblem p;
  p.horizon = kHorizon;
  p.shared.resources = {"o1", "o2"};
  p.shared.tau = {{}, {}};
  p.shared.omega_hat = {copies, copies};
  p.agents.push_back(BuildTaskAgent(
      "agent1", {{10, 1, 4, {0}}, {12, 2, 10, {1}}, {28, 5, 8, {0, 1}}},
      kHorizon));
  p.agents.push_back(BuildTaskAgent(
      "agent2", {{26, 1, 7, {0, 1}}, {6, 3, 8, {0}}, {12, 6, 10, {1}}},
      kHorizon));
  return p;
}

}  // namespace rmp
