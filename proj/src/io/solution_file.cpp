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

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "io/json_util.hpp"
#include "rmp/errors.hpp"
#include "rmp/io.hpp"

namespace rmp {
namespace {

using detail::Json;
using detail::Node;

SolveStatus ParseStatus(const Node& node) {
  const std::string s = node.String();
  for (SolveStatus st : {SolveStatus::kOptimal, SolveStatus::kInfeasible,
                         SolveStatus::kUnbounded, SolveStatus::kGapLimit}) {
    if (s == ToString(st)) return st;
  }
  node.Fail("unknown status '" + s + "'");
}

Json BundleJson(const ResourceBundle& b, const CapacitySpec& cap) {
  Json out = Json::array();
  for (int o : b.held) out.push_back(cap.resources[o]);
  return out;
}

Json StatesJson(const std::vector<int>& states, const Mdp& mdp) {
  Json out = Json::array();
  for (int s : states) out.push_back(mdp.state_name(s));
  return out;
}

// [state, action, probability] for every positive entry.
Json PolicyJson(const Policy& pi, const Mdp& mdp) {
  Json out = Json::array();
  for (int s = 0; s < static_cast<int>(pi.action_dist.size()); ++s) {
    const auto& d = pi.action_dist[s];
    for (int a = 0; a < static_cast<int>(d.size()); ++a) {
      if (d[a] > 0.0) {
        out.push_back({mdp.state_name(s), mdp.action(s, a).name, d[a]});
      }
    }
  }
  return out;
}

Json OccupancyJson(const OccupationMeasure& x, const Mdp& mdp) {
  Json out = Json::array();
  if (x.x.empty()) return out;
  for (int s = 0; s < mdp.num_states(); ++s) {
    for (int a = 0; a < mdp.num_actions(s); ++a) {
      const double v = x.x[mdp.sa(s, a)];
      if (v != 0.0) out.push_back({mdp.state_name(s), mdp.action(s, a).name, v});
    }
  }
  return out;
}

struct Names {
  std::map<std::string, int> state;
  std::vector<std::map<std::string, int>> action;
  std::map<std::string, int> resource;
};

Names IndexNames(const Mdp& mdp, const CapacitySpec& cap) {
  Names n;
  n.action.resize(mdp.num_states());
  for (int s = 0; s < mdp.num_states(); ++s) {
    n.state.emplace(mdp.state_name(s), s);
    for (int a = 0; a < mdp.num_actions(s); ++a) {
      n.action[s].emplace(mdp.action(s, a).name, a);
    }
  }
  for (int o = 0; o < cap.num_resources(); ++o) {
    n.resource.emplace(cap.resources[o], o);
  }
  return n;
}

int Find(const std::map<std::string, int>& index, const Node& node) {
  const std::string id = node.String();
  const auto it = index.find(id);
  if (it == index.end()) node.Fail("unknown id '" + id + "'");
  return it->second;
}

std::pair<int, int> StateAction(const Names& names, const Node& triple) {
  if (triple.size() != 3) triple.Fail("expected [state, action, value]");
  const int s = Find(names.state, triple[0]);
  return {s, Find(names.action[s], triple[1])};
}

Policy ReadPolicy(const Node& node, const Mdp& mdp, const Names& names) {
  Policy pi;
  pi.action_dist.resize(mdp.num_states());
  for (std::size_t i = 0; i < node.size(); ++i) {
    const auto [s, a] = StateAction(names, node[i]);
    auto& d = pi.action_dist[s];
    if (d.empty()) d.assign(mdp.num_actions(s), 0.0);
    d[a] = node[i][2].Number();
  }
  return pi;
}

OccupationMeasure ReadOccupancy(const Node& node, const Mdp& mdp,
                                const Names& names) {
  OccupationMeasure x;
  x.x.assign(mdp.num_state_actions(), 0.0);
  for (std::size_t i = 0; i < node.size(); ++i) {
    const auto [s, a] = StateAction(names, node[i]);
    x.x[mdp.sa(s, a)] = node[i][2].Number();
  }
  return x;
}

std::vector<int> ReadStates(const Node& node, const Names& names) {
  std::vector<int> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(Find(names.state, node[i]));
  }
  return out;
}

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string EmitSolution(const ProblemFile& problem,
                         const SolutionFile& s) {
  Json root;
  root["version"] = kFileVersion;
  root["problem"] = s.problem;
  root["formulation"] = ToString(s.formulation);
  root["status"] = ToString(s.status);
  root["objective"] = s.objective;
  root["reward"] = s.reward;
  root["cost"] = s.cost;
  root["bound"] = s.bound;

  if (problem.kind == ProblemKind::kSingle) {
    const Mdp& mdp = problem.single.mdp;
    const CapacitySpec& cap = problem.single.cap;
    const PhasePlan& plan = s.plan;
    root["switching_states"] = StatesJson(plan.switching_states, mdp);
    Json phases = Json::array();
    for (const Phase& p : plan.phases) {
      phases.push_back({{"bundle", BundleJson(p.bundle, cap)},
                        {"anchors", StatesJson(p.anchors, mdp)},
                        {"policy", PolicyJson(p.policy, mdp)},
                        {"occupancy", OccupancyJson(p.occupancy, mdp)}});
    }
    root["phases"] = std::move(phases);
    Json selection = Json::array();
    for (const auto& [state, w] : plan.phase_selection) {
      selection.push_back({{"state", mdp.state_name(state)}, {"weights", w}});
    }
    root["phase_selection"] = std::move(selection);
    if (!plan.anchor_values.empty()) {
      Json values = Json::array();
      for (const auto& [state, v] : plan.anchor_values) {
        values.push_back({mdp.state_name(state), v});
      }
      root["anchor_values"] = std::move(values);
      root["abstract_iterations"] = s.abstract_iterations;
    }
  } else {
    const MultiagentProblem& mp = problem.multi;
    const AllocationSchedule& sch = s.schedule;
    root["utility"] = sch.utility;
    root["realloc_times"] = sch.realloc_times;
    Json assignment = Json::array();
    for (int m = 0; m < static_cast<int>(sch.assignment.size()); ++m) {
      for (int o = 0; o < mp.num_resources(); ++o) {
        assignment.push_back(
            {{"holder", m == 0 ? std::string("dummy") : mp.agents[m - 1].name},
             {"resource", mp.shared.resources[o]},
             {"held", sch.assignment[m][o]}});
      }
    }
    root["assignment"] = std::move(assignment);
    Json agents = Json::array();
    for (int m = 0; m < static_cast<int>(sch.policies.size()); ++m) {
      const Mdp& mdp = mp.agents[m].mdp;
      agents.push_back({{"id", mp.agents[m].name},
                        {"reward", sch.agent_rewards[m]},
                        {"policy", PolicyJson(sch.policies[m], mdp)},
                        {"occupancy", OccupancyJson(sch.occupancy[m], mdp)}});
    }
    root["agents"] = std::move(agents);
  }
  root["stats"] = {{"nodes", s.stats.nodes},
                   {"lp_solves", s.stats.lp_solves},
                   {"simplex_iterations", s.stats.simplex_iterations},
                   {"enumerated", s.enumerated},
                   {"vars", s.num_vars},
                   {"rows", s.num_rows},
                   {"binaries", s.num_binaries},
                   {"wall_seconds", s.stats.wall_seconds}};
  return root.dump(2) + "\n";
}

SolutionFile ParseSolution(const ProblemFile& problem, const std::string& text,
                           const std::string& source) {
  const Json json = detail::ParseJsonText(text, source);
  const Node root(json, source);
  if (root["version"].Int() != kFileVersion) {
    root["version"].Fail("unsupported version");
  }
  SolutionFile s;
  s.problem = root["problem"].String();
  try {
    s.formulation = ParseFormulation(root["formulation"].String());
  } catch (const Error& e) {
    root["formulation"].Fail(e.what());
  }
  s.status = ParseStatus(root["status"]);
  s.objective = root["objective"].Number();
  s.reward = root["reward"].Number();
  s.cost = root["cost"].Number();
  s.bound = root["bound"].json().is_number() ? root["bound"].Number() : 0.0;

  if (problem.kind == ProblemKind::kSingle) {
    const Mdp& mdp = problem.single.mdp;
    const Names names = IndexNames(mdp, problem.single.cap);
    PhasePlan& plan = s.plan;
    plan.objective = s.objective;
    plan.reward = s.reward;
    plan.creation_cost = s.cost;
    plan.switching_states = ReadStates(root["switching_states"], names);
    const Node phases = root["phases"];
    for (std::size_t k = 0; k < phases.size(); ++k) {
      Phase p;
      const Node bundle = phases[k]["bundle"];
      for (std::size_t i = 0; i < bundle.size(); ++i) {
        p.bundle.held.push_back(Find(names.resource, bundle[i]));
      }
      p.anchors = ReadStates(phases[k]["anchors"], names);
      p.policy = ReadPolicy(phases[k]["policy"], mdp, names);
      p.occupancy = ReadOccupancy(phases[k]["occupancy"], mdp, names);
      plan.phases.push_back(std::move(p));
    }
    const Node sel = root["phase_selection"];
    for (std::size_t i = 0; i < sel.size(); ++i) {
      std::vector<double> w;
      const Node weights = sel[i]["weights"];
      for (std::size_t k = 0; k < weights.size(); ++k) {
        w.push_back(weights[k].Number());
      }
      if (w.size() != plan.phases.size()) weights.Fail("one weight per phase");
      plan.phase_selection[Find(names.state, sel[i]["state"])] = std::move(w);
    }
    if (root.Has("anchor_values")) {
      const Node values = root["anchor_values"];
      for (std::size_t i = 0; i < values.size(); ++i) {
        plan.anchor_values[Find(names.state, values[i][0])] =
            values[i][1].Number();
      }
      s.abstract_iterations = root["abstract_iterations"].Int();
    }
  } else {
    const MultiagentProblem& mp = problem.multi;
    AllocationSchedule& sch = s.schedule;
    sch.reward = s.reward;
    sch.cost = s.cost;
    sch.utility = root["utility"].Number();
    const Node times = root["realloc_times"];
    for (std::size_t i = 0; i < times.size(); ++i) {
      sch.realloc_times.push_back(times[i].Int());
    }
    std::map<std::string, int> holders{{"dummy", 0}};
    for (int m = 0; m < mp.num_agents(); ++m) holders[mp.agents[m].name] = m + 1;
    std::map<std::string, int> resources;
    for (int o = 0; o < mp.num_resources(); ++o) {
      resources[mp.shared.resources[o]] = o;
    }
    sch.assignment.assign(
        mp.num_agents() + 1,
        std::vector(mp.num_resources(), std::vector<int>(mp.horizon, 0)));
    const Node assignment = root["assignment"];
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      const int m = Find(holders, assignment[i]["holder"]);
      const int o = Find(resources, assignment[i]["resource"]);
      const Node held = assignment[i]["held"];
      if (static_cast<int>(held.size()) != mp.horizon) {
        held.Fail("one entry per time step");
      }
      for (int t = 0; t < mp.horizon; ++t) {
        sch.assignment[m][o][t] = held[t].Int();
      }
    }
    const Node agents = root["agents"];
    if (static_cast<int>(agents.size()) != mp.num_agents()) {
      agents.Fail("one entry per agent");
    }
    for (int m = 0; m < mp.num_agents(); ++m) {
      const Mdp& mdp = mp.agents[m].mdp;
      const Names names = IndexNames(mdp, mp.shared);
      sch.agent_rewards.push_back(agents[m]["reward"].Number());
      sch.policies.push_back(ReadPolicy(agents[m]["policy"], mdp, names));
      sch.occupancy.push_back(ReadOccupancy(agents[m]["occupancy"], mdp, names));
    }
  }
  const Node stats = root["stats"];
  s.stats.nodes = stats["nodes"].Long();
  s.stats.lp_solves = stats["lp_solves"].Long();
  s.stats.simplex_iterations = stats["simplex_iterations"].Long();
  s.stats.wall_seconds = stats["wall_seconds"].Number();
  s.enumerated = stats["enumerated"].Long();
  s.num_vars = stats["vars"].Int();
  s.num_rows = stats["rows"].Int();
  s.num_binaries = stats["binaries"].Int();
  return s;
}

double Reevaluate(const ProblemFile& problem, const SolutionFile& solution) {
  if (problem.kind == ProblemKind::kSingle) {
    return EvaluatePhasePlan(problem.single.mdp, solution.plan,
                             problem.single.alpha);
  }
  double total = 0.0;
  for (int m = 0; m < problem.multi.num_agents(); ++m) {
    total += EvaluatePolicy(problem.multi.agents[m].mdp,
                            solution.schedule.policies.at(m),
                            problem.multi.agents[m].alpha);
  }
  return total;
}

std::string Summarize(const ProblemFile& problem, const SolutionFile& s) {
  std::ostringstream out;
  out << "formulation " << ToString(s.formulation) << "  status "
      << ToString(s.status) << "\n";
  out << "objective " << Fixed(s.objective) << "  reward " << Fixed(s.reward)
      << "  cost " << Fixed(s.cost) << "\n";
  if (problem.kind == ProblemKind::kSingle) {
    const Mdp& mdp = problem.single.mdp;
    const CapacitySpec& cap = problem.single.cap;
    out << "switching states:";
    for (int j : s.plan.switching_states) out << " " << mdp.state_name(j);
    out << "\n";
    for (std::size_t k = 0; k < s.plan.phases.size(); ++k) {
      const Phase& p = s.plan.phases[k];
      out << "phase " << k << " bundle {";
      for (std::size_t i = 0; i < p.bundle.held.size(); ++i) {
        out << (i ? "," : "") << cap.resources[p.bundle.held[i]];
      }
      out << "} anchors";
      for (int a : p.anchors) out << " " << mdp.state_name(a);
      out << "\n";
    }
    for (const auto& [state, v] : s.plan.anchor_values) {
      out << "V(" << mdp.state_name(state) << ") = " << Fixed(v) << "\n";
    }
  } else {
    const MultiagentProblem& mp = problem.multi;
    out << "reallocation times:";
    for (int t : s.schedule.realloc_times) out << " " << t;
    out << "\n";
    for (int m = 1; m < static_cast<int>(s.schedule.assignment.size()); ++m) {
      out << mp.agents[m - 1].name << ":";
      for (int o = 0; o < mp.num_resources(); ++o) {
        out << " " << mp.shared.resources[o] << "=";
        for (int v : s.schedule.assignment[m][o]) out << v;
      }
      out << "\n";
    }
  }
  out << "nodes " << s.stats.nodes << "  lp solves " << s.stats.lp_solves
      << "  wall " << Fixed(s.stats.wall_seconds) << " s\n";
  return out.str();
}

}  // namespace rmp
