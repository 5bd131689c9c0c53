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

#include <fstream>
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

// ---- reading ----

std::map<std::string, int> IndexOf(const std::vector<std::string>& names,
                                   const Node& where) {
  std::map<std::string, int> out;
  for (int i = 0; i < static_cast<int>(names.size()); ++i) {
    if (!out.emplace(names[i], i).second) {
      where.Fail("duplicate id '" + names[i] + "'");
    }
  }
  return out;
}

int Lookup(const std::map<std::string, int>& index, const Node& node) {
  const std::string id = node.String();
  const auto it = index.find(id);
  if (it == index.end()) node.Fail("unknown id '" + id + "'");
  return it->second;
}

std::vector<double> Numbers(const Node& node) {
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(node[i].Number());
  return out;
}

std::vector<int> Ints(const Node& node) {
  std::vector<int> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(node[i].Int());
  return out;
}

CapacitySpec ReadCapacity(const Node& root, bool shared) {
  CapacitySpec cap;
  const Node caps = root["capacities"];
  for (std::size_t c = 0; c < caps.size(); ++c) {
    cap.capacities.push_back(caps[c]["id"].String());
    cap.tau_hat.push_back(caps[c]["limit"].Number());
  }
  IndexOf(cap.capacities, caps);
  const Node res = root["resources"];
  for (std::size_t o = 0; o < res.size(); ++o) {
    cap.resources.push_back(res[o]["id"].String());
    cap.tau.push_back(Numbers(res[o]["tau"]));
    if (cap.tau.back().size() != cap.capacities.size()) {
      res[o]["tau"].Fail("needs one entry per capacity");
    }
    if (shared || res[o].Has("copies")) {
      cap.omega_hat.push_back(res[o]["copies"].Int());
    }
  }
  IndexOf(cap.resources, res);
  if (!cap.omega_hat.empty() && cap.omega_hat.size() != cap.resources.size()) {
    res.Fail("'copies' must be given for every resource or none");
  }
  return cap;
}

void ReadMdp(const Node& node, const std::map<std::string, int>& resources,
             Mdp* mdp, InitialDistribution* alpha) {
  const Node states = node["states"];
  std::vector<std::string> names;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Node s = states[i];
    names.push_back(s["id"].String());
    mdp->AddState(names.back(), s.Has("time") ? s["time"].Int() : -1);
  }
  const auto index = IndexOf(names, states);
  const Node actions = node["actions"];
  for (std::size_t k = 0; k < actions.size(); ++k) {
    const Node a = actions[k];
    Action act;
    act.name = a["id"].String();
    act.reward = a.Has("reward") ? a["reward"].Number() : 0.0;
    if (a.Has("requires")) {
      const Node req = a["requires"];
      for (std::size_t r = 0; r < req.size(); ++r) {
        act.requires_resources.push_back(Lookup(resources, req[r]));
      }
    }
    const Node next = a["next"];
    for (std::size_t t = 0; t < next.size(); ++t) {
      if (next[t].size() != 2) next[t].Fail("expected [state, probability]");
      act.outcomes.push_back({Lookup(index, next[t][0]), next[t][1].Number()});
    }
    mdp->AddAction(Lookup(index, a["state"]), std::move(act));
  }
  alpha->alpha.assign(mdp->num_states(), 0.0);
  const Node init = node["alpha"];
  for (std::size_t i = 0; i < init.size(); ++i) {
    if (init[i].size() != 2) init[i].Fail("expected [state, mass]");
    alpha->alpha[Lookup(index, init[i][0])] += init[i][1].Number();
  }
  try {
    mdp->Validate();
  } catch (const Error& e) {
    node.Fail(e.what());
  }
}

SwitchMode ReadSwitchMode(const Node& node) {
  const std::string m = node.String();
  for (SwitchMode mode : {SwitchMode::kBudgeted, SwitchMode::kCostInObjective,
                          SwitchMode::kGrouped}) {
    if (m == ToString(mode)) return mode;
  }
  node.Fail("unknown switching mode '" + m + "'");
}

ReallocMode ReadReallocMode(const Node& node) {
  const std::string m = node.String();
  for (ReallocMode mode :
       {ReallocMode::kOneShot, ReallocMode::kFixedSchedule, ReallocMode::kBudget,
        ReallocMode::kEventCost, ReallocMode::kTransferCost}) {
    if (m == ToString(mode)) return mode;
  }
  node.Fail("unknown reallocation mode '" + m + "'");
}

void ReadSingle(const Node& root, ProblemFile* out) {
  SingleAgentProblem& p = out->single;
  p.name = out->name;
  p.cap = ReadCapacity(root, false);
  ReadMdp(root["mdp"], IndexOf(p.cap.resources, root["resources"]), &p.mdp,
          &p.alpha);
  const Node sw = root["switching"];
  PhaseSwitchSpec& spec = p.switching;
  spec.mode = ReadSwitchMode(sw["mode"]);
  const int n = p.mdp.num_states();
  if (sw.Has("lambda")) {
    spec.lambda = Numbers(sw["lambda"]);
    if (static_cast<int>(spec.lambda.size()) != n) {
      sw["lambda"].Fail("needs one entry per state");
    }
  }
  if (sw.Has("budget")) spec.budget = sw["budget"].Number();
  if (sw.Has("groups")) {
    spec.group_of = Ints(sw["groups"]);
    if (static_cast<int>(spec.group_of.size()) != n) {
      sw["groups"].Fail("needs one entry per state");
    }
    spec.group_lambda = Numbers(sw["group_lambda"]);
  }
  std::vector<std::string> names;
  for (int s = 0; s < n; ++s) names.push_back(p.mdp.state_name(s));
  const auto index = IndexOf(names, root["mdp"]["states"]);
  if (sw.Has("fixed")) {
    const Node fixed = sw["fixed"];
    for (std::size_t i = 0; i < fixed.size(); ++i) {
      out->fixed_states.push_back(Lookup(index, fixed[i]));
    }
  }
  try {
    p.cap.Validate(&p.mdp);
    spec.Validate(p.mdp, p.alpha);
  } catch (const Error& e) {
    sw.Fail(e.what());
  }
}

void ReadMulti(const Node& root, ProblemFile* out) {
  MultiagentProblem& p = out->multi;
  p.shared = ReadCapacity(root, true);
  p.horizon = root["horizon"].Int();
  const auto resources = IndexOf(p.shared.resources, root["resources"]);
  const Node agents = root["agents"];
  bool any_limits = false;
  for (std::size_t m = 0; m < agents.size(); ++m) {
    AgentModel agent;
    agent.name = agents[m]["id"].String();
    ReadMdp(agents[m]["mdp"], resources, &agent.mdp, &agent.alpha);
    if (agents[m].Has("limits")) {
      any_limits = true;
      p.agent_tau_hat.push_back(Numbers(agents[m]["limits"]));
    } else {
      p.agent_tau_hat.push_back({});
    }
    p.agents.push_back(std::move(agent));
  }
  if (!any_limits) p.agent_tau_hat.clear();

  const Node r = root["realloc"];
  ReallocSpec& spec = out->realloc;
  spec.mode = ReadReallocMode(r["mode"]);
  if (r.Has("schedule")) spec.times = Ints(r["schedule"]);
  if (r.Has("psi")) spec.psi = Numbers(r["psi"]);
  if (r.Has("psi_budget")) spec.psi_budget = r["psi_budget"].Number();
  if (r.Has("transfer_cost")) {
    const Node c = r["transfer_cost"];
    if (c.json().is_number()) {
      spec.transfer_cost =
          ReallocSpec::UniformTransfer(p, c.Number()).transfer_cost;
    } else {
      for (std::size_t o = 0; o < c.size(); ++o) {
        spec.transfer_cost.emplace_back();
        for (std::size_t m = 0; m < c[o].size(); ++m) {
          spec.transfer_cost.back().push_back(Numbers(c[o][m]));
        }
      }
    }
  }
  try {
    p.Validate();
    // Only the parameters of the file's own mode must be complete.
    spec.Validate(p);
  } catch (const Error& e) {
    r.Fail(e.what());
  }
}

// ---- writing ----

Json WriteCapacity(const CapacitySpec& cap, Json* resources) {
  Json caps = Json::array();
  for (int c = 0; c < cap.num_capacities(); ++c) {
    caps.push_back({{"id", cap.capacities[c]}, {"limit", cap.tau_hat[c]}});
  }
  *resources = Json::array();
  for (int o = 0; o < cap.num_resources(); ++o) {
    Json r = {{"id", cap.resources[o]}, {"tau", cap.tau[o]}};
    if (!cap.omega_hat.empty()) r["copies"] = cap.omega_hat[o];
    resources->push_back(std::move(r));
  }
  return caps;
}

Json WriteMdp(const Mdp& mdp, const InitialDistribution& alpha,
              const CapacitySpec& cap) {
  Json states = Json::array();
  Json actions = Json::array();
  for (int s = 0; s < mdp.num_states(); ++s) {
    Json st = {{"id", mdp.state_name(s)}};
    if (mdp.time(s) >= 0) st["time"] = mdp.time(s);
    states.push_back(std::move(st));
    for (const Action& a : mdp.actions(s)) {
      Json act = {{"state", mdp.state_name(s)}, {"id", a.name},
                  {"reward", a.reward}};
      if (!a.requires_resources.empty()) {
        Json req = Json::array();
        for (int o : a.requires_resources) req.push_back(cap.resources[o]);
        act["requires"] = std::move(req);
      }
      Json next = Json::array();
      for (const Outcome& o : a.outcomes) {
        next.push_back({mdp.state_name(o.next), o.prob});
      }
      act["next"] = std::move(next);
      actions.push_back(std::move(act));
    }
  }
  Json init = Json::array();
  for (int s = 0; s < static_cast<int>(alpha.alpha.size()); ++s) {
    if (alpha.alpha[s] != 0.0) init.push_back({mdp.state_name(s), alpha.alpha[s]});
  }
  return {{"states", std::move(states)},
          {"actions", std::move(actions)},
          {"alpha", std::move(init)}};
}

bool Uniform(const std::vector<std::vector<std::vector<double>>>& c) {
  if (c.empty() || c[0].empty() || c[0][0].empty()) return false;
  const double first = c[0][0][0];
  for (const auto& a : c) {
    for (const auto& b : a) {
      for (double v : b) {
        if (v != first) return false;
      }
    }
  }
  return true;
}

}  // namespace

ProblemFile ParseProblem(const std::string& text, const std::string& source) {
  const Json json = detail::ParseJsonText(text, source);
  const Node root(json, source);
  const int version = root["version"].Int();
  if (version != kFileVersion) {
    root["version"].Fail("unsupported version " + std::to_string(version));
  }
  ProblemFile out;
  out.name = root.Has("name") ? root["name"].String() : "";
  const std::string kind = root["kind"].String();
  if (kind == "srmp") {
    out.kind = ProblemKind::kSingle;
    ReadSingle(root, &out);
  } else if (kind == "mrmp") {
    out.kind = ProblemKind::kMulti;
    ReadMulti(root, &out);
  } else {
    root["kind"].Fail("expected 'srmp' or 'mrmp'");
  }
  return out;
}

ProblemFile LoadProblem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, path + ": cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseProblem(text.str(), path);
}

std::string EmitProblem(const ProblemFile& problem) {
  Json root;
  root["version"] = kFileVersion;
  root["kind"] = problem.kind == ProblemKind::kSingle ? "srmp" : "mrmp";
  root["name"] = problem.name;
  Json resources;
  if (problem.kind == ProblemKind::kSingle) {
    const SingleAgentProblem& p = problem.single;
    root["capacities"] = WriteCapacity(p.cap, &resources);
    root["resources"] = std::move(resources);
    root["mdp"] = WriteMdp(p.mdp, p.alpha, p.cap);
    const PhaseSwitchSpec& s = p.switching;
    Json sw = {{"mode", ToString(s.mode)}, {"budget", s.budget}};
    if (!s.lambda.empty()) sw["lambda"] = s.lambda;
    if (!s.group_of.empty()) {
      sw["groups"] = s.group_of;
      sw["group_lambda"] = s.group_lambda;
    }
    if (!problem.fixed_states.empty()) {
      Json fixed = Json::array();
      for (int i : problem.fixed_states) fixed.push_back(p.mdp.state_name(i));
      sw["fixed"] = std::move(fixed);
    }
    root["switching"] = std::move(sw);
  } else {
    const MultiagentProblem& p = problem.multi;
    root["capacities"] = WriteCapacity(p.shared, &resources);
    root["resources"] = std::move(resources);
    root["horizon"] = p.horizon;
    Json agents = Json::array();
    for (int m = 0; m < p.num_agents(); ++m) {
      Json a = {{"id", p.agents[m].name},
                {"mdp", WriteMdp(p.agents[m].mdp, p.agents[m].alpha, p.shared)}};
      if (!p.agent_tau_hat.empty() && !p.agent_tau_hat[m].empty()) {
        a["limits"] = p.agent_tau_hat[m];
      }
      agents.push_back(std::move(a));
    }
    root["agents"] = std::move(agents);
    const ReallocSpec& s = problem.realloc;
    Json r = {{"mode", ToString(s.mode)}};
    if (!s.times.empty()) r["schedule"] = s.times;
    if (!s.psi.empty()) r["psi"] = s.psi;
    r["psi_budget"] = s.psi_budget;
    if (Uniform(s.transfer_cost)) {
      r["transfer_cost"] = s.transfer_cost[0][0][0];
    } else if (!s.transfer_cost.empty()) {
      r["transfer_cost"] = s.transfer_cost;
    }
    root["realloc"] = std::move(r);
  }
  return root.dump(2) + "\n";
}

ProblemFile MakeProblem(const SingleAgentProblem& problem) {
  ProblemFile out;
  out.kind = ProblemKind::kSingle;
  out.name = problem.name;
  out.single = problem;
  return out;
}

ProblemFile MakeProblem(const MultiagentProblem& problem,
                        const ReallocSpec& realloc, const std::string& name) {
  ProblemFile out;
  out.kind = ProblemKind::kMulti;
  out.name = name;
  out.multi = problem;
  out.realloc = realloc;
  return out;
}

}  // namespace rmp
