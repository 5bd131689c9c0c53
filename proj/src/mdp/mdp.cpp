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

#include "rmp/mdp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mdp/flow.hpp"
#include "rmp/errors.hpp"
#include "rmp/linprog.hpp"

namespace rmp {

int Mdp::AddState(std::string name, int time) {
  names_.push_back(std::move(name));
  times_.push_back(time);
  actions_.emplace_back();
  offset_.push_back(offset_.empty()
                        ? 0
                        : offset_.back() +
                              static_cast<int>(actions_[actions_.size() - 2]
                                                   .size()));
  return num_states() - 1;
}

int Mdp::AddAction(int state, Action action) {
  std::sort(action.requires_resources.begin(),
            action.requires_resources.end());
  actions_.at(state).push_back(std::move(action));
  for (int s = state + 1; s < num_states(); ++s) ++offset_[s];
  return num_actions(state) - 1;
}

int Mdp::num_state_actions() const {
  if (names_.empty()) return 0;
  return offset_.back() + static_cast<int>(actions_.back().size());
}

int Mdp::FindState(const std::string& name) const {
  for (int s = 0; s < num_states(); ++s) {
    if (names_[s] == name) return s;
  }
  return -1;
}

bool Mdp::has_time() const {
  return !times_.empty() &&
         std::all_of(times_.begin(), times_.end(), [](int t) { return t >= 0; });
}

int Mdp::max_time() const {
  int t = 0;
  for (int v : times_) t = std::max(t, v);
  return t;
}

int Mdp::DefaultAction(int state) const {
  if (actions_[state].empty()) return -1;
  for (int a = 0; a < num_actions(state); ++a) {
    if (actions_[state][a].requires_resources.empty()) return a;
  }
  return 0;
}

void Mdp::Validate() const {
  for (int s = 0; s < num_states(); ++s) {
    if (actions_[s].empty()) {
      throw Error(ErrorCode::kInvalidInput,
                  "state '" + names_[s] +
                      "' has no actions; model sinks with an action that "
                      "has no successors");
    }
    for (const Action& a : actions_[s]) {
      if (!std::isfinite(a.reward)) {
        throw Error(ErrorCode::kInvalidInput,
                    "non-finite reward at state '" + names_[s] + "'");
      }
      double total = 0.0;
      for (const Outcome& o : a.outcomes) {
        if (o.next < 0 || o.next >= num_states()) {
          throw Error(ErrorCode::kInvalidInput,
                      "transition to unknown state from '" + names_[s] + "'");
        }
        if (!(o.prob >= 0.0 && o.prob <= 1.0)) {
          throw Error(ErrorCode::kInvalidInput,
                      "probability outside [0,1] at state '" + names_[s] +
                          "'");
        }
        total += o.prob;
      }
      if (total > 1.0 + 1e-9) {
        throw Error(ErrorCode::kInvalidInput,
                    "outgoing probability exceeds 1 at state '" + names_[s] +
                        "', action '" + a.name + "'");
      }
    }
  }
}

InitialDistribution InitialDistribution::Point(int num_states, int state) {
  InitialDistribution d;
  d.alpha.assign(num_states, 0.0);
  d.alpha.at(state) = 1.0;
  return d;
}

std::vector<int> InitialDistribution::Support(double tol) const {
  std::vector<int> out;
  for (int s = 0; s < static_cast<int>(alpha.size()); ++s) {
    if (alpha[s] > tol) out.push_back(s);
  }
  return out;
}

int Policy::ArgMax(int state) const {
  const auto& d = action_dist[state];
  if (d.empty()) return -1;
  return static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin());
}

bool Policy::IsDeterministic(double tol) const {
  for (const auto& d : action_dist) {
    for (double p : d) {
      if (p > tol && p < 1.0 - tol) return false;
    }
  }
  return true;
}

double OccupationMeasure::StateTotal(const Mdp& mdp, int state) const {
  double s = 0.0;
  for (int a = 0; a < mdp.num_actions(state); ++a) s += x[mdp.sa(state, a)];
  return s;
}

double OccupationMeasure::Total() const {
  return std::accumulate(x.begin(), x.end(), 0.0);
}

bool ResourceBundle::Holds(int resource) const {
  return std::binary_search(held.begin(), held.end(), resource);
}

TransienceReport CheckTransient(const Mdp& mdp,
                                const InitialDistribution& alpha,
                                int horizon_cap) {
  const int n = mdp.num_states();
  std::vector<double> mass(n, 0.0), next(n, 0.0);
  for (int s = 0; s < n && s < static_cast<int>(alpha.alpha.size()); ++s) {
    mass[s] = alpha.alpha[s];
  }
  TransienceReport report;
  for (int step = 0; step < horizon_cap; ++step) {
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    if (total < 1e-9) {
      report.steps = step;
      return report;
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (int s = 0; s < n; ++s) {
      if (mass[s] == 0.0 || mdp.num_actions(s) == 0) continue;
      const double share = mass[s] / mdp.num_actions(s);
      for (const Action& a : mdp.actions(s)) {
        for (const Outcome& o : a.outcomes) next[o.next] += share * o.prob;
      }
    }
    mass.swap(next);
  }
  report.transient = false;
  report.steps = horizon_cap;
  for (int s = 0; s < n; ++s) {
    if (mass[s] > 1e-12) report.retained_states.push_back(s);
  }
  return report;
}

void ValidateTransient(const Mdp& mdp, const InitialDistribution& alpha,
                       int horizon_cap) {
  TransienceReport r = CheckTransient(mdp, alpha, horizon_cap);
  if (!r.transient) throw NonTransientError(std::move(r.retained_states));
}

UnconstrainedResult SolveUnconstrained(const Mdp& mdp,
                                       const InitialDistribution& alpha) {
  MilpModel model;
  const detail::FlowColumns x = detail::AddFlowColumns(model, mdp, "");
  detail::AddConservationRows(model, mdp, x, alpha.alpha, {}, "");
  detail::AddRewardObjective(model, mdp, x);
  const MilpSolution sol = SolveLp(model);
  if (sol.status == SolveStatus::kInfeasible) {
    throw Error(ErrorCode::kLpInfeasible, "occupancy LP is infeasible");
  }
  if (sol.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kLpUnbounded,
                "occupancy LP is unbounded; the MDP is not transient");
  }
  return {sol.objective, detail::ReadFlow(mdp, x, sol.values)};
}

Policy ExtractPolicy(const Mdp& mdp, const OccupationMeasure& x) {
  Policy pi;
  pi.action_dist.resize(mdp.num_states());
  for (int s = 0; s < mdp.num_states(); ++s) {
    const int na = mdp.num_actions(s);
    if (na == 0) continue;
    std::vector<double> d(na, 0.0);
    double total = 0.0;
    for (int a = 0; a < na; ++a) {
      d[a] = std::max(0.0, x.x[mdp.sa(s, a)]);
      total += d[a];
    }
    if (total > 1e-9) {
      for (double& v : d) v /= total;
    } else {
      std::fill(d.begin(), d.end(), 0.0);
      d[mdp.DefaultAction(s)] = 1.0;
    }
    pi.action_dist[s] = std::move(d);
  }
  return pi;
}

std::vector<double> SolveChain(
    const std::vector<std::vector<std::pair<int, double>>>& rows,
    const std::vector<double>& reward) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) return {};
  if (n <= 5000) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
      b[i] = reward[i];
      for (const auto& [j, p] : rows[i]) a(i, j) -= p;
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::MatrixXd& packed = lu.matrixLU();
    for (int i = 0; i < n; ++i) {
      if (!(std::fabs(packed(i, i)) >= 1e-12)) {
        throw Error(ErrorCode::kNonConvergent,
                    "induced chain is not transient (singular system)");
      }
    }
    const Eigen::VectorXd v = lu.solve(b);
    return {v.data(), v.data() + n};
  }
  // Gauss-Seidel on v = r + P v; converges for transient chains.
  std::vector<double> v(n, 0.0);
  for (int sweep = 0; sweep < 1000000; ++sweep) {
    double change = 0.0;
    double scale = 1.0;
    for (int i = 0; i < n; ++i) {
      double self = 0.0;
      double acc = reward[i];
      for (const auto& [j, p] : rows[i]) {
        if (j == i) {
          self += p;
        } else {
          acc += p * v[j];
        }
      }
      if (self >= 1.0 - 1e-15) {
        throw Error(ErrorCode::kNonConvergent, "absorbing self-loop");
      }
      const double nv = acc / (1.0 - self);
      change = std::max(change, std::fabs(nv - v[i]));
      scale = std::max(scale, std::fabs(nv));
      v[i] = nv;
    }
    if (!std::isfinite(change)) break;
    if (change < 1e-13 * scale) return v;
  }
  throw Error(ErrorCode::kNonConvergent, "chain evaluation did not converge");
}

namespace {

const std::vector<double>& ActionDist(const Mdp& mdp, const Policy& policy,
                                      int s, std::vector<double>& scratch) {
  if (s < static_cast<int>(policy.action_dist.size()) &&
      !policy.action_dist[s].empty()) {
    return policy.action_dist[s];
  }
  scratch.assign(mdp.num_actions(s), 0.0);
  const int a = mdp.DefaultAction(s);
  if (a >= 0) scratch[a] = 1.0;
  return scratch;
}

}  // namespace

std::vector<double> PolicyValues(const Mdp& mdp, const Policy& policy,
                                 const InitialDistribution& alpha) {
  const int n = mdp.num_states();
  std::vector<int> local(n, -1);
  std::vector<int> order;
  std::deque<int> queue;
  for (int s : alpha.Support()) {
    local[s] = static_cast<int>(order.size());
    order.push_back(s);
    queue.push_back(s);
  }
  std::vector<double> scratch;
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    const auto& d = ActionDist(mdp, policy, s, scratch);
    for (int a = 0; a < mdp.num_actions(s); ++a) {
      if (d[a] <= 0.0) continue;
      for (const Outcome& o : mdp.action(s, a).outcomes) {
        if (o.prob > 0.0 && local[o.next] < 0) {
          local[o.next] = static_cast<int>(order.size());
          order.push_back(o.next);
          queue.push_back(o.next);
        }
      }
    }
  }
  const int m = static_cast<int>(order.size());
  std::vector<std::vector<std::pair<int, double>>> rows(m);
  std::vector<double> r(m, 0.0);
  for (int k = 0; k < m; ++k) {
    const int s = order[k];
    const auto& d = ActionDist(mdp, policy, s, scratch);
    for (int a = 0; a < mdp.num_actions(s); ++a) {
      if (d[a] <= 0.0) continue;
      r[k] += d[a] * mdp.action(s, a).reward;
      for (const Outcome& o : mdp.action(s, a).outcomes) {
        if (o.prob > 0.0) rows[k].emplace_back(local[o.next], d[a] * o.prob);
      }
    }
  }
  const std::vector<double> v = SolveChain(rows, r);
  std::vector<double> out(n, 0.0);
  for (int k = 0; k < m; ++k) out[order[k]] = v[k];
  return out;
}

double EvaluatePolicy(const Mdp& mdp, const Policy& policy,
                      const InitialDistribution& alpha) {
  const std::vector<double> v = PolicyValues(mdp, policy, alpha);
  double total = 0.0;
  for (int s : alpha.Support()) total += alpha.alpha[s] * v[s];
  return total;
}

double EvaluatePhasePlan(const Mdp& mdp, const PhasePlan& plan,
                         const InitialDistribution& alpha) {
  const int n = mdp.num_states();
  const int k_count = static_cast<int>(plan.phases.size());
  if (k_count == 0) {
    throw Error(ErrorCode::kInvalidInput, "phase plan has no phases");
  }
  std::vector<char> switching(n, 0);
  for (int s : plan.switching_states) switching.at(s) = 1;

  // Distribution over phases on entering state j, or empty to keep phase.
  auto selection = [&](int j) -> const std::vector<double>* {
    if (!switching[j]) return nullptr;
    const auto it = plan.phase_selection.find(j);
    if (it == plan.phase_selection.end() || it->second.empty()) return nullptr;
    return &it->second;
  };

  auto id = [&](int k, int s) { return k * n + s; };
  std::vector<int> local(static_cast<std::size_t>(k_count) * n, -1);
  std::vector<int> order;
  std::deque<int> queue;
  auto visit = [&](int node) {
    if (local[node] >= 0) return;
    local[node] = static_cast<int>(order.size());
    order.push_back(node);
    queue.push_back(node);
  };

  std::vector<std::pair<int, double>> start;
  for (int j : alpha.Support()) {
    const std::vector<double>* sel = selection(j);
    if (sel == nullptr) {
      if (k_count != 1) {
        throw Error(ErrorCode::kInvalidInput,
                    "initial state '" + mdp.state_name(j) +
                        "' has no phase selection");
      }
      start.emplace_back(id(0, j), alpha.alpha[j]);
      continue;
    }
    for (int k = 0; k < k_count; ++k) {
      if ((*sel)[k] > 0.0) start.emplace_back(id(k, j), alpha.alpha[j] * (*sel)[k]);
    }
  }
  for (const auto& [node, w] : start) visit(node);

  std::vector<double> scratch;
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> r;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int node = order[head];
    const int k = node / n;
    const int s = node % n;
    std::vector<std::pair<int, double>> row;
    double reward = 0.0;
    const auto& d = ActionDist(mdp, plan.phases[k].policy, s, scratch);
    for (int a = 0; a < mdp.num_actions(s); ++a) {
      if (d[a] <= 0.0) continue;
      reward += d[a] * mdp.action(s, a).reward;
      for (const Outcome& o : mdp.action(s, a).outcomes) {
        if (o.prob <= 0.0) continue;
        const double p = d[a] * o.prob;
        const std::vector<double>* sel = selection(o.next);
        if (sel == nullptr) {
          const int to = id(k, o.next);
          visit(to);
          row.emplace_back(to, p);
        } else {
          for (int k2 = 0; k2 < k_count; ++k2) {
            if ((*sel)[k2] <= 0.0) continue;
            const int to = id(k2, o.next);
            visit(to);
            row.emplace_back(to, p * (*sel)[k2]);
          }
        }
      }
    }
    rows.push_back(std::move(row));
    r.push_back(reward);
  }
  for (auto& row : rows) {
    for (auto& [to, p] : row) to = local[to];
  }
  const std::vector<double> v = SolveChain(rows, r);
  double total = 0.0;
  for (const auto& [node, w] : start) total += w * v[local[node]];
  return total;
}

}  // namespace rmp
