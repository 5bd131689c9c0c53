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

#include "mdp/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace rmp::detail {

FlowColumns AddFlowColumns(MilpModel& model, const Mdp& mdp,
                           const std::string& tag) {
  FlowColumns cols;
  cols.first = model.num_vars();
  for (int s = 0; s < mdp.num_states(); ++s) {
    for (int a = 0; a < mdp.num_actions(s); ++a) {
      model.AddContinuous("x" + tag + "_s" + std::to_string(s) + "_a" +
                          std::to_string(a));
    }
  }
  cols.count = model.num_vars() - cols.first;
  return cols;
}

std::vector<int> AddConservationRows(MilpModel& model, const Mdp& mdp,
                                     const FlowColumns& x,
                                     const std::vector<double>& rhs,
                                     const std::vector<int>& extra,
                                     const std::string& tag) {
  const int n = mdp.num_states();
  std::vector<std::vector<Term>> terms(n);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < mdp.num_actions(s); ++a) {
      const int col = x.col(mdp.sa(s, a));
      terms[s].push_back({col, 1.0});
      for (const Outcome& o : mdp.action(s, a).outcomes) {
        terms[o.next].push_back({col, -o.prob});
      }
    }
  }
  std::vector<int> rows;
  rows.reserve(n);
  for (int j = 0; j < n; ++j) {
    if (!extra.empty() && extra[j] >= 0) terms[j].push_back({extra[j], -1.0});
    rows.push_back(model.AddConstraint(
        "flow" + tag + "_s" + std::to_string(j), std::move(terms[j]),
        Relation::kEqual, rhs.empty() ? 0.0 : rhs[j]));
  }
  return rows;
}

void AddRewardObjective(MilpModel& model, const Mdp& mdp, const FlowColumns& x,
                        double scale) {
  for (int s = 0; s < mdp.num_states(); ++s) {
    for (int a = 0; a < mdp.num_actions(s); ++a) {
      model.AddToObjective(x.col(mdp.sa(s, a)),
                           scale * mdp.action(s, a).reward);
    }
  }
}

OccupationMeasure ReadFlow(const Mdp& mdp, const FlowColumns& x,
                           const std::vector<double>& values) {
  OccupationMeasure occ;
  occ.x.resize(mdp.num_state_actions());
  for (int k = 0; k < x.count; ++k) {
    occ.x[k] = std::max(0.0, values[x.col(k)]);
  }
  return occ;
}

double ConservationResidual(const Mdp& mdp, const std::vector<double>& x,
                            const std::vector<double>& alpha) {
  std::vector<double> balance(mdp.num_states(), 0.0);
  for (int s = 0; s < mdp.num_states(); ++s) {
    balance[s] -= s < static_cast<int>(alpha.size()) ? alpha[s] : 0.0;
    for (int a = 0; a < mdp.num_actions(s); ++a) {
      const double v = x[mdp.sa(s, a)];
      balance[s] += v;
      for (const Outcome& o : mdp.action(s, a).outcomes) {
        balance[o.next] -= o.prob * v;
      }
    }
  }
  double worst = 0.0;
  for (double b : balance) worst = std::max(worst, std::fabs(b));
  return worst;
}

}  // namespace rmp::detail
