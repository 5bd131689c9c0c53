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

#include <chrono>
#include <string>
#include <vector>

#include "linprog/simplex.hpp"
#include "rmp/baselines.hpp"
#include "rmp/errors.hpp"

namespace rmp {

OracleResult BruteForce(const MilpModel& model, int binary_cap) {
  const auto start = std::chrono::steady_clock::now();
  model.Validate();
  OracleResult out;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.var(j).kind == VarKind::kBinary) out.binaries.push_back(j);
  }
  const int b = static_cast<int>(out.binaries.size());
  if (b > binary_cap) {
    throw Error(ErrorCode::kTooManyBinaries,
                std::to_string(b) + " binaries exceed the cap of " +
                    std::to_string(binary_cap));
  }

  // Gray-code order: consecutive assignments differ in one binary, so each
  // LP warm starts from the previous basis.
  detail::Simplex lp(model);
  std::vector<int> value(b, 0);
  for (int k = 0; k < b; ++k) lp.SetBounds(out.binaries[k], 0.0, 0.0);
  detail::Basis basis;
  bool have_basis = false;
  const long total = 1L << b;
  for (long step = 0; step < total; ++step) {
    if (step > 0) {
      const int flip = __builtin_ctzl(static_cast<unsigned long>(step));
      value[flip] ^= 1;
      lp.SetBounds(out.binaries[flip], value[flip], value[flip]);
    }
    const detail::LpStatus st = have_basis ? lp.SolveFrom(basis) : lp.Solve();
    ++out.enumerated;
    if (st == detail::LpStatus::kUnbounded) {
      throw Error(ErrorCode::kLpUnbounded, "assignment LP is unbounded");
    }
    if (st != detail::LpStatus::kOptimal) continue;
    basis = lp.CurrentBasis();
    have_basis = true;
    const double z = lp.Objective();
    if (!out.feasible || z > out.objective) {
      out.feasible = true;
      out.objective = z;
      out.values = lp.StructuralValues();
      out.assignment = value;
    }
  }
  out.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return out;
}

}  // namespace rmp
