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

// Small self-contained LP/MILP engine. Every formulation in this library is
// compiled into a MilpModel and handed to solve_lp or solve_milp.
//
// The LP solver is a bounded-variable revised simplex over a sparse LU of the
// basis with product-form updates. The MILP solver is a best-bound branch and bound over binary
// variables that warm starts every node from its parent's basis with a dual
// simplex. Both are deterministic for a fixed model and config.

#ifndef RMP_LINPROG_HPP_
#define RMP_LINPROG_HPP_

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace rmp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind : std::uint8_t { kContinuous, kBinary };
enum class Relation : std::uint8_t { kLessEqual, kEqual, kGreaterEqual };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = kInf;
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

// A maximization model. Variable and row indices are dense and stable.
class MilpModel {
 public:
  int AddVariable(std::string name, VarKind kind, double lower, double upper);
  int AddContinuous(std::string name, double lower = 0.0,
                    double upper = kInf) {
    return AddVariable(std::move(name), VarKind::kContinuous, lower, upper);
  }
  int AddBinary(std::string name) {
    return AddVariable(std::move(name), VarKind::kBinary, 0.0, 1.0);
  }
  int AddConstraint(std::string name, std::vector<Term> terms,
                    Relation relation, double rhs);

  void SetObjective(int var, double coef);
  void AddToObjective(int var, double coef);
  void SetObjectiveOffset(double offset) { offset_ = offset; }
  void SetBounds(int var, double lower, double upper);

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  long num_nonzeros() const;
  int num_binaries() const;

  const Variable& var(int j) const { return vars_[j]; }
  const std::vector<Variable>& vars() const { return vars_; }
  const Constraint& row(int i) const { return rows_[i]; }
  const std::vector<Constraint>& rows() const { return rows_; }
  const std::vector<double>& objective() const { return obj_; }
  double objective_offset() const { return offset_; }

  // Throws std::invalid_argument on dangling indices, bad binary bounds or
  // non-finite coefficients.
  void Validate() const;

  // Objective value of an assignment, offset included.
  double Evaluate(const std::vector<double>& values) const;

  // Largest absolute violation over rows and bounds.
  double MaxViolation(const std::vector<double>& values) const;

  // Index of the variable with this name, or -1.
  int FindVariable(const std::string& name) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::vector<double> obj_;
  double offset_ = 0.0;
};

enum class SolveStatus : std::uint8_t {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kGapLimit,
};

const char* ToString(SolveStatus status);

struct BranchStats {
  long nodes = 0;
  long lp_solves = 0;
  long simplex_iterations = 0;
  double wall_seconds = 0.0;
};

struct MilpSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  double objective = 0.0;
  // Best proven upper bound (maximization). Equals objective when optimal.
  double bound = 0.0;
  // Empty when no feasible point is known.
  std::vector<double> values;
  BranchStats stats;

  bool has_solution() const { return !values.empty(); }
  double value(int var) const { return values.at(var); }
};

struct SolverConfig {
  double integrality_tol = 1e-6;
  double feasibility_tol = 1e-7;
  // Relative gap at which the search stops. Zero means prove optimality.
  double optimality_gap = 0.0;
  long node_limit = 50'000'000;
  double time_limit = 600.0;
  // Periodic diving for incumbents. Does not change node order or branching.
  bool heuristics = true;
};

// LP relaxation: binaries are relaxed to [0, 1].
MilpSolution SolveLp(const MilpModel& model, const SolverConfig& config = {});

MilpSolution SolveMilp(const MilpModel& model,
                       const SolverConfig& config = {});

// CPLEX-style LP text. Names are sanitized to [A-Za-z0-9_.] and prefixed
// when they would start with a digit or a period.
std::string ToLpFormat(const MilpModel& model,
                       const std::string& problem_name = "rmp");

}  // namespace rmp

#endif  // RMP_LINPROG_HPP_
