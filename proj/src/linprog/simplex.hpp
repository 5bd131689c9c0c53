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

// Bounded-variable revised simplex used by SolveLp and the branch and bound.
//
// Every row i of the model is rewritten as a_i x - s_i = 0 where the logical
// s_i carries the row bounds, so the right-hand side is always zero and the
// slack basis B = -I is always available. The basis is held as a sparse LU
// factorization followed by a product-form eta file, refactored periodically.

#ifndef RMP_SRC_LINPROG_SIMPLEX_HPP_
#define RMP_SRC_LINPROG_SIMPLEX_HPP_

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cstdint>
#include <memory>
#include <vector>

#include "rmp/linprog.hpp"

namespace rmp::detail {

enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

struct Basis {
  std::vector<int> head;
  std::vector<VarState> state;
};

enum class LpStatus : std::uint8_t {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
};

// B = B0 E_1^-1 ... E_k^-1: sparse LU of the last refactored basis plus one
// eta column per pivot since.
class BasisFactor {
 public:
  // Columns of B as sparse (row, value) lists.
  bool Factor(int m, const std::vector<std::vector<std::pair<int, double>>>& cols);
  // v <- B^-1 v
  void Ftran(Eigen::VectorXd& v) const;
  // v <- B^-T v
  void Btran(Eigen::VectorXd& v) const;
  // Records the pivot that replaced column `row` given w = B^-1 a_q.
  void Update(int row, const Eigen::VectorXd& w);
  int num_updates() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int row;
    double pivot;
    std::vector<std::pair<int, double>> entries;  // i != row
  };
  int m_ = 0;
  bool identity_ = false;  // B0 = -I
  using Lu = Eigen::SparseLU<Eigen::SparseMatrix<double>,
                             Eigen::COLAMDOrdering<int>>;
  mutable Lu lu_;
  // B0 transposed, factored on its own: the transposed supernodal solve of
  // Eigen 3.4 can fail on some patterns.
  mutable Lu lu_t_;
  std::vector<Eta> etas_;
};

class Simplex {
 public:
  explicit Simplex(const MilpModel& model);

  int num_structural() const { return n_; }

  // Bounds on structural variables. Binaries keep their [0, 1] box unless a
  // caller tightens them.
  void SetBounds(int j, double lower, double upper);
  void ResetBounds();

  LpStatus Solve();
  // Warm start. Falls back to a cold start when the basis is unusable.
  LpStatus SolveFrom(const Basis& basis);

  Basis CurrentBasis() const;
  // Maximization objective of the original model, offset included.
  double Objective() const;
  std::vector<double> StructuralValues() const;
  long iterations() const { return iterations_; }

 private:
  double ColumnDot(const double* v, int j) const;
  void Ftran(int j, Eigen::VectorXd& w) const;
  Eigen::VectorXd Btran(Eigen::VectorXd v) const;
  bool Refactor();
  void ComputePrimal();
  void ComputeDuals(const Eigen::VectorXd& basic_cost,
                    std::vector<double>& reduced) const;
  void Pivot(int row, int entering, const Eigen::VectorXd& w);
  void PlaceNonbasic(int j, double reduced);
  void SlackBasis();

  double PrimalInfeasibility(int j) const;
  bool PrimalFeasible() const;

  LpStatus RunPrimal();
  LpStatus RunDual();

  int n_ = 0;  // structural columns
  int m_ = 0;  // rows
  std::vector<int> col_start_;
  std::vector<int> col_row_;
  std::vector<double> col_val_;
  std::vector<double> cost_;  // minimization cost, length n_ + m_
  std::vector<double> lower_, upper_;
  std::vector<double> model_lower_, model_upper_;
  double offset_ = 0.0;

  std::vector<int> head_;
  std::vector<VarState> state_;
  std::vector<double> x_;
  BasisFactor factor_;
  int since_refactor_ = 0;
  long iterations_ = 0;
};

}  // namespace rmp::detail

#endif  // RMP_SRC_LINPROG_SIMPLEX_HPP_
