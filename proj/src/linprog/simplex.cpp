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

#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rmp::detail {
namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kTieTol = 1e-12;
constexpr int kRefactorEvery = 100;

double BoundTol(double bound) {
  return kPrimalTol * (1.0 + (std::isfinite(bound) ? std::fabs(bound) : 0.0));
}

}  // namespace

Simplex::Simplex(const MilpModel& model) {
  n_ = model.num_vars();
  std::vector<int> kept;
  for (int i = 0; i < model.num_rows(); ++i) {
    // An empty row only matters when it is violated by 0; keep those so the
    // phase-one pass reports infeasibility.
    const Constraint& c = model.row(i);
    if (!c.terms.empty()) {
      kept.push_back(i);
      continue;
    }
    const bool ok = (c.relation == Relation::kLessEqual && c.rhs >= 0) ||
                    (c.relation == Relation::kGreaterEqual && c.rhs <= 0) ||
                    (c.relation == Relation::kEqual && c.rhs == 0);
    if (!ok) kept.push_back(i);
  }
  m_ = static_cast<int>(kept.size());

  const int total = n_ + m_;
  lower_.assign(total, 0.0);
  upper_.assign(total, 0.0);
  cost_.assign(total, 0.0);
  for (int j = 0; j < n_; ++j) {
    lower_[j] = model.var(j).lower;
    upper_[j] = model.var(j).upper;
    cost_[j] = -model.objective()[j];
  }
  offset_ = model.objective_offset();

  // Row scaling by the largest magnitude keeps pivots comparable across the
  // flow rows (entries near 1) and the linking rows (entries near 1/X).
  std::vector<std::vector<std::pair<int, double>>> cols(n_);
  for (int r = 0; r < m_; ++r) {
    const Constraint& c = model.row(kept[r]);
    double scale = 0.0;
    for (const Term& t : c.terms) scale = std::max(scale, std::fabs(t.coef));
    scale = scale > 0.0 ? 1.0 / scale : 1.0;
    for (const Term& t : c.terms) cols[t.var].emplace_back(r, t.coef * scale);
    const double rhs = c.rhs * scale;
    const int s = n_ + r;
    switch (c.relation) {
      case Relation::kLessEqual:
        lower_[s] = -kInf;
        upper_[s] = rhs;
        break;
      case Relation::kGreaterEqual:
        lower_[s] = rhs;
        upper_[s] = kInf;
        break;
      case Relation::kEqual:
        lower_[s] = rhs;
        upper_[s] = rhs;
        break;
    }
  }
  col_start_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) {
    col_start_[j + 1] = col_start_[j] + static_cast<int>(cols[j].size());
    for (const auto& [r, v] : cols[j]) {
      col_row_.push_back(r);
      col_val_.push_back(v);
    }
  }
  model_lower_ = lower_;
  model_upper_ = upper_;
}

void Simplex::SetBounds(int j, double lower, double upper) {
  lower_[j] = lower;
  upper_[j] = upper;
}

void Simplex::ResetBounds() {
  lower_ = model_lower_;
  upper_ = model_upper_;
}

double Simplex::ColumnDot(const double* v, int j) const {
  if (j >= n_) return -v[j - n_];
  double s = 0.0;
  for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
    s += v[col_row_[k]] * col_val_[k];
  }
  return s;
}

bool BasisFactor::Factor(
    int m, const std::vector<std::vector<std::pair<int, double>>>& cols) {
  m_ = m;
  etas_.clear();
  identity_ = true;
  for (int r = 0; r < m && identity_; ++r) {
    identity_ = cols[r].size() == 1 && cols[r][0].first == r &&
                cols[r][0].second == -1.0;
  }
  if (identity_ || m == 0) return true;
  std::vector<Eigen::Triplet<double>> trip;
  for (int r = 0; r < m; ++r) {
    for (const auto& [i, v] : cols[r]) trip.emplace_back(i, r, v);
  }
  Eigen::SparseMatrix<double> b(m, m);
  b.setFromTriplets(trip.begin(), trip.end());
  b.makeCompressed();
  lu_.analyzePattern(b);
  lu_.factorize(b);
  if (lu_.info() != Eigen::Success) return false;
  const Eigen::SparseMatrix<double> bt = b.transpose();
  lu_t_.analyzePattern(bt);
  lu_t_.factorize(bt);
  if (lu_t_.info() != Eigen::Success) return false;
  // Reject numerically singular factorizations: tiny pivots blow up solves.
  const Eigen::VectorXd probe = Eigen::VectorXd::Ones(m);
  const Eigen::VectorXd x = lu_.solve(probe);
  if (!x.allFinite()) return false;
  const double resid = (b * x - probe).lpNorm<Eigen::Infinity>();
  return resid < 1e-6 * (1.0 + x.lpNorm<Eigen::Infinity>());
}

void BasisFactor::Ftran(Eigen::VectorXd& v) const {
  if (identity_) {
    v = -v;
  } else if (m_ > 0) {
    v = lu_.solve(v).eval();
  }
  for (const Eta& e : etas_) {
    const double t = v[e.row] / e.pivot;
    v[e.row] = t;
    if (t == 0.0) continue;
    for (const auto& [i, w] : e.entries) v[i] -= w * t;
  }
}

void BasisFactor::Btran(Eigen::VectorXd& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->row];
    for (const auto& [i, w] : it->entries) s -= w * v[i];
    v[it->row] = s / it->pivot;
  }
  if (identity_) {
    v = -v;
  } else if (m_ > 0) {
    v = lu_t_.solve(v).eval();
  }
}

void BasisFactor::Update(int row, const Eigen::VectorXd& w) {
  Eta e;
  e.row = row;
  e.pivot = w[row];
  for (int i = 0; i < w.size(); ++i) {
    if (i != row && std::fabs(w[i]) > 1e-14) e.entries.emplace_back(i, w[i]);
  }
  etas_.push_back(std::move(e));
}

void Simplex::Ftran(int j, Eigen::VectorXd& w) const {
  w.setZero(m_);
  if (j >= n_) {
    w[j - n_] = -1.0;
  } else {
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      w[col_row_[k]] = col_val_[k];
    }
  }
  factor_.Ftran(w);
}

Eigen::VectorXd Simplex::Btran(Eigen::VectorXd v) const {
  factor_.Btran(v);
  return v;
}

bool Simplex::Refactor() {
  since_refactor_ = 0;
  std::vector<std::vector<std::pair<int, double>>> cols(m_);
  for (int r = 0; r < m_; ++r) {
    const int j = head_[r];
    if (j >= n_) {
      cols[r].emplace_back(j - n_, -1.0);
    } else {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        cols[r].emplace_back(col_row_[k], col_val_[k]);
      }
    }
  }
  return factor_.Factor(m_, cols);
}

void Simplex::ComputePrimal() {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == VarState::kBasic || x_[j] == 0.0) continue;
    if (j >= n_) {
      r[j - n_] -= x_[j];
    } else {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        r[col_row_[k]] += col_val_[k] * x_[j];
      }
    }
  }
  factor_.Ftran(r);
  for (int i = 0; i < m_; ++i) x_[head_[i]] = -r[i];
}

void Simplex::ComputeDuals(const Eigen::VectorXd& basic_cost,
                           std::vector<double>& reduced) const {
  const Eigen::VectorXd y = Btran(basic_cost);
  reduced.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == VarState::kBasic) continue;
    reduced[j] = cost_[j] - ColumnDot(y.data(), j);
  }
}

void Simplex::PlaceNonbasic(int j, double reduced) {
  const bool lo = std::isfinite(lower_[j]);
  const bool hi = std::isfinite(upper_[j]);
  if (lo && (reduced >= 0.0 || !hi)) {
    state_[j] = VarState::kAtLower;
    x_[j] = lower_[j];
  } else if (hi) {
    state_[j] = VarState::kAtUpper;
    x_[j] = upper_[j];
  } else {
    state_[j] = VarState::kFree;
    x_[j] = 0.0;
  }
}

void Simplex::SlackBasis() {
  head_.resize(m_);
  state_.assign(n_ + m_, VarState::kAtLower);
  x_.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_; ++j) PlaceNonbasic(j, 0.0);
  for (int i = 0; i < m_; ++i) {
    head_[i] = n_ + i;
    state_[n_ + i] = VarState::kBasic;
  }
  Refactor();
  ComputePrimal();
}

void Simplex::Pivot(int row, int entering, const Eigen::VectorXd& w) {
  factor_.Update(row, w);
  head_[row] = entering;
  state_[entering] = VarState::kBasic;
  if (++since_refactor_ >= kRefactorEvery) {
    if (Refactor()) ComputePrimal();
  }
}

double Simplex::PrimalInfeasibility(int j) const {
  if (x_[j] < lower_[j] - BoundTol(lower_[j])) return lower_[j] - x_[j];
  if (x_[j] > upper_[j] + BoundTol(upper_[j])) return x_[j] - upper_[j];
  return 0.0;
}

bool Simplex::PrimalFeasible() const {
  for (int i = 0; i < m_; ++i) {
    if (PrimalInfeasibility(head_[i]) > 0.0) return false;
  }
  return true;
}

LpStatus Simplex::Solve() {
  SlackBasis();
  return RunPrimal();
}

LpStatus Simplex::SolveFrom(const Basis& basis) {
  if (static_cast<int>(basis.head.size()) != m_ ||
      static_cast<int>(basis.state.size()) != n_ + m_) {
    return Solve();
  }
  head_ = basis.head;
  state_ = basis.state;
  x_.assign(n_ + m_, 0.0);
  if (!Refactor()) return Solve();

  Eigen::VectorXd cb(m_);
  for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
  std::vector<double> d;
  ComputeDuals(cb, d);
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] != VarState::kBasic) PlaceNonbasic(j, d[j]);
  }
  ComputePrimal();

  bool dual_feasible = true;
  for (int j = 0; j < n_ + m_ && dual_feasible; ++j) {
    if (state_[j] == VarState::kBasic || lower_[j] == upper_[j]) continue;
    if ((state_[j] == VarState::kAtLower && d[j] < -kDualTol) ||
        (state_[j] == VarState::kAtUpper && d[j] > kDualTol) ||
        (state_[j] == VarState::kFree && std::fabs(d[j]) > kDualTol)) {
      dual_feasible = false;
    }
  }
  LpStatus status = dual_feasible ? RunDual() : RunPrimal();
  if (status == LpStatus::kIterationLimit) status = Solve();
  return status;
}

LpStatus Simplex::RunPrimal() {
  const long limit = 50L * (n_ + m_) + 5000;
  long degenerate = 0;
  bool bland = false;
  int verified = 0;
  Eigen::VectorXd cb(m_);
  Eigen::VectorXd w(m_);
  std::vector<double> d;
  std::vector<double> phase_cost;

  for (long it = 0; it < limit; ++it) {
    bool phase1 = false;
    for (int i = 0; i < m_; ++i) {
      const int b = head_[i];
      cb[i] = cost_[b];
      if (PrimalInfeasibility(b) > 0.0) phase1 = true;
    }
    if (phase1) {
      for (int i = 0; i < m_; ++i) {
        const int b = head_[i];
        const double viol = PrimalInfeasibility(b);
        cb[i] = viol == 0.0 ? 0.0 : (x_[b] < lower_[b] ? -1.0 : 1.0);
      }
      // Nonbasic costs are zero in the composite phase-one objective.
      const Eigen::VectorXd y = Btran(cb);
      d.assign(n_ + m_, 0.0);
      for (int j = 0; j < n_ + m_; ++j) {
        if (state_[j] != VarState::kBasic) d[j] = -ColumnDot(y.data(), j);
      }
    } else {
      ComputeDuals(cb, d);
    }

    int q = -1;
    double best = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] == VarState::kBasic || lower_[j] == upper_[j]) continue;
      const double dj = d[j];
      bool eligible = false;
      switch (state_[j]) {
        case VarState::kAtLower:
          eligible = dj < -kDualTol;
          break;
        case VarState::kAtUpper:
          eligible = dj > kDualTol;
          break;
        case VarState::kFree:
          eligible = std::fabs(dj) > kDualTol;
          break;
        case VarState::kBasic:
          break;
      }
      if (!eligible) continue;
      if (bland) {
        q = j;
        break;
      }
      if (std::fabs(dj) > best) {
        best = std::fabs(dj);
        q = j;
      }
    }

    if (q < 0) {
      // Confirm on a fresh factorization before declaring a verdict.
      if (verified < 2 && since_refactor_ > 0) {
        ++verified;
        if (Refactor()) ComputePrimal();
        continue;
      }
      return phase1 ? LpStatus::kInfeasible : LpStatus::kOptimal;
    }

    const double dir = d[q] < 0.0 ? 1.0 : -1.0;
    Ftran(q, w);

    double theta = kInf;
    int leave = -1;
    bool leave_to_lower = true;
    double leave_pivot = 0.0;
    if (std::isfinite(lower_[q]) && std::isfinite(upper_[q])) {
      theta = upper_[q] - lower_[q];
    }
    for (int i = 0; i < m_; ++i) {
      const double wi = w[i];
      if (std::fabs(wi) < kPivotTol) continue;
      const double rate = -dir * wi;
      const int b = head_[i];
      const double xb = x_[b];
      double lim;
      bool to_lower;
      if (phase1 && xb < lower_[b] - BoundTol(lower_[b])) {
        if (rate <= 0.0) continue;
        lim = (lower_[b] - xb) / rate;
        to_lower = true;
      } else if (phase1 && xb > upper_[b] + BoundTol(upper_[b])) {
        if (rate >= 0.0) continue;
        lim = (xb - upper_[b]) / -rate;
        to_lower = false;
      } else if (rate < 0.0 && std::isfinite(lower_[b])) {
        lim = std::max(0.0, xb - lower_[b]) / -rate;
        to_lower = true;
      } else if (rate > 0.0 && std::isfinite(upper_[b])) {
        lim = std::max(0.0, upper_[b] - xb) / rate;
        to_lower = false;
      } else {
        continue;
      }
      bool take = false;
      if (lim < theta - kTieTol) {
        take = true;
      } else if (lim <= theta + kTieTol && leave >= 0) {
        take = bland ? b < head_[leave] : std::fabs(wi) > leave_pivot;
      } else if (lim <= theta + kTieTol && leave < 0 && lim < theta) {
        take = true;
      }
      if (take) {
        theta = std::min(theta, lim);
        leave = i;
        leave_to_lower = to_lower;
        leave_pivot = std::fabs(wi);
      }
    }

    if (!std::isfinite(theta)) {
      return phase1 ? LpStatus::kIterationLimit : LpStatus::kUnbounded;
    }

    ++iterations_;
    x_[q] += dir * theta;
    for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * theta * w[i];
    if (leave < 0) {
      state_[q] = dir > 0 ? VarState::kAtUpper : VarState::kAtLower;
      x_[q] = dir > 0 ? upper_[q] : lower_[q];
    } else {
      const int b = head_[leave];
      state_[b] = leave_to_lower ? VarState::kAtLower : VarState::kAtUpper;
      x_[b] = leave_to_lower ? lower_[b] : upper_[b];
      Pivot(leave, q, w);
    }
    verified = 0;

    if (theta <= kTieTol) {
      if (++degenerate > 2L * (n_ + m_)) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
  }
  return LpStatus::kIterationLimit;
}

LpStatus Simplex::RunDual() {
  const long limit = 50L * (n_ + m_) + 5000;
  long degenerate = 0;
  bool bland = false;
  int verified = 0;
  Eigen::VectorXd cb(m_);
  Eigen::VectorXd w(m_);
  std::vector<double> d;
  std::vector<double> alpha(n_ + m_, 0.0);

  for (long it = 0; it < limit; ++it) {
    for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
    ComputeDuals(cb, d);
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] == VarState::kBasic || lower_[j] == upper_[j]) continue;
      if ((state_[j] == VarState::kAtLower && d[j] < -1e3 * kDualTol) ||
          (state_[j] == VarState::kAtUpper && d[j] > 1e3 * kDualTol) ||
          (state_[j] == VarState::kFree && std::fabs(d[j]) > 1e3 * kDualTol)) {
        return RunPrimal();
      }
    }

    int r = -1;
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double viol = PrimalInfeasibility(head_[i]);
      if (viol <= 0.0) continue;
      if (bland) {
        if (r < 0 || head_[i] < head_[r]) r = i;
      } else if (viol > worst) {
        worst = viol;
        r = i;
      }
    }
    if (r < 0) {
      if (verified < 2 && since_refactor_ > 0) {
        ++verified;
        if (Refactor()) ComputePrimal();
        continue;
      }
      // Reduced costs may have drifted; a primal pass cleans up if so.
      return RunPrimal();
    }

    const int b = head_[r];
    const bool below = x_[b] < lower_[b];
    const double target = below ? lower_[b] : upper_[b];
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(m_);
    unit[r] = 1.0;
    const Eigen::VectorXd rho = Btran(std::move(unit));

    int q = -1;
    double best_ratio = kInf;
    double best_alpha = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] == VarState::kBasic || lower_[j] == upper_[j]) continue;
      const double a = ColumnDot(rho.data(), j);
      if (std::fabs(a) < kPivotTol) continue;
      const bool can_up =
          state_[j] == VarState::kAtLower || state_[j] == VarState::kFree;
      const bool can_down =
          state_[j] == VarState::kAtUpper || state_[j] == VarState::kFree;
      // x_b moves by -a per unit increase of x_j.
      const bool ok = below ? ((can_up && a < 0) || (can_down && a > 0))
                            : ((can_up && a > 0) || (can_down && a < 0));
      if (!ok) continue;
      const double ratio = std::fabs(d[j]) / std::fabs(a);
      bool take = false;
      if (ratio < best_ratio - kTieTol) {
        take = true;
      } else if (ratio <= best_ratio + kTieTol) {
        take = bland ? (q < 0 || j < q) : std::fabs(a) > best_alpha;
      }
      if (take) {
        best_ratio = std::min(best_ratio, ratio);
        best_alpha = std::fabs(a);
        q = j;
      }
    }
    if (q < 0) return LpStatus::kInfeasible;

    Ftran(q, w);
    if (std::fabs(w[r]) < kPivotTol) {
      if (Refactor()) {
        ComputePrimal();
        continue;
      }
      return LpStatus::kIterationLimit;
    }
    ++iterations_;
    const double delta = (x_[b] - target) / w[r];
    x_[q] += delta;
    for (int i = 0; i < m_; ++i) x_[head_[i]] -= w[i] * delta;
    state_[b] = below ? VarState::kAtLower : VarState::kAtUpper;
    x_[b] = target;
    Pivot(r, q, w);
    verified = 0;

    if (best_ratio <= kTieTol) {
      if (++degenerate > 2L * (n_ + m_)) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
  }
  return LpStatus::kIterationLimit;
}

Basis Simplex::CurrentBasis() const { return {head_, state_}; }

double Simplex::Objective() const {
  double z = 0.0;
  for (int j = 0; j < n_; ++j) z -= cost_[j] * x_[j];
  return z + offset_;
}

std::vector<double> Simplex::StructuralValues() const {
  return {x_.begin(), x_.begin() + n_};
}

}  // namespace rmp::detail
