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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rmp/linprog.hpp"

namespace rmp {

int MilpModel::AddVariable(std::string name, VarKind kind, double lower,
                           double upper) {
  if (kind == VarKind::kBinary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  vars_.push_back({std::move(name), kind, lower, upper});
  obj_.push_back(0.0);
  return num_vars() - 1;
}

int MilpModel::AddConstraint(std::string name, std::vector<Term> terms,
                             Relation relation, double rhs) {
  // Merge duplicate references so every row is a proper sparse vector.
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  rows_.push_back({std::move(name), std::move(merged), relation, rhs});
  return num_rows() - 1;
}

void MilpModel::SetObjective(int var, double coef) { obj_.at(var) = coef; }

void MilpModel::AddToObjective(int var, double coef) { obj_.at(var) += coef; }

void MilpModel::SetBounds(int var, double lower, double upper) {
  vars_.at(var).lower = lower;
  vars_.at(var).upper = upper;
}

long MilpModel::num_nonzeros() const {
  long nnz = 0;
  for (const Constraint& c : rows_) nnz += static_cast<long>(c.terms.size());
  return nnz;
}

int MilpModel::num_binaries() const {
  return static_cast<int>(std::count_if(
      vars_.begin(), vars_.end(),
      [](const Variable& v) { return v.kind == VarKind::kBinary; }));
}

void MilpModel::Validate() const {
  for (int j = 0; j < num_vars(); ++j) {
    const Variable& v = vars_[j];
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      throw std::invalid_argument("variable '" + v.name + "' has bad bounds");
    }
    if (v.kind == VarKind::kBinary && (v.lower < 0.0 || v.upper > 1.0)) {
      throw std::invalid_argument("binary '" + v.name + "' outside [0,1]");
    }
    if (!std::isfinite(obj_[j])) {
      throw std::invalid_argument("non-finite objective on '" + v.name + "'");
    }
  }
  for (const Constraint& c : rows_) {
    if (!std::isfinite(c.rhs)) {
      throw std::invalid_argument("row '" + c.name + "' has non-finite rhs");
    }
    for (const Term& t : c.terms) {
      if (t.var < 0 || t.var >= num_vars()) {
        throw std::invalid_argument("row '" + c.name +
                                    "' references an undeclared variable");
      }
      if (!std::isfinite(t.coef)) {
        throw std::invalid_argument("row '" + c.name +
                                    "' has a non-finite coefficient");
      }
    }
  }
}

double MilpModel::Evaluate(const std::vector<double>& values) const {
  double z = offset_;
  for (int j = 0; j < num_vars(); ++j) z += obj_[j] * values[j];
  return z;
}

double MilpModel::MaxViolation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (int j = 0; j < num_vars(); ++j) {
    worst = std::max(worst, vars_[j].lower - values[j]);
    worst = std::max(worst, values[j] - vars_[j].upper);
  }
  for (const Constraint& c : rows_) {
    double lhs = 0.0;
    for (const Term& t : c.terms) lhs += t.coef * values[t.var];
    switch (c.relation) {
      case Relation::kLessEqual:
        worst = std::max(worst, lhs - c.rhs);
        break;
      case Relation::kGreaterEqual:
        worst = std::max(worst, c.rhs - lhs);
        break;
      case Relation::kEqual:
        worst = std::max(worst, std::fabs(lhs - c.rhs));
        break;
    }
  }
  return worst;
}

int MilpModel::FindVariable(const std::string& name) const {
  for (int j = 0; j < num_vars(); ++j) {
    if (vars_[j].name == name) return j;
  }
  return -1;
}

const char* ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "Optimal";
    case SolveStatus::kInfeasible:
      return "Infeasible";
    case SolveStatus::kUnbounded:
      return "Unbounded";
    case SolveStatus::kGapLimit:
      return "GapLimit";
  }
  return "Unknown";
}

namespace {

std::string Sanitize(const std::string& raw) {
  std::string s;
  s.reserve(raw.size() + 1);
  for (char ch : raw) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) ||
                    ch == '_' || ch == '.';
    s.push_back(ok ? ch : '_');
  }
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])) ||
      s[0] == '.') {
    s.insert(s.begin(), 'v');
  }
  return s;
}

std::string Num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Appends " + 3 x - 2 y" style text, wrapping long lines.
void AppendLinear(std::ostringstream& os, const std::vector<Term>& terms,
                  const std::vector<std::string>& names) {
  int on_line = 0;
  bool first = true;
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    os << (t.coef < 0 ? (first ? "-" : " -") : (first ? "" : " +"));
    os << ' ' << Num(std::fabs(t.coef)) << ' ' << names[t.var];
    first = false;
    if (++on_line == 8) {
      os << "\n   ";
      on_line = 0;
    }
  }
  if (first) os << " 0 " << (names.empty() ? "dummy" : names[0]);
}

}  // namespace

std::string ToLpFormat(const MilpModel& model,
                       const std::string& problem_name) {
  std::vector<std::string> names;
  names.reserve(model.num_vars());
  std::unordered_set<std::string> seen;
  for (int j = 0; j < model.num_vars(); ++j) {
    std::string n = Sanitize(model.var(j).name);
    if (!seen.insert(n).second) {
      n += "_" + std::to_string(j);
      seen.insert(n);
    }
    names.push_back(std::move(n));
  }

  std::ostringstream os;
  os << "\\ Problem: " << problem_name << "\n";
  if (model.objective_offset() != 0.0) {
    os << "\\ Objective offset: " << Num(model.objective_offset()) << "\n";
  }
  os << "Maximize\n obj:";
  std::vector<Term> obj;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.objective()[j] != 0.0) obj.push_back({j, model.objective()[j]});
  }
  AppendLinear(os, obj, names);
  os << "\nSubject To\n";
  for (int i = 0; i < model.num_rows(); ++i) {
    const Constraint& c = model.row(i);
    os << ' ' << Sanitize(c.name.empty() ? "r" + std::to_string(i) : c.name)
       << ':';
    AppendLinear(os, c.terms, names);
    switch (c.relation) {
      case Relation::kLessEqual:
        os << " <= ";
        break;
      case Relation::kEqual:
        os << " = ";
        break;
      case Relation::kGreaterEqual:
        os << " >= ";
        break;
    }
    os << Num(c.rhs) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const Variable& v = model.var(j);
    if (v.kind == VarKind::kBinary && v.lower == 0.0 && v.upper == 1.0) {
      continue;
    }
    if (v.lower == v.upper) {
      os << ' ' << names[j] << " = " << Num(v.lower) << "\n";
    } else if (v.lower == -kInf && v.upper == kInf) {
      os << ' ' << names[j] << " free\n";
    } else if (v.lower == 0.0 && v.upper == kInf) {
      continue;  // LP-format default
    } else {
      os << ' ' << (v.lower == -kInf ? "-inf" : Num(v.lower)) << " <= "
         << names[j] << " <= " << (v.upper == kInf ? "+inf" : Num(v.upper))
         << "\n";
    }
  }
  bool any_binary = false;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.var(j).kind != VarKind::kBinary) continue;
    if (!any_binary) os << "Binaries\n";
    any_binary = true;
    os << ' ' << names[j] << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace rmp
