// Copyright 2026 The pslsched Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pslsched/ilp_model.hpp"

#include <charconv>
#include <cmath>

#include "pslsched/instance.hpp"

namespace pslsched {

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const char* relation_text(Relation r) {
  switch (r) {
    case Relation::le:
      return "<=";
    case Relation::eq:
      return "=";
    case Relation::ge:
      return ">=";
  }
  return "?";
}

}  // namespace

int IlpModel::add_variable(IlpVariable v) {
  const int col = static_cast<int>(vars_.size());
  if (!index_.emplace(v.name, col).second) {
    throw Error("duplicate variable name: " + v.name);
  }
  vars_.push_back(std::move(v));
  objective_.push_back(0.0);
  return col;
}

int IlpModel::add_binary(std::string name, int priority) {
  return add_variable(
      IlpVariable{std::move(name), VarKind::binary, 0.0, 1.0, priority});
}

int IlpModel::add_integer(std::string name, double lower, double upper,
                          int priority) {
  return add_variable(
      IlpVariable{std::move(name), VarKind::integer, lower, upper, priority});
}

int IlpModel::add_constraint(std::string name, std::vector<IlpTerm> terms,
                             Relation relation, double rhs) {
  for (const IlpTerm& t : terms) {
    if (t.var < 0 || t.var >= num_variables()) {
      throw Error("constraint " + name + " references undeclared column");
    }
  }
  rows_.push_back(IlpConstraint{std::move(name), std::move(terms), relation,
                                rhs});
  return static_cast<int>(rows_.size()) - 1;
}

void IlpModel::add_term(int row, int var, double coeff) {
  if (row < 0 || row >= num_constraints()) throw Error("row out of range");
  if (var < 0 || var >= num_variables()) {
    throw Error("term references undeclared column");
  }
  rows_[static_cast<size_t>(row)].terms.push_back({var, coeff});
}

void IlpModel::add_objective(int var, double coeff) {
  if (var < 0 || var >= num_variables()) {
    throw Error("objective references undeclared column");
  }
  objective_[static_cast<size_t>(var)] += coeff;
}

const IlpVariable& IlpModel::variable(int col) const {
  if (col < 0 || col >= num_variables()) throw Error("column out of range");
  return vars_[static_cast<size_t>(col)];
}

int IlpModel::column(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? -1 : it->second;
}

void IlpModel::fix(int col, double value) { set_bounds(col, value, value); }

void IlpModel::set_bounds(int col, double lower, double upper) {
  variable(col);
  vars_[static_cast<size_t>(col)].lower = lower;
  vars_[static_cast<size_t>(col)].upper = upper;
}

void IlpModel::set_priority(int col, int priority) {
  variable(col);
  vars_[static_cast<size_t>(col)].priority = priority;
}

double IlpModel::objective_value(std::span<const double> values) const {
  double v = offset_;
  for (size_t k = 0; k < objective_.size(); ++k) {
    if (objective_[k] != 0.0) v += objective_[k] * values[k];
  }
  return v;
}

std::vector<std::string> IlpModel::violations(std::span<const double> values,
                                              double tolerance) const {
  std::vector<std::string> out;
  if (values.size() != vars_.size()) {
    out.push_back("value vector size mismatch");
    return out;
  }
  for (size_t k = 0; k < vars_.size(); ++k) {
    const double v = values[k];
    if (v < vars_[k].lower - tolerance || v > vars_[k].upper + tolerance) {
      out.push_back("bound " + vars_[k].name);
    }
    if (std::abs(v - std::round(v)) > tolerance) {
      out.push_back("integrality " + vars_[k].name);
    }
  }
  for (const IlpConstraint& row : rows_) {
    double lhs = 0.0;
    for (const IlpTerm& t : row.terms) {
      lhs += t.coeff * values[static_cast<size_t>(t.var)];
    }
    const bool ok = row.relation == Relation::le   ? lhs <= row.rhs + tolerance
                    : row.relation == Relation::ge ? lhs >= row.rhs - tolerance
                                                   : std::abs(lhs - row.rhs) <=
                                                         tolerance;
    if (!ok) out.push_back("row " + row.name);
  }
  return out;
}

void IlpModel::check_well_formed() const {
  for (const IlpVariable& v : vars_) {
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper)) {
      throw Error("variable " + v.name + " has a non-finite bound");
    }
    if (v.lower > v.upper) {
      throw Error("variable " + v.name + " has inverted bounds");
    }
    if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0)) {
      throw Error("binary " + v.name + " has bounds outside [0, 1]");
    }
  }
  for (const IlpConstraint& row : rows_) {
    for (const IlpTerm& t : row.terms) {
      if (t.var < 0 || t.var >= num_variables()) {
        throw Error("constraint " + row.name + " references undeclared column");
      }
      if (!std::isfinite(t.coeff)) {
        throw Error("constraint " + row.name + " has a non-finite coefficient");
      }
    }
    if (!std::isfinite(row.rhs)) {
      throw Error("constraint " + row.name + " has a non-finite rhs");
    }
  }
}

std::string IlpModel::to_lp_format() const {
  std::string out;
  out += "\\ objective offset: " + num(offset_) + "\n";
  out += "Minimize\n obj:";
  bool any = false;
  for (size_t k = 0; k < objective_.size(); ++k) {
    if (objective_[k] == 0.0) continue;
    out += (objective_[k] < 0 ? " - " : " + ") + num(std::abs(objective_[k])) +
           " " + vars_[k].name;
    any = true;
  }
  if (!any) out += " 0";
  out += "\nSubject To\n";
  for (size_t r = 0; r < rows_.size(); ++r) {
    const IlpConstraint& row = rows_[r];
    out += " " + (row.name.empty() ? "c" + std::to_string(r) : row.name) + ":";
    if (row.terms.empty()) out += " 0";
    for (const IlpTerm& t : row.terms) {
      out += (t.coeff < 0 ? " - " : " + ") + num(std::abs(t.coeff)) + " " +
             vars_[static_cast<size_t>(t.var)].name;
    }
    out += std::string(" ") + relation_text(row.relation) + " " +
           num(row.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const IlpVariable& v : vars_) {
    out += " " + num(v.lower) + " <= " + v.name + " <= " + num(v.upper) + "\n";
  }
  std::string generals;
  std::string binaries;
  for (const IlpVariable& v : vars_) {
    (v.kind == VarKind::binary ? binaries : generals) += " " + v.name + "\n";
  }
  if (!generals.empty()) out += "General\n" + generals;
  if (!binaries.empty()) out += "Binary\n" + binaries;
  out += "End\n";
  return out;
}

}  // namespace pslsched
