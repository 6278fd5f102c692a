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

#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pslsched {

enum class VarKind { binary, integer };
enum class Relation { le, eq, ge };

struct IlpVariable {
  std::string name;
  VarKind kind = VarKind::binary;
  double lower = 0.0;
  double upper = 1.0;
  // Larger priorities are branched on first.
  int priority = 0;
};

struct IlpTerm {
  int var = 0;
  double coeff = 0.0;
};

struct IlpConstraint {
  std::string name;
  std::vector<IlpTerm> terms;
  Relation relation = Relation::le;
  double rhs = 0.0;
};

/// Lower bound on the objective (offset included) valid for every integer
/// point inside the given variable bounds; -infinity when nothing is known,
/// +infinity when no integer point exists.
using LowerBoundHook = std::function<double(std::span<const double> lower,
                                            std::span<const double> upper)>;

/// A pure integer linear program, minimized. Columns are numbered in
/// insertion order; names are unique, so name <-> column is a bijection.
class IlpModel {
 public:
  int add_binary(std::string name, int priority = 0);
  int add_integer(std::string name, double lower, double upper,
                  int priority = 0);
  int add_constraint(std::string name, std::vector<IlpTerm> terms,
                     Relation relation, double rhs);

  /// Appends a term to an existing row.
  void add_term(int row, int var, double coeff);

  /// Adds to the objective coefficient of `var`.
  void add_objective(int var, double coeff);
  void add_objective_offset(double value) { offset_ += value; }

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  const std::vector<IlpVariable>& variables() const { return vars_; }
  const IlpVariable& variable(int col) const;
  const std::vector<IlpConstraint>& constraints() const { return rows_; }
  const std::vector<double>& objective() const { return objective_; }
  double objective_offset() const { return offset_; }

  /// Column of a name, or -1.
  int column(std::string_view name) const;
  const std::string& name(int col) const { return variable(col).name; }

  /// Narrows the bounds of a column to a single value.
  void fix(int col, double value);
  void set_bounds(int col, double lower, double upper);
  void set_priority(int col, int priority);

  double objective_value(std::span<const double> values) const;

  /// Names of violated bounds/rows/integrality at `values`; empty if feasible.
  std::vector<std::string> violations(std::span<const double> values,
                                      double tolerance = 1e-6) const;

  /// Throws Error when a term references an undeclared column, a binary
  /// has bounds outside [0, 1], or bounds are inverted or non-finite.
  void check_well_formed() const;

  /// CPLEX LP text in column insertion order; the offset appears as a
  /// comment. Doubles use shortest round-trip formatting.
  std::string to_lp_format() const;

  LowerBoundHook lower_bound_hook;

 private:
  int add_variable(IlpVariable v);

  std::vector<IlpVariable> vars_;
  std::vector<IlpConstraint> rows_;
  std::vector<double> objective_;
  double offset_ = 0.0;
  std::unordered_map<std::string, int> index_;
};

}  // namespace pslsched
