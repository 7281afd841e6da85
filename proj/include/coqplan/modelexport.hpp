// Copyright 2026 The coqplan Authors
//
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

// MILP models for external solvers.
//
// Two formulations are built with exact rational coefficients:
//
//   COQ model: one binary x_{j,t,k} per catalog entry (k = 0 is "no order"),
//   exactly one selected per cell, q_{j,t} = sum_k q_k x_{j,t,k} and
//   q_{j,t} <= u_j y_t.
//
//   Baseline model: all-units discounts linearized with per-level quantity
//   variables v_{j,t,n} and level indicators z_{j,t,n}:
//     l_n z <= v <= U_n z,  U_n = l_{n+1} (top level: u_j),
//     sum_n z_{j,t,n} <= y_t,  q_{j,t} = sum_n v_{j,t,n}.
//
// Both share the inventory balance rows and the holding cost, whose
// half-demand part is a constant in the objective.
//
// Variable names use 1-based ingredient/period positions, e.g. x_2_3_0 is
// the "no order" entry of the second ingredient in period 3. The metadata
// CSV maps names back to ingredient ids.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coqplan/coqgen.hpp"
#include "coqplan/costmodel.hpp"
#include "coqplan/instance.hpp"
#include "coqplan/rational.hpp"

namespace coqplan {

enum class VariableKind { kBinary, kContinuous };
enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct MilpVariable {
  std::string name;
  VariableKind kind = VariableKind::kContinuous;
  Rational lower = 0;
  std::optional<Rational> upper;  // none = +infinity

  // Metadata.
  std::string symbol;  // x, y, q, I, z or v
  std::optional<std::size_t> ingredient;
  std::optional<std::size_t> period;
  std::optional<std::size_t> index;     // catalog entry k or discount level n (zero-based)
  std::optional<Quantity> quantity;     // catalog value q_k for x variables
};

struct LinearTerm {
  std::size_t variable = 0;
  Rational coefficient;
};

struct MilpConstraint {
  std::string name;
  std::vector<LinearTerm> terms;
  RowSense sense = RowSense::kEqual;
  Rational rhs = 0;
};

class MilpModel {
 public:
  explicit MilpModel(std::string name = "model") : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  std::size_t add_variable(MilpVariable variable);
  void add_constraint(MilpConstraint constraint);
  void add_objective(std::size_t variable, const Rational& coefficient);
  void add_objective_constant(const Rational& value) { objective_constant_ += value; }

  const std::vector<MilpVariable>& variables() const { return variables_; }
  const std::vector<MilpConstraint>& constraints() const { return constraints_; }
  const std::vector<LinearTerm>& objective() const { return objective_; }
  const Rational& objective_constant() const { return objective_constant_; }

  // Index of a variable by name; npos when absent.
  std::size_t find(const std::string& name) const;
  std::size_t count(VariableKind kind) const;
  std::size_t count_symbol(const std::string& symbol) const;

  // Ingredient ids, for metadata output.
  std::vector<std::string> ingredient_ids;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::string name_;
  std::vector<MilpVariable> variables_;
  std::vector<MilpConstraint> constraints_;
  std::vector<LinearTerm> objective_;
  Rational objective_constant_ = 0;
  std::map<std::string, std::size_t> by_name_;
};

MilpModel emit_coq_milp(const ProblemInstance& instance, const CoqCatalog& catalog);
MilpModel emit_baseline_milp(const ProblemInstance& instance);

using Assignment = std::map<std::string, Rational>;

class MissingVariable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SolutionCheck {
  bool satisfied = true;
  Money objective = 0;
  std::vector<std::string> violations;  // one line per violated row or bound
};

// Exact substitution. Throws MissingVariable when a model variable has no
// value; names not in the model are ignored.
SolutionCheck check_solution(const MilpModel& model, const Assignment& assignment);

// Variable values that encode `plan` in the respective model. The COQ
// version throws std::invalid_argument when an order is not a catalog entry.
Assignment coq_assignment(const ProblemInstance& instance, const CoqCatalog& catalog, const ProcurementPlan& plan);
Assignment baseline_assignment(const ProblemInstance& instance, const ProcurementPlan& plan);

// Free-format MPS. Returns warnings for values that had to be rounded to
// 12 significant digits (non-terminating decimals).
std::vector<std::string> write_mps(const MilpModel& model, std::ostream& out);

// name,kind,symbol,ingredient,period,index,quantity (1-based positions).
void write_metadata_csv(const MilpModel& model, std::ostream& out);

// Reads "name=value" (or "name value") lines; '#' starts a comment.
Assignment parse_assignment(std::istream& in);

}  // namespace coqplan
