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

#include "coqplan/modelexport.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace coqplan {
namespace {

std::string cell(const char* symbol, std::size_t j, std::size_t t) {
  return std::string(symbol) + "_" + std::to_string(j + 1) + "_" + std::to_string(t + 1);
}

std::string cell(const char* symbol, std::size_t j, std::size_t t, std::size_t k) {
  return cell(symbol, j, t) + "_" + std::to_string(k);
}

MilpVariable continuous(std::string name, const char* symbol, std::size_t j, std::size_t t,
                        std::optional<Rational> upper = std::nullopt) {
  MilpVariable v;
  v.name = std::move(name);
  v.kind = VariableKind::kContinuous;
  v.upper = std::move(upper);
  v.symbol = symbol;
  v.ingredient = j;
  v.period = t;
  return v;
}

MilpVariable binary(std::string name, const char* symbol) {
  MilpVariable v;
  v.name = std::move(name);
  v.kind = VariableKind::kBinary;
  v.upper = Rational(1);
  v.symbol = symbol;
  return v;
}

struct CommonIndex {
  std::vector<std::size_t> y;                // per period
  std::vector<std::vector<std::size_t>> q;   // [j][t]
  std::vector<std::vector<std::size_t>> inv; // [j][t]
};

// y, q and I variables, balance rows and the holding/ordering objective.
CommonIndex add_common(const ProblemInstance& instance, MilpModel& model) {
  const std::size_t J = instance.num_ingredients();
  const std::size_t T = instance.periods();
  CommonIndex ix;
  for (const auto& ing : instance.ingredients) model.ingredient_ids.push_back(ing.id);
  for (std::size_t t = 0; t < T; ++t) {
    auto v = binary("y_" + std::to_string(t + 1), "y");
    v.period = t;
    ix.y.push_back(model.add_variable(std::move(v)));
    model.add_objective(ix.y.back(), instance.ordering_cost);
  }
  ix.q.assign(J, {});
  ix.inv.assign(J, {});
  for (std::size_t j = 0; j < J; ++j) {
    const auto& ing = instance.ingredients[j];
    for (std::size_t t = 0; t < T; ++t) {
      ix.q[j].push_back(model.add_variable(continuous(cell("q", j, t), "q", j, t, ing.capacity)));
      ix.inv[j].push_back(model.add_variable(continuous(cell("I", j, t), "I", j, t)));
      model.add_objective(ix.inv[j].back(), ing.holding_cost);
      model.add_objective_constant(ing.holding_cost * instance.ingredient_demand(j, t) / 2);
    }
  }
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t t = 0; t < T; ++t) {
      MilpConstraint row;
      row.name = cell("bal", j, t);
      row.terms.push_back({ix.inv[j][t], 1});
      if (t > 0) row.terms.push_back({ix.inv[j][t - 1], -1});
      row.terms.push_back({ix.q[j][t], -1});
      row.sense = RowSense::kEqual;
      row.rhs = -instance.ingredient_demand(j, t);
      model.add_constraint(std::move(row));
    }
  }
  return ix;
}

const char* sense_text(RowSense s) {
  switch (s) {
    case RowSense::kLessEqual:
      return "<=";
    case RowSense::kGreaterEqual:
      return ">=";
    case RowSense::kEqual:
      break;
  }
  return "=";
}

class NumberWriter {
 public:
  std::string operator()(const Rational& value, const std::string& where) {
    if (is_terminating(value)) return format_exact(value);
    std::string text = format_significant(value, 12);
    warnings.push_back(where + ": " + format_exact(value) + " written as " + text);
    return text;
  }
  std::vector<std::string> warnings;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::size_t MilpModel::add_variable(MilpVariable variable) {
  if (by_name_.count(variable.name)) throw std::invalid_argument("duplicate variable " + variable.name);
  const std::size_t index = variables_.size();
  by_name_.emplace(variable.name, index);
  variables_.push_back(std::move(variable));
  return index;
}

void MilpModel::add_constraint(MilpConstraint constraint) { constraints_.push_back(std::move(constraint)); }

void MilpModel::add_objective(std::size_t variable, const Rational& coefficient) {
  objective_.push_back({variable, coefficient});
}

std::size_t MilpModel::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? npos : it->second;
}

std::size_t MilpModel::count(VariableKind kind) const {
  std::size_t n = 0;
  for (const auto& v : variables_) n += v.kind == kind;
  return n;
}

std::size_t MilpModel::count_symbol(const std::string& symbol) const {
  std::size_t n = 0;
  for (const auto& v : variables_) n += v.symbol == symbol;
  return n;
}

MilpModel emit_coq_milp(const ProblemInstance& instance, const CoqCatalog& catalog) {
  if (!catalog.built_from(instance)) throw std::invalid_argument("catalog was built from a different instance");
  MilpModel model("coq");
  const CommonIndex ix = add_common(instance, model);
  for (std::size_t j = 0; j < instance.num_ingredients(); ++j) {
    const auto& ing = instance.ingredients[j];
    for (std::size_t t = 0; t < instance.periods(); ++t) {
      const auto& set = catalog.at(j, t);
      MilpConstraint select{cell("sel", j, t), {}, RowSense::kEqual, 1};
      MilpConstraint define{cell("def", j, t), {{ix.q[j][t], 1}}, RowSense::kEqual, 0};
      for (std::size_t k = 0; k < set.size(); ++k) {
        auto v = binary(cell("x", j, t, k), "x");
        v.ingredient = j;
        v.period = t;
        v.index = k;
        v.quantity = set.quantity(k);
        const std::size_t x = model.add_variable(std::move(v));
        const Money cost = purchase_cost(ing, set.quantity(k));
        if (cost != 0) model.add_objective(x, cost);
        select.terms.push_back({x, 1});
        if (set.quantity(k) != 0) define.terms.push_back({x, -set.quantity(k)});
      }
      model.add_constraint(std::move(select));
      model.add_constraint(std::move(define));
      model.add_constraint({cell("link", j, t), {{ix.q[j][t], 1}, {ix.y[t], -ing.capacity}}, RowSense::kLessEqual, 0});
    }
  }
  return model;
}

MilpModel emit_baseline_milp(const ProblemInstance& instance) {
  MilpModel model("baseline");
  const CommonIndex ix = add_common(instance, model);
  for (std::size_t j = 0; j < instance.num_ingredients(); ++j) {
    const auto& ing = instance.ingredients[j];
    const std::size_t N = ing.levels.size();
    for (std::size_t t = 0; t < instance.periods(); ++t) {
      MilpConstraint qdef{cell("qdef", j, t), {{ix.q[j][t], 1}}, RowSense::kEqual, 0};
      MilpConstraint one{cell("one", j, t), {}, RowSense::kLessEqual, 0};
      for (std::size_t n = 0; n < N; ++n) {
        const Quantity upper = n + 1 < N ? ing.levels[n + 1].min_qty : ing.capacity;
        auto zv = binary(cell("z", j, t, n + 1), "z");
        zv.ingredient = j;
        zv.period = t;
        zv.index = n;
        const std::size_t z = model.add_variable(std::move(zv));
        auto vv = continuous(cell("v", j, t, n + 1), "v", j, t, upper);
        vv.index = n;
        const std::size_t v = model.add_variable(std::move(vv));
        model.add_objective(v, ing.levels[n].unit_price);
        qdef.terms.push_back({v, -1});
        one.terms.push_back({z, 1});
        model.add_constraint({cell("lo", j, t, n + 1), {{v, 1}, {z, -ing.levels[n].min_qty}}, RowSense::kGreaterEqual, 0});
        model.add_constraint({cell("up", j, t, n + 1), {{v, 1}, {z, -upper}}, RowSense::kLessEqual, 0});
      }
      one.terms.push_back({ix.y[t], -1});
      model.add_constraint(std::move(qdef));
      model.add_constraint(std::move(one));
    }
  }
  return model;
}

SolutionCheck check_solution(const MilpModel& model, const Assignment& assignment) {
  std::vector<Rational> value;
  value.reserve(model.variables().size());
  for (const auto& v : model.variables()) {
    auto it = assignment.find(v.name);
    if (it == assignment.end()) throw MissingVariable("no value for variable " + v.name);
    value.push_back(it->second);
  }

  SolutionCheck check;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const auto& v = model.variables()[i];
    const Rational& x = value[i];
    if (x < v.lower || (v.upper && x > *v.upper)) {
      check.violations.push_back("bound " + v.name + ": " + format_exact(x) + " outside [" + format_exact(v.lower) +
                                 ", " + (v.upper ? format_exact(*v.upper) : std::string("inf")) + "]");
    } else if (v.kind == VariableKind::kBinary && x != 0 && x != 1) {
      check.violations.push_back("integrality " + v.name + ": " + format_exact(x));
    }
  }
  for (const auto& row : model.constraints()) {
    Rational lhs = 0;
    for (const auto& term : row.terms) lhs += term.coefficient * value[term.variable];
    bool ok = true;
    switch (row.sense) {
      case RowSense::kLessEqual:
        ok = lhs <= row.rhs;
        break;
      case RowSense::kGreaterEqual:
        ok = lhs >= row.rhs;
        break;
      case RowSense::kEqual:
        ok = lhs == row.rhs;
        break;
    }
    if (!ok) {
      check.violations.push_back(row.name + ": " + format_exact(lhs) + " " + sense_text(row.sense) + " " +
                                 format_exact(row.rhs) + " fails");
    }
  }
  check.objective = model.objective_constant();
  for (const auto& term : model.objective()) check.objective += term.coefficient * value[term.variable];
  check.satisfied = check.violations.empty();
  return check;
}

namespace {

void assign_common(const ProblemInstance& instance, const ProcurementPlan& plan, Assignment& out) {
  const auto eval = evaluate_plan(instance, plan);
  for (std::size_t t = 0; t < instance.periods(); ++t) {
    out["y_" + std::to_string(t + 1)] = eval.trajectory.order_flags[t] ? 1 : 0;
  }
  for (std::size_t j = 0; j < instance.num_ingredients(); ++j) {
    for (std::size_t t = 0; t < instance.periods(); ++t) {
      out[cell("q", j, t)] = plan(j, t);
      out[cell("I", j, t)] = eval.trajectory.levels(j, t);
    }
  }
}

}  // namespace

Assignment coq_assignment(const ProblemInstance& instance, const CoqCatalog& catalog, const ProcurementPlan& plan) {
  Assignment out;
  assign_common(instance, plan, out);
  for (std::size_t j = 0; j < instance.num_ingredients(); ++j) {
    for (std::size_t t = 0; t < instance.periods(); ++t) {
      const auto& set = catalog.at(j, t);
      const std::size_t chosen = set.index_of(plan(j, t));
      if (chosen == CoqSet::npos) {
        throw std::invalid_argument("order " + format_exact(plan(j, t)) + " of " + instance.ingredients[j].id +
                                    " in period " + std::to_string(t + 1) + " is not a catalog entry");
      }
      for (std::size_t k = 0; k < set.size(); ++k) out[cell("x", j, t, k)] = k == chosen ? 1 : 0;
    }
  }
  return out;
}

Assignment baseline_assignment(const ProblemInstance& instance, const ProcurementPlan& plan) {
  Assignment out;
  assign_common(instance, plan, out);
  for (std::size_t j = 0; j < instance.num_ingredients(); ++j) {
    const auto& ing = instance.ingredients[j];
    for (std::size_t t = 0; t < instance.periods(); ++t) {
      std::optional<std::size_t> level;
      const Quantity& q = plan(j, t);
      if (q > 0 && q >= ing.min_order() && q <= ing.capacity) level = discount_level(ing, q);
      for (std::size_t n = 0; n < ing.levels.size(); ++n) {
        const bool on = level && *level == n;
        out[cell("z", j, t, n + 1)] = on ? 1 : 0;
        out[cell("v", j, t, n + 1)] = on ? q : Quantity(0);
      }
    }
  }
  return out;
}

std::vector<std::string> write_mps(const MilpModel& model, std::ostream& out) {
  NumberWriter num;
  const auto& vars = model.variables();
  const auto& rows = model.constraints();
  const std::string objective_row = "obj";

  // Column-wise view: (row index or objective, coefficient) per variable.
  constexpr std::size_t kObjective = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::pair<std::size_t, Rational>>> columns(vars.size());
  for (const auto& term : model.objective()) columns[term.variable].push_back({kObjective, term.coefficient});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& term : rows[r].terms) columns[term.variable].push_back({r, term.coefficient});
  }

  out << "NAME " << model.name() << "\n";
  out << "OBJSENSE\n    MIN\n";
  out << "ROWS\n";
  out << " N  " << objective_row << "\n";
  for (const auto& row : rows) {
    const char* s = row.sense == RowSense::kLessEqual ? "L" : row.sense == RowSense::kGreaterEqual ? "G" : "E";
    out << " " << s << "  " << row.name << "\n";
  }

  out << "COLUMNS\n";
  bool in_integer_block = false;
  int marker = 0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const bool integer = vars[i].kind == VariableKind::kBinary;
    if (integer != in_integer_block) {
      out << "    MARKER" << marker++ << "  'MARKER'  " << (integer ? "'INTORG'" : "'INTEND'") << "\n";
      in_integer_block = integer;
    }
    if (columns[i].empty()) {
      out << "    " << vars[i].name << "  " << objective_row << "  0\n";
      continue;
    }
    for (const auto& [r, coef] : columns[i]) {
      const std::string& row_name = r == kObjective ? objective_row : rows[r].name;
      if (coef == 0) continue;
      out << "    " << vars[i].name << "  " << row_name << "  " << num(coef, vars[i].name + "/" + row_name) << "\n";
    }
  }
  if (in_integer_block) out << "    MARKER" << marker++ << "  'MARKER'  'INTEND'\n";

  out << "RHS\n";
  if (model.objective_constant() != 0) {
    // Solvers read the objective-row RHS as the negated constant.
    out << "    RHS  " << objective_row << "  " << num(-model.objective_constant(), "objective constant") << "\n";
  }
  for (const auto& row : rows) {
    if (row.rhs != 0) out << "    RHS  " << row.name << "  " << num(row.rhs, row.name) << "\n";
  }

  out << "BOUNDS\n";
  for (const auto& v : vars) {
    if (v.kind == VariableKind::kBinary) {
      out << " BV BND  " << v.name << "\n";
      continue;
    }
    if (v.lower != 0) out << " LO BND  " << v.name << "  " << num(v.lower, v.name + " lower bound") << "\n";
    if (v.upper) out << " UP BND  " << v.name << "  " << num(*v.upper, v.name + " upper bound") << "\n";
  }
  out << "ENDATA\n";
  return num.warnings;
}

void write_metadata_csv(const MilpModel& model, std::ostream& out) {
  out << "name,kind,symbol,ingredient,period,index,quantity\n";
  for (const auto& v : model.variables()) {
    out << v.name << ',' << (v.kind == VariableKind::kBinary ? "binary" : "continuous") << ',' << v.symbol << ',';
    if (v.ingredient) {
      out << (*v.ingredient < model.ingredient_ids.size() ? model.ingredient_ids[*v.ingredient]
                                                           : std::to_string(*v.ingredient + 1));
    }
    out << ',';
    if (v.period) out << *v.period + 1;
    out << ',';
    if (v.index) out << (v.symbol == "x" ? *v.index : *v.index + 1);
    out << ',';
    if (v.quantity) out << format_exact(*v.quantity);
    out << '\n';
  }
}

Assignment parse_assignment(std::istream& in) {
  Assignment out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto sep = line.find('=');
    if (sep == std::string::npos) sep = line.find_first_of(" \t");
    if (sep == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(number) + ": expected name=value");
    }
    const std::string name = trim(line.substr(0, sep));
    const std::string text = trim(line.substr(sep + 1));
    try {
      out[name] = parse_rational(text);
    } catch (const RationalFormatError& e) {
      throw std::invalid_argument("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace coqplan
