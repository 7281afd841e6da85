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

#include "coqplan/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "coqplan/coqgen.hpp"
#include "coqplan/experiments.hpp"
#include "coqplan/modelexport.hpp"
#include "coqplan/solver.hpp"

namespace coqplan {
namespace {

class PlanFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// `align` holds 'l' or 'r' per column; columns past its end are right-aligned.
class TextTable {
 public:
  explicit TextTable(std::string align) : align_(std::move(align)) {}

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      if (width.size() < row.size()) width.resize(row.size(), 0);
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) line += "  ";
        const std::string pad(width[c] - row[c].size(), ' ');
        line += c < align_.size() && align_[c] == 'l' ? row[c] + pad : pad + row[c];
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << '\n';
    }
  }

 private:
  std::string align_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(cell);
  for (auto& s : cells) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }
  return cells;
}

std::string seconds_text(std::chrono::duration<double> d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", d.count());
  return buf;
}

void print_plan_table(const ProblemInstance& instance, const ProcurementPlan& plan,
                      const InventoryTrajectory& trajectory, std::ostream& out) {
  TextTable table("ll");
  std::vector<std::string> header{"Ingredient", "Metric"};
  for (std::size_t t = 0; t < instance.periods(); ++t) header.push_back("t" + std::to_string(t + 1));
  table.add(header);
  for (std::size_t j = 0; j < instance.num_ingredients(); ++j) {
    std::vector<std::string> q{instance.ingredients[j].id, "q"};
    std::vector<std::string> inv{"", "I"};
    for (std::size_t t = 0; t < instance.periods(); ++t) {
      q.push_back(format_exact(plan(j, t)));
      inv.push_back(format_exact(trajectory.levels(j, t)));
    }
    table.add(q);
    table.add(inv);
  }
  table.print(out);
}

void print_costs_table(const CostBreakdown& c, std::ostream& out) {
  TextTable table("l");
  table.add({"Purchasing cost", format_money(c.purchasing)});
  table.add({"Ordering cost", format_money(c.ordering)});
  table.add({"Holding cost", format_money(c.holding)});
  table.add({"Total cost", format_money(c.total)});
  table.print(out);
}

void print_plan_csv(const ProblemInstance& instance, const ProcurementPlan& plan,
                    const InventoryTrajectory& trajectory, std::ostream& out) {
  out << "ingredient,period,quantity,inventory\n";
  for (std::size_t j = 0; j < instance.num_ingredients(); ++j) {
    for (std::size_t t = 0; t < instance.periods(); ++t) {
      out << csv_field(instance.ingredients[j].id) << ',' << t + 1 << ',' << format_exact(plan(j, t)) << ','
          << format_exact(trajectory.levels(j, t)) << '\n';
    }
  }
}

void print_costs_csv(const CostBreakdown& c, std::ostream& out) {
  out << "# purchasing," << format_exact(c.purchasing) << '\n';
  out << "# ordering," << format_exact(c.ordering) << '\n';
  out << "# holding," << format_exact(c.holding) << '\n';
  out << "# total," << format_exact(c.total) << '\n';
}

void print_violations(const ProblemInstance& instance, const FeasibilityReport& report, std::ostream& out) {
  (void)instance;
  for (const auto& v : report.violations) out << "constraint " << v.constraint << ": " << v.detail << '\n';
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  body(file);
  if (!file) throw std::runtime_error("error writing '" + path + "'");
}

// Writes the model and its metadata; warnings go to `err`.
void export_model(const MilpModel& model, const std::string& path, const std::string& metadata_path,
                  std::ostream& err) {
  std::vector<std::string> warnings;
  write_file(path, [&](std::ostream& f) { warnings = write_mps(model, f); });
  write_file(metadata_path, [&](std::ostream& f) { write_metadata_csv(model, f); });
  if (!warnings.empty()) {
    err << "warning: " << warnings.size() << " non-terminating values written with 12 significant digits (first: "
        << warnings.front() << ")\n";
  }
}

std::string status_text(const SolveResult& r) {
  if (r.from_seed) return "seed plan";
  return r.proven_optimal ? "optimal" : "time limit (best plan found)";
}

SolveOptions make_options(double time_limit, unsigned jobs) {
  SolveOptions options;
  if (time_limit > 0) options.time_limit = std::chrono::duration<double>(time_limit);
  options.jobs = std::max(1u, jobs);
  return options;
}

struct Flags {
  std::string instance;
  std::string plan;
  std::string format = "table";
  std::string ingredient;
  std::size_t period = 0;
  double time_limit = 0;
  unsigned jobs = 1;
  std::string export_mps;
  bool stats = false;
  std::vector<std::string> scenarios;
  std::string model;
  std::string out;
  std::string metadata;
  std::uint64_t seed = 20261015;
  std::vector<std::string> cases;
};

int cmd_validate(const Flags& f, std::ostream& out) {
  try {
    const ProblemInstance inst = load_instance(f.instance);
    out << "valid: " << inst.num_ingredients() << " ingredients, " << inst.periods() << " periods\n";
    return kExitOk;
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) out << v << '\n';
    return kExitInvalid;
  }
}

int cmd_coq(const Flags& f, std::ostream& out) {
  const ProblemInstance inst = load_instance(f.instance);
  std::optional<std::size_t> only_j;
  if (!f.ingredient.empty()) {
    only_j = inst.find_ingredient(f.ingredient);
    if (!only_j) throw CLI::ValidationError("--ingredient", "unknown ingredient '" + f.ingredient + "'");
  }
  if (f.period > inst.periods()) {
    throw CLI::ValidationError("--period", "period must be between 1 and " + std::to_string(inst.periods()));
  }
  const CoqCatalog catalog = CoqCatalog::build(inst, f.jobs);
  const bool csv = f.format == "csv";
  TextTable table("lrrrll");
  if (csv) {
    out << "ingredient,period,index,quantity,tags,derivation\n";
  } else {
    table.add({"Ingredient", "Period", "k", "Quantity", "Tags", "Derivation"});
  }
  for (std::size_t j = 0; j < inst.num_ingredients(); ++j) {
    if (only_j && *only_j != j) continue;
    for (std::size_t t = 0; t < inst.periods(); ++t) {
      if (f.period && f.period != t + 1) continue;
      const auto& set = catalog.at(j, t);
      for (std::size_t k = 0; k < set.size(); ++k) {
        const auto& e = set.entries[k];
        if (csv) {
          out << csv_field(inst.ingredients[j].id) << ',' << t + 1 << ',' << k << ',' << format_exact(e.quantity)
              << ',' << e.provenance.tag_names() << ',' << csv_field(e.provenance.detail_text()) << '\n';
        } else {
          table.add({inst.ingredients[j].id, std::to_string(t + 1), std::to_string(k), format_exact(e.quantity),
                     e.provenance.tag_names(), e.provenance.detail_text()});
        }
      }
    }
  }
  if (!csv) table.print(out);
  return kExitOk;
}

int cmd_solve(const Flags& f, std::ostream& out, std::ostream& err) {
  const ProblemInstance inst = load_instance(f.instance);
  const SolveOptions options = make_options(f.time_limit, f.jobs);
  const CoqCatalog catalog = CoqCatalog::build(inst, options.jobs);
  const SolveResult r = solve(inst, catalog, options);
  if (f.format == "csv") {
    out << "# status," << status_text(r) << '\n';
    print_costs_csv(r.costs, out);
    if (f.stats) {
      out << "# subsets_examined," << r.stats.subsets_examined << '\n';
      out << "# subsets_pruned," << r.stats.subsets_pruned << '\n';
      out << "# memo_states," << r.stats.memo_states << '\n';
      out << "# elapsed_s," << seconds_text(r.stats.elapsed) << '\n';
    }
    print_plan_csv(inst, r.plan, r.trajectory, out);
  } else {
    print_plan_table(inst, r.plan, r.trajectory, out);
    out << '\n';
    print_costs_table(r.costs, out);
    out << "Status: " << status_text(r) << '\n';
    if (f.stats) {
      TextTable table("l");
      table.add({"Subsets examined", std::to_string(r.stats.subsets_examined)});
      table.add({"Subsets pruned", std::to_string(r.stats.subsets_pruned)});
      table.add({"Memo states", std::to_string(r.stats.memo_states)});
      table.add({"Elapsed (s)", seconds_text(r.stats.elapsed)});
      out << '\n';
      table.print(out);
    }
  }
  if (!f.export_mps.empty()) {
    export_model(emit_coq_milp(inst, catalog), f.export_mps,
                 f.metadata.empty() ? f.export_mps + ".meta.csv" : f.metadata, err);
  }
  return r.proven_optimal ? kExitOk : kExitTimeLimit;
}

int cmd_eval(const Flags& f, std::ostream& out) {
  const ProblemInstance inst = load_instance(f.instance);
  std::ifstream in(f.plan);
  if (!in) throw std::runtime_error("cannot open '" + f.plan + "'");
  const ProcurementPlan plan = parse_plan_csv(inst, in);
  const PlanEvaluation eval = evaluate_plan(inst, plan);
  if (f.format == "csv") {
    out << "# status," << (eval.feasibility.feasible ? "feasible" : "infeasible") << '\n';
    print_costs_csv(eval.costs, out);
    print_plan_csv(inst, plan, eval.trajectory, out);
  } else {
    print_plan_table(inst, plan, eval.trajectory, out);
    out << '\n';
    print_costs_table(eval.costs, out);
    out << "Status: " << (eval.feasibility.feasible ? "feasible" : "infeasible") << '\n';
  }
  print_violations(inst, eval.feasibility, out);
  return eval.feasibility.feasible ? kExitOk : kExitInvalid;
}

int cmd_sensitivity(const Flags& f, std::ostream& out) {
  const ProblemInstance inst = load_instance(f.instance);
  std::vector<Scenario> scenarios;
  if (f.scenarios.empty()) {
    scenarios = builtin_scenarios();
  } else {
    for (const auto& path : f.scenarios) scenarios.push_back(load_scenario(path));
  }
  const auto outcomes = sensitivity_suite(inst, make_options(f.time_limit, f.jobs), scenarios);
  bool all_optimal = true;
  if (f.format == "csv") {
    out << "scenario,ingredient,period,quantity,inventory,total\n";
  }
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    all_optimal = all_optimal && o.result.proven_optimal;
    if (f.format == "csv") {
      for (std::size_t j = 0; j < o.instance.num_ingredients(); ++j) {
        for (std::size_t t = 0; t < o.instance.periods(); ++t) {
          out << csv_field(o.name) << ',' << csv_field(o.instance.ingredients[j].id) << ',' << t + 1 << ','
              << format_exact(o.result.plan(j, t)) << ',' << format_exact(o.result.trajectory.levels(j, t)) << ','
              << format_exact(o.result.costs.total) << '\n';
        }
      }
      continue;
    }
    if (i) out << '\n';
    out << "Scenario: " << o.name << '\n';
    print_plan_table(o.instance, o.result.plan, o.result.trajectory, out);
    out << "Total cost: " << format_money(o.result.costs.total) << " (" << status_text(o.result) << ")\n";
  }
  return all_optimal ? kExitOk : kExitTimeLimit;
}

int cmd_export(const Flags& f, std::ostream& out, std::ostream& err) {
  const ProblemInstance inst = load_instance(f.instance);
  const MilpModel model =
      f.model == "baseline" ? emit_baseline_milp(inst) : emit_coq_milp(inst, CoqCatalog::build(inst, f.jobs));
  const std::string metadata = f.metadata.empty() ? f.out + ".meta.csv" : f.metadata;
  export_model(model, f.out, metadata, err);
  out << "wrote " << f.out << " (" << model.variables().size() << " variables, " << model.constraints().size()
      << " constraints) and " << metadata << '\n';
  return kExitOk;
}

BenchCase parse_case(const std::string& text, std::uint64_t seed) {
  BenchCase c;
  c.seed = seed;
  char x1 = 0, x2 = 0;
  std::istringstream in(text);
  if (!(in >> c.ingredients >> x1 >> c.levels >> x2 >> c.periods) || x1 != 'x' || x2 != 'x' || !in.eof() ||
      c.ingredients == 0 || c.levels == 0 || c.periods == 0) {
    throw CLI::ValidationError("--case", "expected INGREDIENTSxLEVELSxPERIODS, got '" + text + "'");
  }
  return c;
}

int cmd_bench(const Flags& f, std::ostream& out) {
  std::vector<BenchCase> grid;
  if (f.cases.empty()) {
    grid = scaling_grid(f.seed);
  } else {
    for (const auto& c : f.cases) grid.push_back(parse_case(c, f.seed));
  }
  const auto rows = run_benchmark(grid, make_options(f.time_limit, f.jobs));
  auto emit = [&](std::ostream& o) {
    if (f.format == "csv") {
      write_bench_csv(rows, o);
      return;
    }
    TextTable table("");
    table.add({"Case", "Ingredients", "Levels", "Periods", "Seed", "TC", "Elapsed (ms)", "Subsets", "Memo states"});
    std::ostringstream csv;
    write_bench_csv(rows, csv);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) table.add(split_csv_line(line));
    table.print(o);
  };
  if (f.out.empty()) {
    emit(out);
  } else {
    write_file(f.out, emit);
  }
  bool all_optimal = std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.proven_optimal; });
  return all_optimal ? kExitOk : kExitTimeLimit;
}

}  // namespace

ProcurementPlan parse_plan_csv(const ProblemInstance& instance, std::istream& in) {
  ProcurementPlan plan = empty_plan(instance);
  PeriodMatrix<char> seen(instance.num_ingredients(), instance.periods(), 0);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = "plan line " + std::to_string(number) + ": ";
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto cells = split_csv_line(line);
    if (cells[0] == "ingredient") continue;
    if (cells.size() < 3) throw PlanFormatError(where + "expected ingredient,period,quantity");
    auto j = instance.find_ingredient(cells[0]);
    if (!j) throw PlanFormatError(where + "unknown ingredient '" + cells[0] + "'");
    std::size_t period = 0;
    try {
      std::size_t used = 0;
      period = std::stoul(cells[1], &used);
      if (used != cells[1].size()) period = 0;
    } catch (const std::exception&) {
      period = 0;
    }
    if (period == 0 || period > instance.periods()) {
      throw PlanFormatError(where + "period '" + cells[1] + "' is not between 1 and " +
                            std::to_string(instance.periods()));
    }
    if (seen(*j, period - 1)) throw PlanFormatError(where + "duplicate entry for " + cells[0] + " period " + cells[1]);
    seen(*j, period - 1) = 1;
    try {
      plan(*j, period - 1) = parse_rational(cells[2]);
    } catch (const RationalFormatError& e) {
      throw PlanFormatError(where + e.what());
    }
  }
  return plan;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Procurement planning with critical order quantities", "coqplan"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Flags f;
  const std::vector<std::string> formats{"table", "csv"};

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember(formats));
  };
  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--time-limit", f.time_limit, "Time limit in seconds")->check(CLI::PositiveNumber);
    sub->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check an instance file");
  validate_cmd->add_option("instance", f.instance, "Instance JSON")->required();

  auto* coq_cmd = app.add_subcommand("coq", "List the critical order quantity catalog");
  coq_cmd->add_option("instance", f.instance, "Instance JSON")->required();
  coq_cmd->add_option("--ingredient", f.ingredient, "Only this ingredient id");
  coq_cmd->add_option("--period", f.period, "Only this period (1-based)")->check(CLI::PositiveNumber);
  add_format(coq_cmd);

  auto* solve_cmd = app.add_subcommand("solve", "Compute an optimal procurement plan");
  solve_cmd->add_option("instance", f.instance, "Instance JSON")->required();
  add_search(solve_cmd);
  add_format(solve_cmd);
  solve_cmd->add_option("--export-mps", f.export_mps, "Also write the COQ model as MPS");
  solve_cmd->add_option("--metadata", f.metadata, "Metadata CSV path (default: <mps>.meta.csv)");
  solve_cmd->add_flag("--stats", f.stats, "Print search statistics");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a plan file");
  eval_cmd->add_option("instance", f.instance, "Instance JSON")->required();
  eval_cmd->add_option("plan", f.plan, "Plan CSV")->required();
  add_format(eval_cmd);

  auto* sens_cmd = app.add_subcommand("sensitivity", "Solve the instance under parameter scenarios");
  sens_cmd->add_option("instance", f.instance, "Instance JSON")->required();
  sens_cmd->add_option("--scenario", f.scenarios, "Scenario JSON (default: built-in set)");
  add_search(sens_cmd);
  add_format(sens_cmd);

  auto* export_cmd = app.add_subcommand("export", "Write a MILP model as free-format MPS");
  export_cmd->add_option("instance", f.instance, "Instance JSON")->required();
  export_cmd->add_option("--model", f.model, "Model")->required()->check(CLI::IsMember({"coq", "baseline"}));
  export_cmd->add_option("--out", f.out, "MPS output path")->required();
  export_cmd->add_option("--metadata", f.metadata, "Metadata CSV path (default: <out>.meta.csv)");

  auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark grid");
  bench_cmd->add_option("--seed", f.seed, "Generator seed");
  bench_cmd->add_option("--case", f.cases, "Case as IxLxT (default: 16-case grid)");
  bench_cmd->add_option("--out", f.out, "Write the report here instead of stdout");
  add_search(bench_cmd);
  f.format = "table";
  bench_cmd->add_option("--format", f.format, "Output format (default csv)")->check(CLI::IsMember(formats));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  if (app.got_subcommand(bench_cmd) && bench_cmd->count("--format") == 0) f.format = "csv";

  try {
    if (app.got_subcommand(validate_cmd)) return cmd_validate(f, out);
    if (app.got_subcommand(coq_cmd)) return cmd_coq(f, out);
    if (app.got_subcommand(solve_cmd)) return cmd_solve(f, out, err);
    if (app.got_subcommand(eval_cmd)) return cmd_eval(f, out);
    if (app.got_subcommand(sens_cmd)) return cmd_sensitivity(f, out);
    if (app.got_subcommand(export_cmd)) return cmd_export(f, out, err);
    if (app.got_subcommand(bench_cmd)) return cmd_bench(f, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    const auto& v = e.violations();
    const bool solving = app.got_subcommand(solve_cmd) || app.got_subcommand(sens_cmd);
    if (solving && std::all_of(v.begin(), v.end(), [](const std::string& m) { return is_supply_shortfall(m); })) {
      err << "error: infeasible: " << v.front() << '\n';
      return kExitInfeasible;
    }
    err << "error: invalid instance\n";
    for (const auto& v : e.violations()) err << "  " << v << '\n';
    return kExitInvalid;
  } catch (const SemanticError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ParseError& e) {
    err << "error: " << f.instance << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const InfeasibleInstance& e) {
    err << "error: infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const TimeLimitExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitTimeLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace coqplan
