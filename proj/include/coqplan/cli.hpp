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

// Command-line front end.
//
//   coqplan validate <instance>
//   coqplan coq <instance> [--ingredient ID] [--period N] [--format table|csv]
//   coqplan solve <instance> [--time-limit SEC] [--jobs N] [--format table|csv]
//                            [--export-mps PATH] [--stats]
//   coqplan eval <instance> <plan.csv> [--format table|csv]
//   coqplan sensitivity <instance> [--scenario FILE]... [--jobs N] [--time-limit SEC] [--format table|csv]
//   coqplan export <instance> --model coq|baseline --out PATH [--metadata PATH]
//   coqplan bench [--seed N] [--case IxLxT]... [--jobs N] [--time-limit SEC] [--out PATH] [--format table|csv]
//
// Exit codes: 0 success, 1 usage/I/O/syntax error, 2 time limit reached
// (incumbent reported), 3 infeasible instance, 4 validation failure.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "coqplan/costmodel.hpp"
#include "coqplan/instance.hpp"

namespace coqplan {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitTimeLimit = 2,
  kExitInfeasible = 3,
  kExitInvalid = 4,
};

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Plan CSV: "ingredient,period,quantity[,inventory]" with 1-based periods.
// A header row and '#' comment lines are skipped; missing cells are zero.
ProcurementPlan parse_plan_csv(const ProblemInstance& instance, std::istream& in);

}  // namespace coqplan
