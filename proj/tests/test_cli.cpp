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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "coqplan/cli.hpp"
#include "test_support.hpp"

using namespace coqplan;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "coqplan_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kBase = testing::data_path("data/base.json");

}  // namespace

TEST_CASE("validate") {
  Run r = run_cli({"validate", kBase});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "valid: 2 ingredients, 6 periods\n");

  const fs::path bad = write_file("bad.json", R"({"ordering_cost": 1, "demands": [1],
    "ingredients": [{"id": "a", "alpha": 1, "holding_cost": 0, "capacity": 5,
      "levels": [{"min_qty": 1, "unit_price": 2}, {"min_qty": 3, "unit_price": 2}]}]})");
  r = run_cli({"validate", bad.string()});
  CHECK(r.code == kExitInvalid);
  CHECK((r.out + r.err).find("prices not strictly decreasing at level 2") != std::string::npos);

  const fs::path broken = write_file("broken.json", "{\"ordering_cost\": ,}");
  r = run_cli({"validate", broken.string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("line 1, column") != std::string::npos);

  CHECK(run_cli({"validate", "/nonexistent/x.json"}).code == kExitUsage);
}

TEST_CASE("usage errors") {
  CHECK(run_cli({}).code == kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == kExitUsage);
  CHECK(run_cli({"solve"}).code == kExitUsage);
  CHECK(run_cli({"solve", kBase, "--format", "xml"}).code == kExitUsage);
  CHECK(run_cli({"coq", kBase, "--ingredient", "zz"}).code == kExitUsage);
  CHECK(run_cli({"coq", kBase, "--period", "7"}).code == kExitUsage);
  CHECK(run_cli({"bench", "--case", "3x3"}).code == kExitUsage);
  CHECK(run_cli({"--help"}).code == kExitOk);
}

TEST_CASE("solve") {
  Run r = run_cli({"solve", kBase});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("Status: optimal") != std::string::npos);
  CHECK(r.out.find("117225") != std::string::npos);

  r = run_cli({"solve", kBase, "--format", "csv", "--stats", "--jobs", "2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("# status,optimal\n") != std::string::npos);
  CHECK(r.out.find("# total,117225\n") != std::string::npos);
  CHECK(r.out.find("# subsets_examined,") != std::string::npos);
  CHECK(r.out.find("ingredient,period,quantity,inventory\n") != std::string::npos);
  CHECK(r.out.find("j1,3,2589,1968\n") != std::string::npos);
  CHECK(r.out.find("j2,3,4255,3280\n") != std::string::npos);
}

TEST_CASE("solve writes MPS and metadata") {
  const fs::path mps = scratch("solve.mps");
  fs::remove(mps);
  fs::remove(mps.string() + ".meta.csv");
  const Run r = run_cli({"solve", kBase, "--export-mps", mps.string()});
  CHECK(r.code == kExitOk);
  CHECK(fs::exists(mps));
  CHECK(fs::exists(mps.string() + ".meta.csv"));
}

TEST_CASE("infeasible instance") {
  const fs::path p = write_file("infeasible.json", R"({"ordering_cost": 1, "demands": [10],
    "ingredients": [{"id": "a", "alpha": 1, "holding_cost": 0, "capacity": 5,
      "levels": [{"min_qty": 1, "unit_price": 2}]}]})");
  CHECK(run_cli({"solve", p.string()}).code == kExitInfeasible);
  CHECK(run_cli({"validate", p.string()}).code == kExitInvalid);

  const fs::path q = write_file("front.json", R"({"ordering_cost": 1, "demands": [10, 0],
    "ingredients": [{"id": "a", "alpha": 1, "holding_cost": 0, "capacity": 5,
      "levels": [{"min_qty": 1, "unit_price": 2}]}]})");
  CHECK(run_cli({"solve", q.string()}).code == kExitInfeasible);
}

TEST_CASE("coq listing") {
  Run r = run_cli({"coq", kBase, "--ingredient", "j2", "--period", "3", "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("ingredient,period,index,quantity,tags,derivation\n", 0) == 0);
  CHECK(r.out.find("j2,3,0,0,Zero,") != std::string::npos);
  CHECK(r.out.find(",4255,") != std::string::npos);
  CHECK(r.out.find("j1,") == std::string::npos);
  r = run_cli({"coq", kBase});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("Derivation") != std::string::npos);
}

TEST_CASE("eval") {
  const fs::path plan = write_file("plan.csv",
                                   "ingredient,period,quantity\n"
                                   "j1,1,480\nj1,2,504\nj1,3,2589\n"
                                   "j2,1,1700\nj2,3,4255\n");
  Run r = run_cli({"eval", kBase, plan.string(), "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("# status,feasible\n") != std::string::npos);
  CHECK(r.out.find("# purchasing,99457\n") != std::string::npos);
  CHECK(r.out.find("# holding,16268\n") != std::string::npos);

  const fs::path short_plan = write_file("short.csv", "j1,1,480\n");
  r = run_cli({"eval", kBase, short_plan.string()});
  CHECK(r.code == kExitInvalid);
  CHECK(r.out.find("Status: infeasible") != std::string::npos);

  const fs::path dup = write_file("dup.csv", "j1,1,480\nj1,1,481\n");
  r = run_cli({"eval", kBase, dup.string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("duplicate entry") != std::string::npos);
  const fs::path unknown = write_file("unknown.csv", "j9,1,480\n");
  CHECK(run_cli({"eval", kBase, unknown.string()}).code == kExitUsage);
}

TEST_CASE("plan CSV round trip through solve output") {
  const Run r = run_cli({"solve", kBase, "--format", "csv"});
  const fs::path plan = write_file("solved.csv", r.out);
  const Run e = run_cli({"eval", kBase, plan.string(), "--format", "csv"});
  CHECK(e.code == kExitOk);
  CHECK(e.out.find("# total,117225\n") != std::string::npos);
}

TEST_CASE("export") {
  const fs::path mps = scratch("base.mps");
  const fs::path meta = scratch("base.csv");
  Run r = run_cli({"export", kBase, "--model", "baseline", "--out", mps.string(), "--metadata", meta.string()});
  CHECK(r.code == kExitOk);
  CHECK(slurp(mps).find("ENDATA") != std::string::npos);
  CHECK(slurp(meta).rfind("name,kind,symbol", 0) == 0);
  CHECK(run_cli({"export", kBase, "--model", "other", "--out", mps.string()}).code == kExitUsage);
  CHECK(run_cli({"export", kBase, "--model", "coq", "--out", "/nonexistent/dir/x.mps"}).code == kExitUsage);
}

TEST_CASE("sensitivity with a scenario file") {
  const Run r = run_cli({"sensitivity", kBase, "--scenario",
                         testing::data_path("data/scenarios/ordering-low.json"), "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("scenario,ingredient,period,quantity,inventory,total\n", 0) == 0);
  CHECK(r.out.find("base,") != std::string::npos);
  CHECK(r.out.find("ordering-low,") != std::string::npos);
  const fs::path bad = write_file("bad_scenario.json", R"({"name": "x", "overrides": {"holding_cost": {"zz": 1}}})");
  CHECK(run_cli({"sensitivity", kBase, "--scenario", bad.string()}).code == kExitInvalid);
}

TEST_CASE("bench") {
  const Run r = run_cli({"bench", "--case", "2x2x4", "--seed", "3"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("case,ingredients,levels,periods,seed,tc,", 0) == 0);
  CHECK(r.out.find("\n1,2,2,4,3,") != std::string::npos);
  const Run t = run_cli({"bench", "--case", "2x2x4", "--format", "table"});
  CHECK(t.code == kExitOk);
  CHECK(t.out.find("Case") != std::string::npos);
}
