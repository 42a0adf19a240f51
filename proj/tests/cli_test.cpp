// Copyright 2026 The khow Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "json.hpp"
#include "khow/checker.hpp"
#include "khow/cli.hpp"

namespace khow {
namespace {

using testing::data_path;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("khow_cli_test_" + name)).string();
}

const std::string kEmpFail = data_path("emp-fail.json");

TEST(Cli, CheckVerdictsAndWitnesses) {
  const Result yes = run({"check", "-m", kEmpFail, "-w", "w", "-f", "Kh[1](p,q)"});
  EXPECT_EQ(yes.code, 0);
  EXPECT_EQ(yes.out, "true\nKh[1](p, q): {[a]}\n");
  const Result no = run({"check", "-m", kEmpFail, "-w", "w", "-f", "Kh[1](p,r)"});
  EXPECT_EQ(no.code, 1);
  EXPECT_EQ(no.out.substr(0, 6), "false\n");

  const Result js = run({"--json", "check", "-m", kEmpFail, "-w", "w", "-f", "Kh[1](p,q) & p"});
  ASSERT_EQ(js.code, 0);
  const json doc = json::parse(js.out);
  EXPECT_EQ(doc["verdict"], true);
  EXPECT_EQ(doc["witnesses"][0]["plansets"][0], "{[a]}");
}

TEST(Cli, CheckOnLts) {
  const std::string path = temp_path("lts.json");
  save_model(testing::emp_fail().base(), path);
  const Result r = run({"check", "-m", path, "-w", "w", "-f", "Kh[1](p,r)"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "true\nKh[1](p, r): [a,b]\n");
}

TEST(Cli, SatAndValid) {
  const Result unsat = run({"sat", "-f", "p & ~p"});
  EXPECT_EQ(unsat.code, 1);
  EXPECT_EQ(unsat.out.substr(0, 6), "UNSAT\n");

  const std::string path = temp_path("sat.json");
  const Result sat = run({"--json", "sat", "-f", "Kh[1](p,q) & ~Kh[2](p,q)", "--agents", "1,2", "-o", path});
  ASSERT_EQ(sat.code, 0);
  const json doc = json::parse(sat.out);
  EXPECT_EQ(doc["verdict"], "SAT");
  const Ults m = std::get<Ults>(load_model(path));
  EXPECT_TRUE(check_ults(m, std::string(doc["point"]), parse("Kh[1](p,q) & ~Kh[2](p,q)")));

  EXPECT_EQ(run({"valid", "-f", "(E p & Kh[1](p,q)) -> E q"}).code, 0);
  const Result invalid = run({"valid", "-f", "A(p -> p) -> Kh[1](p,p)"});
  EXPECT_EQ(invalid.code, 1);
  EXPECT_EQ(invalid.out.substr(0, 10), "NOT VALID\n");
}

TEST(Cli, BisimAndEquiv) {
  const Ults m = testing::emp_fail();
  const std::string dup = temp_path("dup.json");
  save_model(testing::with_duplicate_state(m, 3), dup);
  const Result same = run({"bisim", "-m", kEmpFail, "-w", "w", "-n", dup, "-x", "w"});
  EXPECT_EQ(same.code, 0);
  EXPECT_NE(same.out.find("x ~ x_copy"), std::string::npos);
  const Result differ = run({"--json", "bisim", "-m", kEmpFail, "-w", "w", "-n", dup, "-x", "u"});
  EXPECT_EQ(differ.code, 1);
  const json doc = json::parse(differ.out);
  EXPECT_EQ(doc["violation"]["clause"], "Atom");
  EXPECT_EQ(doc["distinguishing"], "p");

  EXPECT_EQ(run({"equiv", "-m", kEmpFail, "-w", "x", "-n", dup, "-x", "x_copy"}).code, 0);
  const Result ne = run({"equiv", "-m", kEmpFail, "-w", "w", "-n", dup, "-x", "u"});
  EXPECT_EQ(ne.code, 1);
  EXPECT_EQ(ne.out, "not equivalent\ndistinguishing: p\n");
}

TEST(Cli, FilterWritesLoadableModel) {
  const std::string path = temp_path("filt.json");
  const Result r = run({"filter", "-m", kEmpFail, "-f", "Kh[1](p,q)", "-o", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "4 states -> 3 classes (|sigma| = 3)\n");
  const Ults f = std::get<Ults>(load_model(path));
  EXPECT_EQ(f.base().num_states(), 3u);
  EXPECT_TRUE(check_ults(f, StateId{0}, parse("Kh[1](p,q)")));
}

TEST(Cli, TranslateAndClassify) {
  const std::string lts = temp_path("base.json");
  const std::string ac = temp_path("ac.json");
  const std::string back = temp_path("back.json");
  save_model(testing::emp_fail().base(), lts);
  ASSERT_EQ(run({"translate", "-m", lts, "--to", "ults-ac", "-o", ac}).code, 0);
  EXPECT_EQ(run({"classify", "-m", ac}).code, 0);
  ASSERT_EQ(run({"translate", "-m", ac, "--to", "lts", "-o", back}).code, 0);
  const Lts l = std::get<Lts>(load_model(back));
  EXPECT_TRUE(check_lts(l, "w", parse("Kh[1](p,r)")));

  const Result nu = run({"translate", "-m", lts, "--to", "ults-nu"});
  ASSERT_EQ(nu.code, 0);
  EXPECT_NO_THROW(parse_model(nu.out));

  const Result cls = run({"--json", "classify", "-m", kEmpFail});
  EXPECT_EQ(cls.code, 1);
  EXPECT_EQ(json::parse(cls.out)["active"], false);
}

TEST(Cli, Axioms) {
  const Result sound = run({"axioms", "--trials", "50", "--schemas", "KhE,KhA,TA"});
  EXPECT_EQ(sound.code, 0) << sound.out;
  EXPECT_NE(sound.out.find("KhA: "), std::string::npos);
  const Result general = run({"--json", "axioms", "--trials", "20", "--schemas", "EMP"});
  EXPECT_EQ(general.code, 0);
  const json doc = json::parse(general.out);
  EXPECT_GT(doc["schemas"][0]["counterexamples"], 0);
  EXPECT_EQ(run({"axioms", "--trials", "50", "--class", "nu", "--schemas", "EMP,COMPKh"}).code, 0);
}

TEST(Cli, ErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"check", "-m", kEmpFail, "-w", "w"}).code, 2);
  EXPECT_EQ(run({"check", "-m", "/nonexistent.json", "-w", "w", "-f", "p"}).code, 2);
  EXPECT_EQ(run({"check", "-m", kEmpFail, "-w", "nowhere", "-f", "p"}).code, 2);
  const Result bad_formula = run({"check", "-m", kEmpFail, "-w", "w", "-f", "p &"});
  EXPECT_EQ(bad_formula.code, 2);
  EXPECT_NE(bad_formula.err.find("error: formula"), std::string::npos);
  EXPECT_EQ(run({"translate", "-m", kEmpFail, "--to", "lts"}).code, 2);
  EXPECT_EQ(run({"translate", "-m", kEmpFail, "--to", "ults-ac"}).code, 2);
  EXPECT_EQ(run({"translate", "-m", kEmpFail, "--to", "dfa"}).code, 2);
  EXPECT_EQ(run({"axioms", "--trials", "0"}).code, 2);

  const std::string garbage = temp_path("garbage.json");
  std::ofstream(garbage) << "{ not json";
  EXPECT_EQ(run({"classify", "-m", garbage}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

}  // namespace
}  // namespace khow
