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

#include "fixtures.hpp"
#include "khow/checker.hpp"
#include "khow/random.hpp"

namespace khow {
namespace {

using testing::emp_fail;
using testing::plan;
using testing::states;

// Direct recursive reading of the truth clauses, without labeling, memo or
// desugaring: a slow reference for the checker.
class NaiveUlts {
 public:
  explicit NaiveUlts(const Ults& m) : m_(m) {}

  bool holds(StateId w, const Formula& f) const {
    const std::size_t n = m_.base().num_states();
    switch (f.op()) {
      case Op::kAtom:
        return m_.base().valuation(w).count(f.name()) > 0;
      case Op::kTop:
        return true;
      case Op::kBot:
        return false;
      case Op::kNeg:
        return !holds(w, f.lhs());
      case Op::kOr:
        return holds(w, f.lhs()) || holds(w, f.rhs());
      case Op::kAnd:
        return holds(w, f.lhs()) && holds(w, f.rhs());
      case Op::kImplies:
        return !holds(w, f.lhs()) || holds(w, f.rhs());
      case Op::kAlways:
        for (StateId v = 0; v < n; ++v) {
          if (!holds(v, f.lhs())) return false;
        }
        return true;
      case Op::kSomewhere:
        for (StateId v = 0; v < n; ++v) {
          if (holds(v, f.lhs())) return true;
        }
        return false;
      case Op::kKh:
        for (const PlanSet& pi : m_.plansets(f.agent())) {
          bool ok = true;
          for (StateId u = 0; u < n && ok; ++u) {
            if (!holds(u, f.cond())) continue;
            for (const Plan& sigma : pi) {
              if (!stexec_plan(m_.base(), sigma).contains(u)) ok = false;
              if (auto r = rel_of_plan(m_.base(), sigma)) {
                r->successors(u).for_each([&](StateId v) {
                  if (!holds(v, f.goal())) ok = false;
                });
              }
            }
          }
          if (ok) return true;
        }
        return false;
    }
    return false;
  }

 private:
  const Ults& m_;
};

const Formula f(const char* text) { return parse(text); }

TEST(CheckUlts, EmpFailFacts) {
  const Ults m = emp_fail();
  EXPECT_TRUE(check_ults(m, "w", f("Kh[1](p,q)")));
  EXPECT_TRUE(check_ults(m, "w", f("Kh[1](q,r)")));
  EXPECT_FALSE(check_ults(m, "w", f("Kh[1](p,r)")));
  EXPECT_FALSE(check_ults(m, "w", f("Kh[1](p,p)")));
  EXPECT_TRUE(check_ults(m, "w", f("A (p -> p)")));
}

TEST(CheckUlts, Errors) {
  const Ults m = emp_fail();
  EXPECT_THROW(check_ults(m, "nowhere", f("p")), ModelError);
  EXPECT_THROW(check_ults(m, StateId{9}, f("p")), ModelError);
  EXPECT_THROW(check_ults(m, "w", f("Kh[2](p,q)")), ModelError);
}

TEST(Extension, Examples) {
  const Ults m = emp_fail();
  const Lts& b = m.base();
  EXPECT_EQ(extension(m, f("p")), states(b, {"w"}));
  EXPECT_EQ(extension(m, f("Kh[1](p,q)")), b.all_states());
  EXPECT_TRUE(extension(m, f("bot")).empty());
  EXPECT_EQ(extension(m, f("E r")), b.all_states());
  EXPECT_EQ(extension(m, f("~p & ~q & ~r")), states(b, {"x"}));
}

TEST(HoldsUniversally, Examples) {
  const Ults m = emp_fail();
  EXPECT_TRUE(holds_universally(m, f("top")));
  EXPECT_FALSE(holds_universally(m, f("p")));
  EXPECT_TRUE(holds_universally(m, f("p -> p")));
}

TEST(Witnesses, Examples) {
  const Ults m = emp_fail();
  const Lts& b = m.base();
  EXPECT_EQ(witnesses(m, "1", f("p"), f("q")), std::vector<PlanSet>{{plan(b, {"a"})}});
  EXPECT_TRUE(witnesses(m, "1", f("p"), f("r")).empty());
  EXPECT_EQ(witnesses(m, "1", f("p & q"), f("r")), m.plansets("1"));
}

TEST(CheckLts, Examples) {
  const Lts b = emp_fail().base();
  EXPECT_TRUE(check_lts(b, "w", f("Kh[1](p,r)")));
  EXPECT_TRUE(check_lts(b, "w", f("Kh[1](p,p)")));
  EXPECT_TRUE(check_lts(b, "u", f("Kh[1](p & q, bot)")));
  EXPECT_FALSE(check_lts(b, "w", f("Kh[1](p, x_never)")));
  LtsChecker checker(b);
  auto w = checker.witness(states(b, {"w"}), states(b, {"v_r"}));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(*w, plan(b, {"a", "b"}));
}

TEST(CheckLts, EmpAndCompKhHoldOnRandomLts) {
  Rng rng(seed_from_env(31));
  ModelParams params;
  FormulaParams fp;
  fp.max_kh_depth = 1;
  fp.max_size = 4;
  for (int k = 0; k < 200; ++k) {
    const Lts m = random_lts(rng, params);
    const Formula psi = random_formula(rng, fp);
    const Formula phi = random_formula(rng, fp);
    const Formula chi = random_formula(rng, fp);
    const Formula emp = Formula::implies(Formula::always(Formula::implies(psi, phi)),
                                         Formula::kh("1", psi, phi));
    const Formula comp = Formula::implies(
        Formula::conj(Formula::kh("1", psi, phi), Formula::kh("1", phi, chi)),
        Formula::kh("1", psi, chi));
    ASSERT_EQ(extension(m, emp).count(), m.num_states()) << print(emp);
    ASSERT_EQ(extension(m, comp).count(), m.num_states()) << print(comp);
  }
}

TEST(CheckUlts, AgreesWithNaiveSemantics) {
  Rng rng(seed_from_env(32));
  ModelParams params;
  params.agents = {"1", "2"};
  params.max_states = 5;
  params.undefined_probability = 0.1;
  FormulaParams fp;
  fp.agents = params.agents;
  fp.max_size = 10;
  for (int k = 0; k < 300; ++k) {
    const Ults m = random_ults(rng, params);
    Checker checker(m);
    const NaiveUlts naive(m);
    for (int t = 0; t < 10; ++t) {
      const Formula g = random_formula(rng, fp);
      const StateSet ext = checker.extension(g);
      for (StateId w = 0; w < m.base().num_states(); ++w) {
        ASSERT_EQ(ext.contains(w), naive.holds(w, g)) << print(g);
      }
    }
  }
}

TEST(CheckUlts, KhIsGlobalAndUniversalMatchesDesugaring) {
  Rng rng(seed_from_env(33));
  ModelParams params;
  params.agents = {"1", "2"};
  FormulaParams fp;
  fp.agents = params.agents;
  for (int k = 0; k < 300; ++k) {
    const Ults m = random_ults(rng, params);
    const Formula psi = random_formula(rng, fp);
    const Formula phi = random_formula(rng, fp);
    const StateSet kh = extension(m, Formula::kh("2", psi, phi));
    ASSERT_TRUE(kh.empty() || kh.count() == m.base().num_states());
    ASSERT_EQ(holds_universally(m, psi),
              extension(m, desugar(Formula::always(psi), m.agents())).count() ==
                  m.base().num_states());
  }
}

TEST(CheckUlts, KhEAndKhAInstancesOnRandomModels) {
  Rng rng(seed_from_env(34));
  ModelParams params;
  FormulaParams fp;
  fp.max_size = 5;
  for (int k = 0; k < 300; ++k) {
    const Ults m = random_ults(rng, params);
    const Formula psi = random_formula(rng, fp);
    const Formula phi = random_formula(rng, fp);
    const Formula chi = random_formula(rng, fp);
    const Formula theta = random_formula(rng, fp);
    const Formula khe = Formula::implies(
        Formula::conj(Formula::somewhere(psi), Formula::kh("1", psi, phi)),
        Formula::somewhere(phi));
    const Formula kha = Formula::implies(
        Formula::conj(Formula::conj(Formula::always(Formula::implies(chi, psi)),
                                    Formula::kh("1", psi, phi)),
                      Formula::always(Formula::implies(phi, theta))),
        Formula::kh("1", chi, theta));
    ASSERT_TRUE(holds_universally(m, khe)) << print(khe);
    ASSERT_TRUE(holds_universally(m, kha)) << print(kha);
  }
}

}  // namespace
}  // namespace khow
