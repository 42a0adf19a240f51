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

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "json.hpp"
#include "khow/checker.hpp"
#include "khow/filtration.hpp"
#include "khow/random.hpp"

namespace khow {
namespace {

using testing::emp_fail;

std::vector<Formula> closure_of(const char* text) { return sigma_closure({parse(text)}); }

std::size_t count_kh(const std::vector<Formula>& sigma) {
  std::set<std::pair<Formula, Formula>> args;
  for (const Formula& f : sigma) {
    if (f.op() == Op::kKh) args.emplace(f.cond(), f.goal());
  }
  return args.size();
}

TEST(SigmaClosure, ClosedAndDeduplicated) {
  const auto sigma = sigma_closure({parse("p & q"), parse("Kh[1](p, q)")});
  EXPECT_TRUE(is_subformula_closed(sigma));
  EXPECT_EQ(sigma.size(), 4u);
  EXPECT_FALSE(is_subformula_closed({parse("~p")}));
  EXPECT_TRUE(is_subformula_closed({}));
}

TEST(SigmaClasses, Examples) {
  const Ults m = emp_fail();
  const SigmaClasses by_p = sigma_classes(m, {parse("p")});
  EXPECT_EQ(by_p.num_state_classes, 2u);
  EXPECT_EQ(by_p.num_plan_classes, 1u);

  const SigmaClasses kh = sigma_classes(m, closure_of("Kh[1](p,q)"));
  EXPECT_EQ(kh.num_state_classes, 3u);
  const Lts& b = m.base();
  EXPECT_EQ(kh.state_class[b.state("v_r")], kh.state_class[b.state("x")]);
  EXPECT_NE(kh.state_class[b.state("w")], kh.state_class[b.state("u")]);
  EXPECT_NE(kh.state_class[b.state("w")], kh.state_class[b.state("x")]);
  // {a} witnesses Kh(p,q); {b} and {ab,c} witness nothing.
  EXPECT_EQ(kh.num_plan_classes, 2u);
}

TEST(SigmaClasses, Errors) {
  const Ults m = emp_fail();
  EXPECT_THROW(sigma_classes(m, {parse("~p")}), std::invalid_argument);
  EXPECT_THROW(sigma_classes(m, closure_of("Kh[7](p,q)")), ModelError);
}

TEST(Filtrate, Examples) {
  const Ults m = emp_fail();
  const Filtration by_p = filtrate(m, {parse("p")});
  EXPECT_LE(by_p.model.base().num_states(), 2u);
  EXPECT_FALSE(verify_filtration(m, {parse("p")}, by_p).has_value());

  const auto sigma = closure_of("Kh[1](p,q)");
  const Filtration f = filtrate(m, sigma);
  EXPECT_EQ(f.model.base().num_states(), 3u);
  EXPECT_EQ(extension(f.model, parse("Kh[1](p,q)")), f.model.base().all_states());
  EXPECT_FALSE(verify_filtration(m, sigma, f).has_value());

  // All four states are told apart: the filtration is a bijection on states.
  const auto fine = closure_of("p | q | r");
  const Filtration iso = filtrate(m, fine);
  EXPECT_EQ(iso.model.base().num_states(), 4u);
  EXPECT_EQ(std::set<StateId>(iso.class_map.begin(), iso.class_map.end()).size(), 4u);
}

TEST(Filtrate, EmptySigma) {
  const Ults m = emp_fail();
  const Filtration f = filtrate(m, {});
  EXPECT_EQ(f.model.base().num_states(), 1u);
  ASSERT_EQ(f.model.plansets(0).size(), 1u);
  EXPECT_FALSE(f.model.base().relation(0)->size());
  EXPECT_FALSE(verify_filtration(m, {}, f).has_value());
}

// w1, w2 both satisfy p; only w1 can do a. {a} witnesses Kh(q,p) (q is
// false everywhere) but not Kh(p,p). Reading the transition condition as a
// bare biconditional gives [w] -> [w], which makes {a} a witness of Kh(p,p)
// in the filtration.
TEST(Filtrate, GuardIsNeeded) {
  Lts b;
  b.add_atom("q");
  b.add_state("w1", {"p"});
  b.add_state("w2", {"p"});
  const ActionId a = b.add_action("a");
  b.add_transition(a, 0, 0);
  Ults m(b, {"1"});
  m.add_planset(0, {{a}});
  const auto sigma = sigma_closure({parse("Kh[1](q,p)"), parse("Kh[1](p,p)")});
  EXPECT_FALSE(check_ults(m, "w1", parse("Kh[1](p,p)")));

  Lts naive;
  naive.add_atom("q");
  naive.add_state("{w1,w2}", {"p"});
  naive.add_transition(naive.add_action("a0"), 0, 0);
  Ults unguarded(naive, {"1"});
  unguarded.add_planset(0, {{0}});
  EXPECT_TRUE(check_ults(unguarded, StateId{0}, parse("Kh[1](p,p)")));

  const Filtration f = filtrate(m, sigma);
  EXPECT_EQ(f.model.base().num_states(), 1u);
  EXPECT_FALSE(check_ults(f.model, StateId{0}, parse("Kh[1](p,p)")));
  EXPECT_FALSE(verify_filtration(m, sigma, f).has_value());
}

TEST(Filtrate, PlanClassesCanOutnumberKhFormulas) {
  Lts b;
  b.add_state("w", {"p"});
  b.add_state("u", {"q"});
  b.add_state("v", {"r"});
  b.add_state("x", {"q", "r"});
  for (const char* name : {"a", "b", "c"}) b.add_action(name);
  b.add_transition(0, 0, 1);
  b.add_transition(1, 0, 2);
  b.add_transition(2, 0, 3);
  Ults m(b, {"1"});
  for (ActionId a = 0; a < 3; ++a) m.add_planset(0, {{a}});
  const auto sigma = closure_of("Kh[1](p,q) & Kh[1](p,r)");
  const Filtration f = filtrate(m, sigma);
  EXPECT_EQ(count_kh(sigma), 2u);
  EXPECT_EQ(f.model.plansets(0).size(), 3u);
  EXPECT_FALSE(verify_filtration(m, sigma, f).has_value());
}

TEST(VerifyFiltration, CorruptedRelationIsCaught) {
  const Ults m = emp_fail();
  const auto sigma = closure_of("Kh[1](p,q)");
  Filtration f = filtrate(m, sigma);
  const Lts& fb = f.model.base();
  Lts broken;
  for (const auto& atom : fb.atoms()) broken.add_atom(atom);
  for (StateId s = 0; s < fb.num_states(); ++s) broken.add_state(fb.state_name(s), fb.valuation(s));
  for (ActionId a = 0; a < fb.num_actions(); ++a) broken.add_action(fb.action_name(a));
  Ults corrupted(broken, f.model.agents());
  for (const PlanSet& pi : f.model.plansets(0)) corrupted.add_planset(0, pi);
  f.model = corrupted;
  const auto v = verify_filtration(m, sigma, f);
  ASSERT_TRUE(v.has_value());
  ASSERT_TRUE(v->formula.has_value());
  EXPECT_EQ(*v->formula, parse("Kh[1](p,q)"));
  EXPECT_TRUE(v->state.has_value());
}

TEST(Filtrate, DumpRoundTrips) {
  const Ults m = emp_fail();
  const Filtration f = filtrate(m, closure_of("Kh[1](p,q)"));
  const std::string text = dump_filtration(m, f);
  EXPECT_EQ(std::get<Ults>(parse_model(text)), f.model);
  const auto doc = nlohmann::json::parse(text);
  EXPECT_EQ(doc["class_map"]["x"], "{v_r,x}");
  EXPECT_EQ(doc["sigma"].size(), 3u);
}

TEST(Filtrate, TruthPreservedOnRandomModels) {
  Rng rng(seed_from_env(61));
  ModelParams params;
  params.max_states = 5;
  params.agents = {"1", "2"};
  params.undefined_probability = 0.1;
  FormulaParams fp;
  fp.agents = params.agents;
  fp.max_size = 12;
  for (int k = 0; k < 300; ++k) {
    const Ults m = random_ults(rng, params);
    const auto sigma = sigma_closure({random_formula(rng, fp), random_formula(rng, fp)});
    const Filtration f = filtrate(m, sigma);
    const auto v = verify_filtration(m, sigma, f);
    ASSERT_FALSE(v.has_value()) << v->message;
    const std::size_t kh = count_kh(sigma);
    const auto class_actions = static_cast<std::size_t>(
        std::count_if(f.action_class.begin(), f.action_class.end(),
                      [](const auto& c) { return c.has_value(); }));
    ASSERT_LE(class_actions, (std::size_t{1} << kh) - 1);
    for (std::size_t i = 0; i < m.num_agents(); ++i) {
      ASSERT_LE(f.model.plansets(i).size(), m.plansets(i).size());
    }
    // Filtrating again through the same set changes nothing observable.
    const Filtration again = filtrate(f.model, sigma);
    ASSERT_EQ(again.model.base().num_states(), f.model.base().num_states());
    ASSERT_FALSE(verify_filtration(f.model, sigma, again).has_value());
    for (const Formula& g : sigma) {
      const StateSet e1 = extension(m, g);
      const StateSet e2 = extension(again.model, g);
      for (StateId w = 0; w < m.base().num_states(); ++w) {
        ASSERT_EQ(e1.contains(w), e2.contains(again.class_map[f.class_map[w]])) << print(g);
      }
    }
  }
}

}  // namespace
}  // namespace khow
