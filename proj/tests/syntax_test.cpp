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

#include <unordered_set>

#include "khow/random.hpp"
#include "khow/syntax.hpp"

namespace khow {
namespace {

const Formula p = Formula::atom("p");
const Formula q = Formula::atom("q");
const Formula r = Formula::atom("r");

TEST(Parse, Atom) { EXPECT_EQ(parse("p"), p); }

TEST(Parse, PrecedenceAndAssociativity) {
  EXPECT_EQ(parse("~p | q -> r"), Formula::implies(Formula::disj(Formula::neg(p), q), r));
  EXPECT_EQ(parse("p -> q -> r"), Formula::implies(p, Formula::implies(q, r)));
  EXPECT_EQ(parse("p | q | r"), Formula::disj(Formula::disj(p, q), r));
  EXPECT_EQ(parse("p & q | r"), Formula::disj(Formula::conj(p, q), r));
  EXPECT_EQ(parse("~p & q"), Formula::conj(Formula::neg(p), q));
  EXPECT_EQ(parse("A p & E q"), Formula::conj(Formula::always(p), Formula::somewhere(q)));
  EXPECT_EQ(parse("A ~p"), Formula::always(Formula::neg(p)));
}

TEST(Parse, Kh) {
  EXPECT_EQ(parse("Kh[1](p, q & r)"), Formula::kh("1", p, Formula::conj(q, r)));
  EXPECT_EQ(parse("Kh[alice](top,bot)"), Formula::kh("alice", Formula::top(), Formula::bot()));
}

TEST(Parse, KeywordPrefixedIdentifiers) {
  EXPECT_EQ(parse("Ax"), Formula::atom("Ax"));
  EXPECT_EQ(parse("topper"), Formula::atom("topper"));
  EXPECT_EQ(parse("E(p)"), Formula::somewhere(p));
}

TEST(Parse, ErrorsCarryOffsets) {
  try {
    parse("p & (q");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
  try {
    parse("p $ q");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("p q"), ParseError);
  EXPECT_THROW(parse("Kh[](p,q)"), ParseError);
  EXPECT_THROW(parse("A"), ParseError);
}

TEST(Parse, UnknownAgent) {
  try {
    parse("Kh[1](p,q) & Kh[7](p,q)", {"1", "2"});
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 16u);
  }
  EXPECT_NO_THROW(parse("Kh[2](p,q)", {"1", "2"}));
}

TEST(Print, Basic) {
  EXPECT_EQ(print(Formula::kh("1", p, q)), "Kh[1](p, q)");
  EXPECT_EQ(print(Formula::neg(p)), "~p");
  EXPECT_EQ(print(Formula::disj(p, Formula::disj(q, r))), "p | (q | r)");
  EXPECT_EQ(print(Formula::disj(Formula::disj(p, q), r)), "p | q | r");
  EXPECT_EQ(print(Formula::implies(Formula::implies(p, q), r)), "(p -> q) -> r");
  EXPECT_EQ(print(Formula::neg(Formula::conj(p, q))), "~(p & q)");
}

TEST(Print, RoundTripRandom) {
  Rng rng(seed_from_env(11));
  FormulaParams params;
  params.agents = {"1", "b2"};
  params.max_size = 14;
  for (int k = 0; k < 2000; ++k) {
    const Formula f = random_formula(rng, params);
    ASSERT_EQ(parse(print(f)), f) << print(f);
  }
}

TEST(Desugar, Universal) {
  const Formula bot = Formula::neg(
      Formula::disj(Formula::neg(Formula::atom("_p0")), Formula::neg(Formula::neg(Formula::atom("_p0")))));
  EXPECT_EQ(desugar(parse("A p"), {"1"}), Formula::kh("1", Formula::neg(p), bot));
  EXPECT_EQ(desugar(parse("A p"), {"1", "2"}),
            Formula::disj(Formula::kh("1", Formula::neg(p), bot), Formula::kh("2", Formula::neg(p), bot)));
  EXPECT_EQ(desugar(parse("E p"), {"1"}),
            Formula::neg(Formula::kh("1", Formula::neg(Formula::neg(p)), bot)));
  EXPECT_EQ(desugar(Formula::bot(), {"1"}), bot);
  EXPECT_EQ(desugar(Formula::top(), {"1"}), Formula::neg(bot));
  EXPECT_EQ(desugar(parse("p -> q"), {"1"}), Formula::disj(Formula::neg(p), q));
}

TEST(Desugar, RequiresAgentsOnlyForModalities) {
  EXPECT_THROW(desugar(parse("A p"), {}), std::invalid_argument);
  EXPECT_NO_THROW(desugar(parse("p & top"), {}));
}

TEST(Desugar, CoreAndLinearSize) {
  Rng rng(seed_from_env(12));
  FormulaParams params;
  params.agents = {"1", "2", "3"};
  for (int k = 0; k < 1000; ++k) {
    const Formula f = random_formula(rng, params);
    const Formula d = desugar(f, params.agents);
    ASSERT_TRUE(d.is_core());
    // Every surface node expands to a bounded number of distinct nodes.
    ASSERT_LE(subformula_closure(d).size(), 16 * f.size() * params.agents.size());
  }
}

TEST(Closure, Examples) {
  EXPECT_EQ(subformula_closure(p), std::vector<Formula>{p});
  EXPECT_EQ(subformula_closure(Formula::kh("1", p, q)),
            (std::vector<Formula>{p, q, Formula::kh("1", p, q)}));
  EXPECT_EQ(subformula_closure(Formula::neg(Formula::disj(p, q))),
            (std::vector<Formula>{p, q, Formula::disj(p, q), Formula::neg(Formula::disj(p, q))}));
  EXPECT_EQ(subformula_closure(Formula::disj(p, p)).size(), 2u);
}

TEST(Closure, ClosedAndBounded) {
  Rng rng(seed_from_env(13));
  for (int k = 0; k < 1000; ++k) {
    const Formula f = random_formula(rng, {});
    const auto closure = subformula_closure(f);
    ASSERT_LE(closure.size(), f.size());
    std::unordered_set<Formula> members(closure.begin(), closure.end());
    ASSERT_EQ(members.size(), closure.size());
    for (const Formula& g : closure) {
      for (const Formula& c : g.children()) ASSERT_TRUE(members.count(c));
    }
    ASSERT_EQ(closure.back(), f);
  }
}

TEST(KhPairs, Examples) {
  EXPECT_EQ(kh_pairs(parse("Kh[1](p,q) & ~Kh[2](q,r)")),
            (std::vector<KhTriple>{{"1", p, q}, {"2", q, r}}));
  EXPECT_TRUE(kh_pairs(p).empty());
  const Formula inner = Formula::kh("1", q, r);
  EXPECT_EQ(kh_pairs(Formula::kh("1", p, inner)),
            (std::vector<KhTriple>{{"1", q, r}, {"1", p, inner}}));
  EXPECT_EQ(kh_pairs(parse("Kh[1](p,q) | Kh[1](p,q)")).size(), 1u);
}

TEST(Structure, AtomsAgentsDepth) {
  const Formula f = parse("Kh[1](p, Kh[2](q, r)) | A s");
  EXPECT_EQ(atoms_of(f), (std::set<std::string>{"p", "q", "r", "s"}));
  EXPECT_EQ(agents_of(f), (std::set<Agent>{"1", "2"}));
  EXPECT_EQ(f.modal_depth(), 2);
}

TEST(Structure, Substitute) {
  const Formula schema = parse("Kh[i](psi, phi) -> A phi");
  const Formula g = substitute(
      schema,
      [](const std::string& a) -> std::optional<Formula> {
        if (a == "psi") return Formula::atom("p");
        if (a == "phi") return parse("q | r");
        return std::nullopt;
      },
      [](const Agent&) { return Agent("2"); });
  EXPECT_EQ(g, parse("Kh[2](p, q | r) -> A (q | r)"));
}

TEST(Identifier, Rules) {
  EXPECT_TRUE(is_identifier("p_1"));
  EXPECT_FALSE(is_identifier(""));
  EXPECT_FALSE(is_identifier("a-b"));
}

}  // namespace
}  // namespace khow
