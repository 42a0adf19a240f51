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

#include "khow/random.hpp"

#include <cstdlib>
#include <set>
#include <stdexcept>

namespace khow {

std::uint64_t seed_from_env(std::uint64_t fallback) {
  if (const char* s = std::getenv("KHOW_SEED"); s != nullptr && *s != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end != nullptr && *end == '\0') return v;
  }
  return fallback;
}

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Formula random_atom(Rng& rng, const std::vector<std::string>& atoms) {
  return Formula::atom(atoms[uniform(rng, 0, atoms.size() - 1)]);
}

Formula grow(Rng& rng, const FormulaParams& params, int budget, int depth) {
  if (budget <= 1) return random_atom(rng, params.atoms);
  enum Choice { kAtom, kNeg, kOr, kAnd, kImplies, kKh, kAlways, kSomewhere };
  std::vector<Choice> choices{kAtom, kNeg, kOr};
  if (params.sugar) {
    choices.push_back(kAnd);
    choices.push_back(kImplies);
  }
  if (depth < params.max_kh_depth) {
    choices.push_back(kKh);
    choices.push_back(kKh);
    if (params.sugar) {
      choices.push_back(kAlways);
      choices.push_back(kSomewhere);
    }
  }
  const int rest = budget - 1;
  const int left = rest / 2 + static_cast<int>(uniform(rng, 0, 1));
  switch (choices[uniform(rng, 0, choices.size() - 1)]) {
    case kAtom:
      return random_atom(rng, params.atoms);
    case kNeg:
      return Formula::neg(grow(rng, params, rest, depth));
    case kOr:
      return Formula::disj(grow(rng, params, left, depth), grow(rng, params, rest - left, depth));
    case kAnd:
      return Formula::conj(grow(rng, params, left, depth), grow(rng, params, rest - left, depth));
    case kImplies:
      return Formula::implies(grow(rng, params, left, depth),
                              grow(rng, params, rest - left, depth));
    case kKh: {
      const Agent& agent = params.agents[uniform(rng, 0, params.agents.size() - 1)];
      return Formula::kh(agent, grow(rng, params, left, depth + 1),
                         grow(rng, params, rest - left, depth + 1));
    }
    case kAlways:
      return Formula::always(grow(rng, params, rest, depth + 1));
    case kSomewhere:
      return Formula::somewhere(grow(rng, params, rest, depth + 1));
  }
  return random_atom(rng, params.atoms);
}

}  // namespace

Formula random_formula(Rng& rng, const FormulaParams& params) {
  const int budget = static_cast<int>(uniform(rng, 1, static_cast<std::size_t>(params.max_size)));
  return grow(rng, params, budget, 0);
}

Formula random_propositional(Rng& rng, const std::vector<std::string>& atoms, int max_size) {
  FormulaParams params;
  params.atoms = atoms;
  params.max_kh_depth = 0;
  params.max_size = max_size;
  return random_formula(rng, params);
}

Lts random_lts(Rng& rng, const ModelParams& params) {
  Lts m;
  for (const auto& p : params.atoms) m.add_atom(p);
  const std::size_t n = uniform(rng, params.min_states, params.max_states);
  for (std::size_t s = 0; s < n; ++s) {
    std::set<std::string> val;
    for (const auto& p : params.atoms) {
      if (coin(rng, 0.5)) val.insert(p);
    }
    m.add_state("s" + std::to_string(s), std::move(val));
  }
  const std::size_t k = params.max_actions == 0 ? 0 : uniform(rng, 1, params.max_actions);
  for (std::size_t a = 0; a < k; ++a) {
    const bool defined = !coin(rng, params.undefined_probability);
    const ActionId id = m.add_action(std::string(1, static_cast<char>('a' + a)), defined);
    if (!defined) continue;
    for (StateId s = 0; s < n; ++s) {
      for (StateId t = 0; t < n; ++t) {
        if (coin(rng, params.edge_probability)) m.add_transition(id, s, t);
      }
    }
  }
  return m;
}

Ults random_ults(Rng& rng, const ModelParams& params) {
  Ults m(random_lts(rng, params), params.agents);
  const std::size_t k = m.base().num_actions();
  for (std::size_t i = 0; i < params.agents.size(); ++i) {
    // The first attempt always succeeds, so S_i is never empty.
    std::set<Plan> used;
    const std::size_t sets = uniform(rng, 1, params.max_plansets);
    for (std::size_t j = 0; j < sets; ++j) {
      PlanSet pi;
      const std::size_t plans = uniform(rng, 1, params.max_plans_per_set);
      for (std::size_t attempt = 0; attempt < 4 * plans && pi.size() < plans; ++attempt) {
        Plan sigma;
        const std::size_t len = k == 0 ? 0 : uniform(rng, 0, params.max_plan_length);
        for (std::size_t t = 0; t < len; ++t) sigma.push_back(uniform(rng, 0, k - 1));
        if (used.insert(sigma).second) pi.push_back(std::move(sigma));
      }
      if (!pi.empty()) m.add_planset(i, std::move(pi));
    }
  }
  return m;
}

Ults chain_ults(std::size_t states, std::size_t plans) {
  if (states == 0) throw std::invalid_argument("chain needs at least one state");
  Lts b;
  for (const char* atom : {"p", "q", "r"}) b.add_atom(atom);
  for (std::size_t s = 0; s < states; ++s) {
    std::set<std::string> val;
    if (s == 0) val.insert("p");
    if (s == states / 2) val.insert("q");
    if (s + 1 == states) val.insert("r");
    b.add_state("s" + std::to_string(s), std::move(val));
  }
  const ActionId a = b.add_action("a");
  for (StateId s = 0; s + 1 < states; ++s) b.add_transition(a, s, s + 1);
  Ults m(std::move(b), {"1"});
  for (std::size_t k = 1; k <= plans; ++k) m.add_planset(0, {Plan(k, a)});
  if (plans == 0) m.add_planset(0, {{}});
  return m;
}

}  // namespace khow
