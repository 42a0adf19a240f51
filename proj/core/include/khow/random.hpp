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

// Random formulas and models for property tests and the soundness harness.

#ifndef KHOW_RANDOM_HPP_
#define KHOW_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "khow/model.hpp"
#include "khow/syntax.hpp"

namespace khow {

using Rng = std::mt19937_64;

// Seed from KHOW_SEED when set, otherwise `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback);

struct FormulaParams {
  std::vector<std::string> atoms{"p", "q", "r"};
  AgentSet agents{"1"};
  int max_kh_depth = 2;
  // Rough node budget.
  int max_size = 9;
  // Also emit &, ->, A and E.
  bool sugar = true;
};

Formula random_formula(Rng& rng, const FormulaParams& params);
// A formula without modalities.
Formula random_propositional(Rng& rng, const std::vector<std::string>& atoms, int max_size);

struct ModelParams {
  std::size_t min_states = 1;
  std::size_t max_states = 4;
  std::size_t max_actions = 2;
  std::vector<std::string> atoms{"p", "q", "r"};
  double edge_probability = 0.3;
  // Chance that a declared action has no relation at all.
  double undefined_probability = 0.0;
  AgentSet agents{"1"};
  std::size_t max_plansets = 3;
  std::size_t max_plans_per_set = 2;
  std::size_t max_plan_length = 3;
};

Lts random_lts(Rng& rng, const ModelParams& params);
// A valid ULTS: every agent gets 1..max_plansets disjoint nonempty plan sets.
Ults random_ults(Rng& rng, const ModelParams& params);

// Deterministic scaling family: states s0 -a-> s1 -a-> ... -a-> s{n-1}, p at
// s0, q at the middle state, r at the last; agent "1" has the plan sets
// {a^k} for k = 1..plans. Total plan length is plans * (plans + 1) / 2.
Ults chain_ults(std::size_t states, std::size_t plans);

}  // namespace khow

#endif  // KHOW_RANDOM_HPP_
