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

// SE-composition of plan sets, model-class tests, and translations between
// LTSs and single-agent ULTSs that preserve truth at every state.
//
// The class of models offering every plan as its own plan set is infinite;
// here it is represented by one plan per plan behavior, which is enough
// because Kh depends on a plan only through its behavior.

#ifndef KHOW_TRANSFORM_HPP_
#define KHOW_TRANSFORM_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "khow/model.hpp"

namespace khow {

// Agent name used by the translations that produce a ULTS.
inline constexpr const char* kDefaultAgent = "1";

// pi1 pi2 when pi1 is SE somewhere and every state it reaches from there is
// one where pi2 is SE; the empty set otherwise.
PlanSet se_compose(const Lts& m, const PlanSet& pi1, const PlanSet& pi2);
// Guarded concatenation of a whole chain; throws std::invalid_argument on an
// empty chain.
PlanSet se_compose_chain(const Lts& m, const std::vector<PlanSet>& chain);
inline PlanSet se_compose(const Ults& m, const PlanSet& pi1, const PlanSet& pi2) {
  return se_compose(m.base(), pi1, pi2);
}
inline PlanSet se_compose_chain(const Ults& m, const std::vector<PlanSet>& chain) {
  return se_compose_chain(m.base(), chain);
}

struct ClassReport {
  // One singleton per plan behavior of the base, so every plan is available
  // up to behavior.
  bool is_nu_style = false;
  bool is_active = false;
  bool is_se_compositional = false;
  // Index in S of a plan set behaving like the empty plan.
  std::optional<std::size_t> active_witness;
  // For every composable pair (pi1, pi2): the covering plan set index.
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> composition_witnesses;
  // First composable pair with no covering plan set.
  std::optional<std::pair<std::size_t, std::size_t>> composition_counterexample;
  std::string explanation;
};

// All three tests need a single-agent model; others raise ModelError.
bool is_active(const Ults& m, std::size_t* witness = nullptr);
bool is_se_compositional(const Ults& m, std::pair<std::size_t, std::size_t>* counterexample = nullptr);
bool is_nu_style(const Ults& m);
ClassReport classify(const Ults& m);

// One singleton {sigma} per plan behavior, sigma its shortest-then-least
// representative.
Ults lts_to_ults_nu(const Lts& m);
// One fresh action per plan behavior that is SE somewhere, carrying that
// behavior's relation, each offered as a singleton plan set. Action names
// spell the representative plan, e.g. "[a,b]" or "[]".
Ults lts_to_ults_ac(const Lts& m);
// One action per plan set pi with relation R_pi restricted to SE(pi).
// Throws ModelError unless m is active and SE-compositional.
Lts ults_to_lts(const Ults& m);

}  // namespace khow

#endif  // KHOW_TRANSFORM_HPP_
