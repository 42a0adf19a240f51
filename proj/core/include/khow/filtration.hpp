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

// Filtrations of a ULTS through a subformula-closed set of formulas.
//
// States are merged when they agree on every formula of the set; plan sets
// are merged when they witness the same Kh arguments of the set. Each class
// of witnessing plan sets becomes one action a_C of the filtrated model, with
//
//   R_C = { ([w],[v]) : (w,v) in R_pi for some pi in C, and [w] inside
//           SE(pi') for every pi' in C }.
//
// The SE guard keeps a_C from becoming SE on a class that some member of C
// cannot execute from; without it the truth lemma fails (see the
// GuardIsNeeded test).

#ifndef KHOW_FILTRATION_HPP_
#define KHOW_FILTRATION_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "khow/model.hpp"
#include "khow/syntax.hpp"

namespace khow {

// Union of the subformula closures, deduplicated, children first.
std::vector<Formula> sigma_closure(const std::vector<Formula>& formulas);
bool is_subformula_closed(const std::vector<Formula>& sigma);

struct SigmaClasses {
  std::vector<Formula> sigma;
  // Class index of every state; classes are numbered by first member.
  std::vector<std::size_t> state_class;
  std::size_t num_state_classes = 0;
  // Distinct (condition, goal) arguments of Kh formulas in sigma.
  std::vector<std::pair<Formula, Formula>> kh_args;
  // Distinct plan sets over all agents, with their class and witness
  // profile (one flag per kh_args entry).
  std::vector<PlanSet> plansets;
  std::vector<std::size_t> plan_class;
  std::vector<std::vector<bool>> profiles;
  std::size_t num_plan_classes = 0;
};

// Throws std::invalid_argument when sigma is not subformula-closed and
// ModelError when it mentions an agent the model lacks.
SigmaClasses sigma_classes(const Ults& m, const std::vector<Formula>& sigma);

struct Filtration {
  Ults model;
  // State of the source model -> state of `model`.
  std::vector<StateId> class_map;
  std::vector<Formula> sigma;
  // Plan class behind each action of `model`; nullopt for the inert action.
  std::vector<std::optional<std::size_t>> action_class;
};

Filtration filtrate(const Ults& m, const std::vector<Formula>& sigma);

struct FiltrationViolation {
  std::optional<Formula> formula;
  std::optional<StateId> state;
  std::string message;
};

// Checks that every formula of sigma has the same truth value at w and at
// its class, and the 2^|sigma| size bound.
std::optional<FiltrationViolation> verify_filtration(const Ults& m, const std::vector<Formula>& sigma,
                                                     const Filtration& filt);

// The filtrated model in the model file format plus "class_map" (source
// state id -> class state id) and "sigma".
std::string dump_filtration(const Ults& source, const Filtration& filt);

}  // namespace khow

#endif  // KHOW_FILTRATION_HPP_
