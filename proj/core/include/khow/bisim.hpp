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

// Bisimulation and logical equivalence between finite pointed ULTSs.
//
// Every definable set is a union of valuation classes and Kh is global, so
// two models agree on all formulas at a pair of points iff the points share
// a valuation, the models realize the same valuations, and for every agent
// and every union U of valuation classes the sets T with U ->_i T coincide.
// The last condition is compared through the minimal images R_pi(U).
//
// Valuations are compared over the union of both models' atoms, an atom
// absent from a model being false everywhere in it. Both models must have
// the same agent set.

#ifndef KHOW_BISIM_HPP_
#define KHOW_BISIM_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "khow/model.hpp"
#include "khow/syntax.hpp"

namespace khow {

// Distinct valuations per model above which definable-set enumeration is
// refused.
inline constexpr std::size_t kMaxValuationClasses = 12;

using BisimRelation = std::set<std::pair<StateId, StateId>>;

enum class Clause { kAtom, kKhZig, kKhZag, kAZig, kAZag };
const char* clause_name(Clause c);

struct Violation {
  Clause clause = Clause::kAtom;
  // The offending pair; for A-Zig/A-Zag the uncovered state sits in the
  // matching component and the other is unused.
  std::pair<StateId, StateId> pair{0, 0};
  std::size_t agent = 0;
  // Definable set on the side the clause starts from.
  StateSet u{};
  // Minimal image R_pi(U) that has no matching successor.
  StateSet t{};
  // Index of pi in S_agent of the starting side.
  std::size_t planset = 0;
};

// All unions of valuation classes of W, ordered by class bitmask.
std::vector<StateSet> prop_definable_sets(const Ults& m);

// Checks every clause; nullopt means z is a bisimulation. Throws
// std::invalid_argument for an empty z and ModelError for different agent
// sets.
std::optional<Violation> verify_bisim(const Ults& m, const Ults& m2, const BisimRelation& z);
// True when the named clause indeed fails on the reported witness.
bool replay_violation(const Ults& m, const Ults& m2, const BisimRelation& z, const Violation& v);

// Valuations realized by some state, over the model's own atoms.
std::set<std::set<std::string>> realized_valuations(const Ults& m);

// Whether both models satisfy the same Kh formulas and realize the same
// valuations (the point-independent part of equivalence).
bool profiles_agree(const Ults& m, const Ults& m2);
bool equivalent(const Ults& m, StateId w, const Ults& m2, StateId w2);

struct BisimResult {
  bool bisimilar = false;
  // The certified relation when bisimilar.
  BisimRelation z;
  std::optional<Violation> violation;
  // Human-readable first difference when not bisimilar.
  std::string reason;
};

BisimResult bisimilar(const Ults& m, StateId w, const Ults& m2, StateId w2);

// Searches atoms (depth 0), then E and Kh formulas over valuation-class
// indicators (depth >= 1). Kh facts are global, so arguments need no
// further nesting: depth >= 2 searches the same space as depth 1.
std::optional<Formula> find_distinguishing_formula(const Ults& m, StateId w, const Ults& m2,
                                                   StateId w2, int max_depth);

}  // namespace khow

#endif  // KHOW_BISIM_HPP_
