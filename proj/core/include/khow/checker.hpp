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

// Model checking by bottom-up labeling.
//
// Formulas are labeled in subformula-closure order, so each distinct
// subformula is evaluated once. Kh is global: its extension is either every
// state or none. Surface sugar is desugared against the model's agents.

#ifndef KHOW_CHECKER_HPP_
#define KHOW_CHECKER_HPP_

#include <cstddef>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "khow/model.hpp"
#include "khow/state_set.hpp"
#include "khow/syntax.hpp"

namespace khow {

// Labels formulas over one ULTS and caches every extension it computes.
// Not thread-safe; use one instance per thread.
class Checker {
 public:
  explicit Checker(const Ults& m);

  const Ults& model() const { return model_; }

  // The set of states satisfying f.
  StateSet extension(const Formula& f);
  bool holds(StateId w, const Formula& f) { return extension(f).contains(w); }

  // Whether some plan set of agent i is SE on all of U and maps U into T.
  bool kh(std::size_t agent, const StateSet& u, const StateSet& t);
  // Indices into plansets(agent) of every witness for (U, T).
  std::vector<std::size_t> witness_indices(std::size_t agent, const StateSet& u,
                                           const StateSet& t) const;

  struct Summary {
    StateSet se;
    Relation rel;
  };
  const std::vector<Summary>& summaries(std::size_t agent) const { return summaries_[agent]; }

 private:
  const Ults& model_;
  std::vector<std::vector<Summary>> summaries_;
  std::unordered_map<Formula, StateSet> labels_;
  struct KhKey {
    std::size_t agent;
    StateSet u;
    StateSet t;
    friend bool operator==(const KhKey&, const KhKey&) = default;
  };
  struct KhKeyHash {
    std::size_t operator()(const KhKey& k) const {
      return (k.agent * 0x9e3779b97f4a7c15ULL) ^ (k.u.hash() * 31u) ^ k.t.hash();
    }
  };
  std::unordered_map<KhKey, bool, KhKeyHash> kh_memo_;
};

// Labels formulas over an LTS. Kh quantifies over all plans, which is
// decided through the finite behavior closure. Agent labels are ignored.
class LtsChecker {
 public:
  explicit LtsChecker(const Lts& m);

  StateSet extension(const Formula& f);
  bool holds(StateId w, const Formula& f) { return extension(f).contains(w); }
  bool kh(const StateSet& u, const StateSet& t) const;
  // Representative plan of the first closure behavior witnessing (U, T).
  std::optional<Plan> witness(const StateSet& u, const StateSet& t) const;

 private:
  const Lts& model_;
  std::vector<ClosureEntry> closure_;
  std::unordered_map<Formula, StateSet> labels_;
};

bool check_ults(const Ults& m, StateId w, const Formula& f);
bool check_ults(const Ults& m, std::string_view w, const Formula& f);
StateSet extension(const Ults& m, const Formula& f);
bool check_lts(const Lts& m, StateId w, const Formula& f);
bool check_lts(const Lts& m, std::string_view w, const Formula& f);
StateSet extension(const Lts& m, const Formula& f);

// True iff f holds at every state.
bool holds_universally(const Ults& m, const Formula& f);

// Every plan set of agent i witnessing Kh_i(psi, phi), in S_i order.
std::vector<PlanSet> witnesses(const Ults& m, const Agent& i, const Formula& psi,
                               const Formula& phi);

}  // namespace khow

#endif  // KHOW_CHECKER_HPP_
