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

// Finite labeled transition systems, their uncertainty-based extension,
// plans, strong executability and plan behaviors.
//
// States and actions are dense indices in file order. An action may be
// declared without a relation; plans using it have an undefined relation
// and are strongly executable nowhere.

#ifndef KHOW_MODEL_HPP_
#define KHOW_MODEL_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "khow/state_set.hpp"
#include "khow/syntax.hpp"

namespace khow {

using ActionId = std::size_t;
// A finite action sequence; the empty plan is the vector {}.
using Plan = std::vector<ActionId>;
// Sorted, duplicate-free, nonempty inside a valid Ults.
using PlanSet = std::vector<Plan>;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Lts {
 public:
  Lts() = default;

  StateId add_state(std::string name, std::set<std::string> valuation = {});
  // Declares an action. With `defined` false no relation exists until the
  // first transition is added.
  ActionId add_action(std::string name, bool defined = true);
  void add_transition(ActionId a, StateId from, StateId to);
  // Declares an atom that may be false everywhere.
  void add_atom(std::string name) { atoms_.insert(std::move(name)); }

  std::size_t num_states() const { return names_.size(); }
  std::size_t num_actions() const { return action_names_.size(); }
  const std::string& state_name(StateId s) const { return names_[s]; }
  const std::string& action_name(ActionId a) const { return action_names_[a]; }
  const std::set<std::string>& valuation(StateId s) const { return valuations_[s]; }
  const std::set<std::string>& atoms() const { return atoms_; }

  std::optional<StateId> find_state(std::string_view name) const;
  std::optional<ActionId> find_action(std::string_view name) const;
  StateId state(std::string_view name) const;    // throws ModelError
  ActionId action(std::string_view name) const;  // throws ModelError

  bool defined(ActionId a) const { return relations_[a].has_value(); }
  const std::optional<Relation>& relation(ActionId a) const { return relations_[a]; }

  StateSet all_states() const { return StateSet::full(num_states()); }
  StateSet truth(std::string_view atom) const;

  std::string plan_name(const Plan& plan) const;

  friend bool operator==(const Lts&, const Lts&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::set<std::string>> valuations_;
  std::set<std::string> atoms_;
  std::vector<std::string> action_names_;
  std::vector<std::optional<Relation>> relations_;
};

class Ults {
 public:
  Ults() = default;
  Ults(Lts base, AgentSet agents);

  const Lts& base() const { return base_; }
  Lts& mutable_base() { return base_; }
  const AgentSet& agents() const { return agents_; }
  std::size_t num_agents() const { return agents_.size(); }
  std::size_t agent_index(const Agent& agent) const;  // throws ModelError
  bool has_agent(const Agent& agent) const;

  // S_i for agent index i.
  const std::vector<PlanSet>& plansets(std::size_t i) const { return plansets_[i]; }
  const std::vector<PlanSet>& plansets(const Agent& agent) const {
    return plansets_[agent_index(agent)];
  }
  // Adds a plan set (normalized) to S_i; validity is checked by validate().
  void add_planset(std::size_t i, PlanSet pi);

  // Throws ModelError naming the first violated well-formedness property.
  void validate() const;

  friend bool operator==(const Ults&, const Ults&) = default;

 private:
  Lts base_;
  AgentSet agents_;
  std::vector<std::vector<PlanSet>> plansets_;
};

using Model = std::variant<Lts, Ults>;

PlanSet normalize(PlanSet pi);

// R_sigma, or nullopt when some action of the plan has no relation.
std::optional<Relation> rel_of_plan(const Lts& m, const Plan& sigma);
// States where every partial execution of sigma can be continued.
StateSet stexec_plan(const Lts& m, const Plan& sigma);
// Intersection over the members; throws ModelError on an empty set.
StateSet stexec_set(const Lts& m, const PlanSet& pi);
// Union of the defined member relations.
Relation rel_of_set(const Lts& m, const PlanSet& pi);

// (R_sigma restricted to SE(sigma), SE(sigma)).
struct PlanBehavior {
  Relation rel;
  StateSet se;

  std::size_t hash() const { return rel.hash() * 31u ^ se.hash(); }
  friend bool operator==(const PlanBehavior&, const PlanBehavior&) = default;
  friend auto operator<=>(const PlanBehavior&, const PlanBehavior&) = default;
};

struct PlanBehaviorHash {
  std::size_t operator()(const PlanBehavior& b) const { return b.hash(); }
};

PlanBehavior identity_behavior(std::size_t num_states);
PlanBehavior behavior(const Lts& m, const Plan& sigma);
PlanBehavior behavior_compose(const PlanBehavior& first, const PlanBehavior& second);

struct ClosureEntry {
  PlanBehavior behavior;
  // Shortest, then lexicographically least (by action index) plan with
  // this behavior.
  Plan representative;
};

// Every behavior realized by some plan over the defined actions, in
// breadth-first discovery order starting with the empty plan.
std::vector<ClosureEntry> behavior_closure(const Lts& m);

// Model files. The format is documented in the README.
Model parse_model(std::string_view json_text);
Model load_model(const std::string& path);
std::string dump_model(const Model& m);
void save_model(const Model& m, const std::string& path);

}  // namespace khow

#endif  // KHOW_MODEL_HPP_
