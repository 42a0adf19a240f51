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

#include "khow/model.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace khow {

StateId Lts::add_state(std::string name, std::set<std::string> valuation) {
  if (find_state(name)) throw ModelError("duplicate state '" + name + "'");
  for (const auto& p : valuation) atoms_.insert(p);
  names_.push_back(std::move(name));
  valuations_.push_back(std::move(valuation));
  // Relations are dense over the state count; widen them.
  for (auto& r : relations_) {
    if (!r) continue;
    Relation wider(num_states());
    for (StateId s = 0; s + 1 < num_states(); ++s) {
      r->successors(s).for_each([&](StateId t) { wider.insert(s, t); });
    }
    r = std::move(wider);
  }
  return names_.size() - 1;
}

ActionId Lts::add_action(std::string name, bool defined) {
  if (find_action(name)) throw ModelError("duplicate action '" + name + "'");
  action_names_.push_back(std::move(name));
  relations_.push_back(defined ? std::optional<Relation>(Relation(num_states())) : std::nullopt);
  return action_names_.size() - 1;
}

void Lts::add_transition(ActionId a, StateId from, StateId to) {
  if (a >= num_actions()) throw ModelError("unknown action index");
  if (from >= num_states() || to >= num_states()) throw ModelError("unknown state index");
  if (!relations_[a]) relations_[a] = Relation(num_states());
  relations_[a]->insert(from, to);
}

std::optional<StateId> Lts::find_state(std::string_view name) const {
  for (StateId s = 0; s < names_.size(); ++s) {
    if (names_[s] == name) return s;
  }
  return std::nullopt;
}

std::optional<ActionId> Lts::find_action(std::string_view name) const {
  for (ActionId a = 0; a < action_names_.size(); ++a) {
    if (action_names_[a] == name) return a;
  }
  return std::nullopt;
}

StateId Lts::state(std::string_view name) const {
  if (auto s = find_state(name)) return *s;
  throw ModelError("unknown state '" + std::string(name) + "'");
}

ActionId Lts::action(std::string_view name) const {
  if (auto a = find_action(name)) return *a;
  throw ModelError("unknown action '" + std::string(name) + "'");
}

StateSet Lts::truth(std::string_view atom) const {
  StateSet out(num_states());
  const std::string key(atom);
  for (StateId s = 0; s < num_states(); ++s) {
    if (valuations_[s].count(key)) out.insert(s);
  }
  return out;
}

std::string Lts::plan_name(const Plan& plan) const {
  std::string out = "[";
  for (std::size_t k = 0; k < plan.size(); ++k) {
    if (k) out += ',';
    out += action_names_[plan[k]];
  }
  return out + "]";
}

Ults::Ults(Lts base, AgentSet agents)
    : base_(std::move(base)), agents_(std::move(agents)), plansets_(agents_.size()) {}

std::size_t Ults::agent_index(const Agent& agent) const {
  auto it = std::find(agents_.begin(), agents_.end(), agent);
  if (it == agents_.end()) throw ModelError("unknown agent '" + agent + "'");
  return static_cast<std::size_t>(it - agents_.begin());
}

bool Ults::has_agent(const Agent& agent) const {
  return std::find(agents_.begin(), agents_.end(), agent) != agents_.end();
}

void Ults::add_planset(std::size_t i, PlanSet pi) {
  plansets_.at(i).push_back(normalize(std::move(pi)));
}

void Ults::validate() const {
  if (base_.num_states() == 0) throw ModelError("model has no states");
  if (agents_.empty()) throw ModelError("empty agent set");
  std::set<Agent> seen(agents_.begin(), agents_.end());
  if (seen.size() != agents_.size()) throw ModelError("duplicate agent");
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const auto& s = plansets_[i];
    if (s.empty()) throw ModelError("agent '" + agents_[i] + "' has no plan sets");
    std::set<Plan> used;
    for (const PlanSet& pi : s) {
      if (pi.empty()) throw ModelError("empty plan set for agent '" + agents_[i] + "'");
      for (const Plan& plan : pi) {
        for (ActionId a : plan) {
          if (a >= base_.num_actions()) throw ModelError("plan uses unknown action");
        }
        if (!used.insert(plan).second) {
          throw ModelError("plan sets of agent '" + agents_[i] + "' are not pairwise disjoint");
        }
      }
    }
  }
}

PlanSet normalize(PlanSet pi) {
  std::sort(pi.begin(), pi.end());
  pi.erase(std::unique(pi.begin(), pi.end()), pi.end());
  return pi;
}

std::optional<Relation> rel_of_plan(const Lts& m, const Plan& sigma) {
  Relation r = Relation::identity(m.num_states());
  for (ActionId a : sigma) {
    if (a >= m.num_actions() || !m.defined(a)) return std::nullopt;
    r = r.then(*m.relation(a));
  }
  return r;
}

StateSet stexec_plan(const Lts& m, const Plan& sigma) {
  // Backwards: SE(a tau) = { u : R_a(u) nonempty and R_a(u) within SE(tau) }.
  StateSet se = m.all_states();
  for (auto it = sigma.rbegin(); it != sigma.rend(); ++it) {
    if (*it >= m.num_actions() || !m.defined(*it)) return StateSet(m.num_states());
    const Relation& r = *m.relation(*it);
    StateSet next(m.num_states());
    for (StateId u = 0; u < m.num_states(); ++u) {
      const StateSet& succ = r.successors(u);
      if (!succ.empty() && succ.subset_of(se)) next.insert(u);
    }
    se = std::move(next);
  }
  return se;
}

StateSet stexec_set(const Lts& m, const PlanSet& pi) {
  if (pi.empty()) throw ModelError("empty plan set");
  StateSet se = m.all_states();
  for (const Plan& sigma : pi) se &= stexec_plan(m, sigma);
  return se;
}

Relation rel_of_set(const Lts& m, const PlanSet& pi) {
  Relation r(m.num_states());
  for (const Plan& sigma : pi) {
    if (auto rs = rel_of_plan(m, sigma)) r |= *rs;
  }
  return r;
}

PlanBehavior identity_behavior(std::size_t num_states) {
  return {Relation::identity(num_states), StateSet::full(num_states)};
}

PlanBehavior behavior(const Lts& m, const Plan& sigma) {
  StateSet se = stexec_plan(m, sigma);
  auto rel = rel_of_plan(m, sigma);
  if (!rel) return {Relation(m.num_states()), std::move(se)};
  return {rel->restrict_sources(se), std::move(se)};
}

PlanBehavior behavior_compose(const PlanBehavior& first, const PlanBehavior& second) {
  StateSet se(first.se.universe());
  first.se.for_each([&](StateId u) {
    if (first.rel.successors(u).subset_of(second.se)) se.insert(u);
  });
  Relation rel = first.rel.restrict_sources(se).then(second.rel);
  return {std::move(rel), std::move(se)};
}

std::vector<ClosureEntry> behavior_closure(const Lts& m) {
  std::vector<ClosureEntry> out;
  std::unordered_set<PlanBehavior, PlanBehaviorHash> seen;
  std::vector<std::pair<ActionId, PlanBehavior>> basics;
  for (ActionId a = 0; a < m.num_actions(); ++a) {
    if (m.defined(a)) basics.emplace_back(a, behavior(m, {a}));
  }
  out.push_back({identity_behavior(m.num_states()), {}});
  seen.insert(out.front().behavior);
  for (std::size_t next = 0; next < out.size(); ++next) {
    for (const auto& [a, basic] : basics) {
      PlanBehavior b = behavior_compose(out[next].behavior, basic);
      if (seen.count(b)) continue;
      Plan rep = out[next].representative;
      rep.push_back(a);
      seen.insert(b);
      out.push_back({std::move(b), std::move(rep)});
    }
  }
  return out;
}

}  // namespace khow
