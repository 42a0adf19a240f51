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

#ifndef KHOW_TESTS_FIXTURES_HPP_
#define KHOW_TESTS_FIXTURES_HPP_

#include <string>

#include "khow/model.hpp"

namespace khow::testing {

inline std::string data_path(const std::string& file) {
  return std::string(KHOW_DATA_DIR) + "/" + file;
}

// Four states w{p}, u{q}, v_r{r}, x{}; a: w->u, b: u->v_r, c: w->x;
// one agent with S = {{a}, {b}, {ab, c}}. Kh(p,q) and Kh(q,r) hold but
// Kh(p,r) and Kh(p,p) do not.
inline Ults emp_fail() { return std::get<Ults>(load_model(data_path("emp-fail.json"))); }

inline StateSet states(const Lts& m, std::initializer_list<const char*> names) {
  StateSet out(m.num_states());
  for (const char* n : names) out.insert(m.state(n));
  return out;
}

inline Plan plan(const Lts& m, std::initializer_list<const char*> names) {
  Plan out;
  for (const char* n : names) out.push_back(m.action(n));
  return out;
}

// Copy of m with an extra state that mirrors s: same valuation, same
// successors, and every edge into s also enters the copy. Equivalent to m.
inline Ults with_duplicate_state(const Ults& m, StateId s) {
  const Lts& b = m.base();
  Lts out;
  for (const auto& p : b.atoms()) out.add_atom(p);
  for (StateId t = 0; t < b.num_states(); ++t) out.add_state(b.state_name(t), b.valuation(t));
  const StateId copy = out.add_state(b.state_name(s) + "_copy", b.valuation(s));
  auto mirror = [&](StateId t) { return t == s ? copy : t; };
  for (ActionId a = 0; a < b.num_actions(); ++a) {
    out.add_action(b.action_name(a), b.defined(a));
    if (!b.defined(a)) continue;
    for (StateId t = 0; t < b.num_states(); ++t) {
      b.relation(a)->successors(t).for_each([&](StateId v) {
        out.add_transition(a, t, v);
        out.add_transition(a, mirror(t), v);
        out.add_transition(a, t, mirror(v));
        out.add_transition(a, mirror(t), mirror(v));
      });
    }
  }
  Ults u(std::move(out), m.agents());
  for (std::size_t i = 0; i < m.num_agents(); ++i) {
    for (const PlanSet& pi : m.plansets(i)) u.add_planset(i, pi);
  }
  return u;
}

// Copy of m with states renumbered: old state t becomes perm[t].
inline Ults permuted(const Ults& m, const std::vector<StateId>& perm) {
  const Lts& b = m.base();
  std::vector<StateId> inverse(perm.size());
  for (StateId t = 0; t < perm.size(); ++t) inverse[perm[t]] = t;
  Lts out;
  for (const auto& p : b.atoms()) out.add_atom(p);
  for (StateId t = 0; t < b.num_states(); ++t) {
    out.add_state(b.state_name(inverse[t]), b.valuation(inverse[t]));
  }
  for (ActionId a = 0; a < b.num_actions(); ++a) {
    out.add_action(b.action_name(a), b.defined(a));
    if (!b.defined(a)) continue;
    for (StateId t = 0; t < b.num_states(); ++t) {
      b.relation(a)->successors(t).for_each(
          [&](StateId v) { out.add_transition(a, perm[t], perm[v]); });
    }
  }
  Ults u(std::move(out), m.agents());
  for (std::size_t i = 0; i < m.num_agents(); ++i) {
    for (const PlanSet& pi : m.plansets(i)) u.add_planset(i, pi);
  }
  return u;
}

}  // namespace khow::testing

#endif  // KHOW_TESTS_FIXTURES_HPP_
