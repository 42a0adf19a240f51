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

#include "khow/checker.hpp"

namespace khow {

namespace {

// Fills `labels` for every member of the closure of the core formula f.
// kh(g, cond, goal) decides a Kh node given its argument extensions.
template <typename KhFn>
const StateSet& label(const Lts& base, const Formula& f,
                      std::unordered_map<Formula, StateSet>& labels, KhFn&& kh) {
  if (auto it = labels.find(f); it != labels.end()) return it->second;
  const std::size_t n = base.num_states();
  for (const Formula& g : subformula_closure(f)) {
    if (labels.count(g)) continue;
    StateSet out(n);
    switch (g.op()) {
      case Op::kAtom:
        out = base.truth(g.name());
        break;
      case Op::kNeg:
        out = labels.at(g.lhs()).complement();
        break;
      case Op::kOr:
        out = labels.at(g.lhs()) | labels.at(g.rhs());
        break;
      case Op::kKh:
        if (kh(g, labels.at(g.cond()), labels.at(g.goal()))) out = StateSet::full(n);
        break;
      default:
        throw std::logic_error("labeling reached a sugared node");
    }
    labels.emplace(g, std::move(out));
  }
  return labels.at(f);
}

}  // namespace

Checker::Checker(const Ults& m) : model_(m), summaries_(m.num_agents()) {
  for (std::size_t i = 0; i < m.num_agents(); ++i) {
    for (const PlanSet& pi : m.plansets(i)) {
      summaries_[i].push_back({stexec_set(m.base(), pi), rel_of_set(m.base(), pi)});
    }
  }
}

StateSet Checker::extension(const Formula& f) {
  const Formula core = f.is_core() ? f : desugar(f, model_.agents());
  return label(model_.base(), core, labels_,
               [&](const Formula& g, const StateSet& u, const StateSet& t) {
                 return kh(model_.agent_index(g.agent()), u, t);
               });
}

bool Checker::kh(std::size_t agent, const StateSet& u, const StateSet& t) {
  KhKey key{agent, u, t};
  if (auto it = kh_memo_.find(key); it != kh_memo_.end()) return it->second;
  bool found = false;
  for (const Summary& s : summaries_[agent]) {
    if (u.subset_of(s.se) && s.rel.image(u).subset_of(t)) {
      found = true;
      break;
    }
  }
  kh_memo_.emplace(std::move(key), found);
  return found;
}

std::vector<std::size_t> Checker::witness_indices(std::size_t agent, const StateSet& u,
                                                  const StateSet& t) const {
  std::vector<std::size_t> out;
  const auto& sums = summaries_[agent];
  for (std::size_t k = 0; k < sums.size(); ++k) {
    if (u.subset_of(sums[k].se) && sums[k].rel.image(u).subset_of(t)) out.push_back(k);
  }
  return out;
}

LtsChecker::LtsChecker(const Lts& m) : model_(m), closure_(behavior_closure(m)) {}

StateSet LtsChecker::extension(const Formula& f) {
  // A single modality; any agent label stands for it.
  static const AgentSet kOneAgent{"1"};
  const Formula core = f.is_core() ? f : desugar(f, kOneAgent);
  return label(model_, core, labels_,
               [&](const Formula&, const StateSet& u, const StateSet& t) { return kh(u, t); });
}

bool LtsChecker::kh(const StateSet& u, const StateSet& t) const {
  return witness(u, t).has_value();
}

std::optional<Plan> LtsChecker::witness(const StateSet& u, const StateSet& t) const {
  for (const ClosureEntry& e : closure_) {
    if (u.subset_of(e.behavior.se) && e.behavior.rel.image(u).subset_of(t)) {
      return e.representative;
    }
  }
  return std::nullopt;
}

namespace {

void check_agents(const Ults& m, const Formula& f) {
  for (const Agent& a : agents_of(f)) {
    if (!m.has_agent(a)) throw ModelError("unknown agent '" + a + "'");
  }
}

void check_state(std::size_t num_states, StateId w) {
  if (w >= num_states) throw ModelError("unknown state index " + std::to_string(w));
}

}  // namespace

bool check_ults(const Ults& m, StateId w, const Formula& f) {
  check_state(m.base().num_states(), w);
  return extension(m, f).contains(w);
}

bool check_ults(const Ults& m, std::string_view w, const Formula& f) {
  return check_ults(m, m.base().state(w), f);
}

StateSet extension(const Ults& m, const Formula& f) {
  check_agents(m, f);
  return Checker(m).extension(f);
}

bool check_lts(const Lts& m, StateId w, const Formula& f) {
  check_state(m.num_states(), w);
  return extension(m, f).contains(w);
}

bool check_lts(const Lts& m, std::string_view w, const Formula& f) {
  return check_lts(m, m.state(w), f);
}

StateSet extension(const Lts& m, const Formula& f) { return LtsChecker(m).extension(f); }

bool holds_universally(const Ults& m, const Formula& f) {
  const StateSet ext = extension(m, f);
  return ext.count() == m.base().num_states();
}

std::vector<PlanSet> witnesses(const Ults& m, const Agent& i, const Formula& psi,
                               const Formula& phi) {
  check_agents(m, psi);
  check_agents(m, phi);
  const std::size_t agent = m.agent_index(i);
  Checker checker(m);
  std::vector<PlanSet> out;
  for (std::size_t k :
       checker.witness_indices(agent, checker.extension(psi), checker.extension(phi))) {
    out.push_back(m.plansets(agent)[k]);
  }
  return out;
}

}  // namespace khow
