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

#include "khow/transform.hpp"

#include <set>
#include <stdexcept>

#include "khow/bisim.hpp"

namespace khow {
namespace {

void require_single_agent(const Ults& m) {
  if (m.num_agents() != 1) {
    throw ModelError("model-class tests and translations need a single-agent model, got " +
                     std::to_string(m.num_agents()) + " agents");
  }
}

StateSet se_or_empty(const Lts& m, const PlanSet& pi) {
  return pi.empty() ? StateSet(m.num_states()) : stexec_set(m, pi);
}

// Pairwise bisimilarity of the states of one model.
class BisimTable {
 public:
  explicit BisimTable(const Ults& m) : n_(m.base().num_states()), same_(n_ * n_, false) {
    for (StateId u = 0; u < n_; ++u) {
      same_[u * n_ + u] = true;
      for (StateId v = u + 1; v < n_; ++v) {
        const bool b = bisimilar(m, u, m, v).bisimilar;
        same_[u * n_ + v] = b;
        same_[v * n_ + u] = b;
      }
    }
  }
  bool operator()(StateId u, StateId v) const { return same_[u * n_ + v]; }

 private:
  std::size_t n_;
  std::vector<bool> same_;
};

bool edges_bisim_related(const Relation& r, const Relation& target, const BisimTable& bis) {
  const std::size_t n = r.universe();
  for (StateId w = 0; w < n; ++w) {
    for (StateId v : r.successors(w).members()) {
      bool found = false;
      for (StateId w2 = 0; w2 < n && !found; ++w2) {
        if (!bis(w, w2)) continue;
        target.successors(w2).for_each([&](StateId v2) {
          if (bis(v, v2)) found = true;
        });
      }
      if (!found) return false;
    }
  }
  return true;
}

bool active_impl(const Ults& m, const BisimTable& bis, std::size_t* witness) {
  const Lts& b = m.base();
  const auto& s = m.plansets(0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (stexec_set(b, s[k]) != b.all_states()) continue;
    const Relation r = rel_of_set(b, s[k]);
    bool ok = true;
    for (StateId u = 0; u < b.num_states() && ok; ++u) {
      r.successors(u).for_each([&](StateId v) {
        if (!bis(u, v)) ok = false;
      });
    }
    if (ok) {
      if (witness) *witness = k;
      return true;
    }
  }
  return false;
}

// Fills witnesses for every composable pair; returns the first pair that has
// none.
std::optional<std::pair<std::size_t, std::size_t>> compositional_impl(
    const Ults& m, const BisimTable& bis,
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>>* witnesses) {
  const Lts& b = m.base();
  const auto& s = m.plansets(0);
  std::vector<StateSet> se;
  std::vector<Relation> rel;
  for (const PlanSet& pi : s) {
    se.push_back(stexec_set(b, pi));
    rel.push_back(rel_of_set(b, pi));
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      const PlanSet comp = se_compose(b, s[i], s[j]);
      if (comp.empty()) continue;
      const StateSet comp_se = stexec_set(b, comp);
      const Relation comp_rel = rel_of_set(b, comp);
      std::optional<std::size_t> cover;
      for (std::size_t k = 0; k < s.size() && !cover; ++k) {
        if (comp_rel.subset_of(rel[k]) && comp_se.subset_of(se[k]) &&
            edges_bisim_related(rel[k], comp_rel, bis)) {
          cover = k;
        }
      }
      if (!cover) return std::make_pair(i, j);
      if (witnesses) witnesses->push_back({{i, j}, *cover});
    }
  }
  return std::nullopt;
}

}  // namespace

PlanSet se_compose(const Lts& m, const PlanSet& pi1, const PlanSet& pi2) {
  const StateSet se1 = se_or_empty(m, pi1);
  if (se1.empty()) return {};
  if (!rel_of_set(m, pi1).image(se1).subset_of(se_or_empty(m, pi2))) return {};
  PlanSet out;
  for (const Plan& s1 : pi1) {
    for (const Plan& s2 : pi2) {
      Plan p = s1;
      p.insert(p.end(), s2.begin(), s2.end());
      out.push_back(std::move(p));
    }
  }
  return normalize(std::move(out));
}

PlanSet se_compose_chain(const Lts& m, const std::vector<PlanSet>& chain) {
  if (chain.empty()) throw std::invalid_argument("se_compose_chain needs at least one plan set");
  // The guard is checked pairwise on the original sets, not on the growing
  // prefix.
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    if (se_compose(m, chain[k], chain[k + 1]).empty()) return {};
  }
  PlanSet out = normalize(chain.front());
  for (std::size_t k = 1; k < chain.size(); ++k) {
    PlanSet next;
    for (const Plan& s1 : out) {
      for (const Plan& s2 : chain[k]) {
        Plan p = s1;
        p.insert(p.end(), s2.begin(), s2.end());
        next.push_back(std::move(p));
      }
    }
    out = normalize(std::move(next));
  }
  return out;
}

bool is_active(const Ults& m, std::size_t* witness) {
  require_single_agent(m);
  return active_impl(m, BisimTable(m), witness);
}

bool is_se_compositional(const Ults& m, std::pair<std::size_t, std::size_t>* counterexample) {
  require_single_agent(m);
  const auto bad = compositional_impl(m, BisimTable(m), nullptr);
  if (bad && counterexample) *counterexample = *bad;
  return !bad;
}

bool is_nu_style(const Ults& m) {
  require_single_agent(m);
  std::set<PlanBehavior> offered;
  for (const PlanSet& pi : m.plansets(0)) {
    if (pi.size() != 1) return false;
    offered.insert(behavior(m.base(), pi.front()));
  }
  for (const ClosureEntry& e : behavior_closure(m.base())) {
    if (!offered.count(e.behavior)) return false;
  }
  return true;
}

ClassReport classify(const Ults& m) {
  require_single_agent(m);
  const BisimTable bis(m);
  ClassReport r;
  r.is_nu_style = is_nu_style(m);
  std::size_t w = 0;
  r.is_active = active_impl(m, bis, &w);
  if (r.is_active) r.active_witness = w;
  r.composition_counterexample = compositional_impl(m, bis, &r.composition_witnesses);
  r.is_se_compositional = !r.composition_counterexample.has_value();
  if (!r.is_active) {
    r.explanation = "not active: no plan set is SE everywhere and moves only between bisimilar states";
  } else if (!r.is_se_compositional) {
    const auto [i, j] = *r.composition_counterexample;
    r.explanation = "not SE-compositional: no plan set covers the SE-composition of plan sets " +
                    std::to_string(i) + " and " + std::to_string(j);
  } else {
    r.explanation = "active and SE-compositional";
  }
  return r;
}

Ults lts_to_ults_nu(const Lts& m) {
  Ults out(m, {kDefaultAgent});
  for (const ClosureEntry& e : behavior_closure(m)) out.add_planset(0, {e.representative});
  out.validate();
  return out;
}

Ults lts_to_ults_ac(const Lts& m) {
  Lts base;
  for (const std::string& atom : m.atoms()) base.add_atom(atom);
  for (StateId s = 0; s < m.num_states(); ++s) base.add_state(m.state_name(s), m.valuation(s));
  std::vector<ActionId> actions;
  for (const ClosureEntry& e : behavior_closure(m)) {
    if (e.behavior.se.empty()) continue;
    const ActionId a = base.add_action(m.plan_name(e.representative));
    for (StateId u = 0; u < m.num_states(); ++u) {
      e.behavior.rel.successors(u).for_each([&](StateId v) { base.add_transition(a, u, v); });
    }
    actions.push_back(a);
  }
  Ults out(std::move(base), {kDefaultAgent});
  for (ActionId a : actions) out.add_planset(0, {{a}});
  out.validate();
  return out;
}

Lts ults_to_lts(const Ults& m) {
  const ClassReport report = classify(m);
  if (!report.is_active || !report.is_se_compositional) {
    throw ModelError("model is outside the active SE-compositional class: " + report.explanation);
  }
  const Lts& b = m.base();
  Lts out;
  for (const std::string& atom : b.atoms()) out.add_atom(atom);
  for (StateId s = 0; s < b.num_states(); ++s) out.add_state(b.state_name(s), b.valuation(s));
  for (const PlanSet& pi : m.plansets(0)) {
    std::string name = "{";
    for (std::size_t k = 0; k < pi.size(); ++k) {
      if (k) name += ',';
      name += b.plan_name(pi[k]);
    }
    const ActionId a = out.add_action(name + "}");
    const Relation r = rel_of_set(b, pi).restrict_sources(stexec_set(b, pi));
    for (StateId u = 0; u < b.num_states(); ++u) {
      r.successors(u).for_each([&](StateId v) { out.add_transition(a, u, v); });
    }
  }
  return out;
}

}  // namespace khow
