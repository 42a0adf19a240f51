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

#include "khow/filtration.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"
#include "khow/checker.hpp"

namespace khow {
namespace {

using nlohmann::ordered_json;

std::string class_name(const Lts& b, const std::vector<std::size_t>& state_class, std::size_t c) {
  std::string out = "{";
  bool first = true;
  for (StateId s = 0; s < b.num_states(); ++s) {
    if (state_class[s] != c) continue;
    if (!first) out += ',';
    out += b.state_name(s);
    first = false;
  }
  return out + "}";
}

}  // namespace

std::vector<Formula> sigma_closure(const std::vector<Formula>& formulas) {
  std::vector<Formula> out;
  std::unordered_set<Formula> seen;
  for (const Formula& f : formulas) {
    for (const Formula& g : subformula_closure(f)) {
      if (seen.insert(g).second) out.push_back(g);
    }
  }
  return out;
}

bool is_subformula_closed(const std::vector<Formula>& sigma) {
  const std::unordered_set<Formula> members(sigma.begin(), sigma.end());
  for (const Formula& f : sigma) {
    for (const Formula& c : f.children()) {
      if (!members.count(c)) return false;
    }
  }
  return true;
}

SigmaClasses sigma_classes(const Ults& m, const std::vector<Formula>& sigma) {
  if (!is_subformula_closed(sigma)) {
    throw std::invalid_argument("formula set is not closed under subformulas");
  }
  for (const Formula& f : sigma) {
    for (const Agent& a : agents_of(f)) {
      if (!m.has_agent(a)) throw ModelError("formula set mentions unknown agent '" + a + "'");
    }
  }
  const Lts& b = m.base();
  const std::size_t n = b.num_states();
  Checker checker(m);
  std::vector<StateSet> ext;
  ext.reserve(sigma.size());
  for (const Formula& f : sigma) ext.push_back(checker.extension(f));

  SigmaClasses out;
  out.sigma = sigma;
  std::map<std::vector<bool>, std::size_t> state_ids;
  for (StateId s = 0; s < n; ++s) {
    std::vector<bool> sig;
    for (const StateSet& e : ext) sig.push_back(e.contains(s));
    const auto [it, fresh] = state_ids.emplace(sig, state_ids.size());
    out.state_class.push_back(it->second);
  }
  out.num_state_classes = state_ids.size();

  std::vector<std::pair<StateSet, StateSet>> arg_ext;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (sigma[k].op() != Op::kKh) continue;
    std::pair<Formula, Formula> args{sigma[k].cond(), sigma[k].goal()};
    if (std::find(out.kh_args.begin(), out.kh_args.end(), args) != out.kh_args.end()) continue;
    out.kh_args.push_back(args);
    arg_ext.emplace_back(checker.extension(args.first), checker.extension(args.second));
  }

  std::set<PlanSet> seen;
  std::map<std::vector<bool>, std::size_t> plan_ids;
  for (std::size_t i = 0; i < m.num_agents(); ++i) {
    for (const PlanSet& pi : m.plansets(i)) {
      if (!seen.insert(pi).second) continue;
      const StateSet se = stexec_set(b, pi);
      const Relation rel = rel_of_set(b, pi);
      std::vector<bool> profile;
      for (const auto& [u, t] : arg_ext) {
        profile.push_back(u.subset_of(se) && rel.image(u).subset_of(t));
      }
      const auto [it, fresh] = plan_ids.emplace(profile, plan_ids.size());
      out.plansets.push_back(pi);
      out.plan_class.push_back(it->second);
      out.profiles.push_back(std::move(profile));
    }
  }
  out.num_plan_classes = plan_ids.size();
  return out;
}

Filtration filtrate(const Ults& m, const std::vector<Formula>& sigma) {
  const SigmaClasses sc = sigma_classes(m, sigma);
  const Lts& b = m.base();
  const std::size_t n = b.num_states();

  Lts fb;
  std::vector<StateId> representative(sc.num_state_classes, n);
  for (StateId s = 0; s < n; ++s) {
    if (representative[sc.state_class[s]] == n) representative[sc.state_class[s]] = s;
  }
  for (const Formula& f : sigma) {
    if (f.op() == Op::kAtom && f.name() != kReservedAtom) fb.add_atom(f.name());
  }
  for (std::size_t c = 0; c < sc.num_state_classes; ++c) {
    std::set<std::string> val;
    for (const Formula& f : sigma) {
      if (f.op() == Op::kAtom && b.valuation(representative[c]).count(f.name())) val.insert(f.name());
    }
    fb.add_state(class_name(b, sc.state_class, c), std::move(val));
  }

  // Plan classes that some agent uses as a witness of one of its own Kh
  // formulas, per agent.
  std::vector<std::set<std::size_t>> act_of_agent(m.num_agents());
  for (std::size_t i = 0; i < m.num_agents(); ++i) {
    const Agent& agent = m.agents()[i];
    for (const PlanSet& pi : m.plansets(i)) {
      const std::size_t idx = static_cast<std::size_t>(
          std::find(sc.plansets.begin(), sc.plansets.end(), pi) - sc.plansets.begin());
      for (std::size_t k = 0; k < sc.kh_args.size(); ++k) {
        if (!sc.profiles[idx][k]) continue;
        const Formula kh = Formula::kh(agent, sc.kh_args[k].first, sc.kh_args[k].second);
        if (std::find(sigma.begin(), sigma.end(), kh) != sigma.end()) {
          act_of_agent[i].insert(sc.plan_class[idx]);
          break;
        }
      }
    }
  }

  Filtration filt;
  std::map<std::size_t, ActionId> action_of_class;
  for (const auto& classes : act_of_agent) {
    for (std::size_t c : classes) {
      if (action_of_class.count(c)) continue;
      const ActionId a = fb.add_action("a" + std::to_string(c));
      action_of_class.emplace(c, a);
      filt.action_class.emplace_back(c);
      StateSet guard = b.all_states();
      Relation rel(n);
      for (std::size_t k = 0; k < sc.plansets.size(); ++k) {
        if (sc.plan_class[k] != c) continue;
        guard &= stexec_set(b, sc.plansets[k]);
        rel |= rel_of_set(b, sc.plansets[k]);
      }
      for (StateId w = 0; w < n; ++w) {
        bool whole_class_se = true;
        for (StateId w2 = 0; w2 < n; ++w2) {
          if (sc.state_class[w2] == sc.state_class[w] && !guard.contains(w2)) whole_class_se = false;
        }
        if (!whole_class_se) continue;
        rel.successors(w).for_each([&](StateId v) {
          fb.add_transition(a, sc.state_class[w], sc.state_class[v]);
        });
      }
    }
  }
  std::optional<ActionId> inert;
  for (const auto& classes : act_of_agent) {
    if (classes.empty() && !inert) {
      inert = fb.add_action("a_bot");
      filt.action_class.emplace_back(std::nullopt);
    }
  }

  Ults fm(std::move(fb), m.agents());
  for (std::size_t i = 0; i < m.num_agents(); ++i) {
    for (std::size_t c : act_of_agent[i]) fm.add_planset(i, {{action_of_class.at(c)}});
    if (act_of_agent[i].empty()) fm.add_planset(i, {{*inert}});
  }
  fm.validate();
  filt.model = std::move(fm);
  filt.class_map.assign(sc.state_class.begin(), sc.state_class.end());
  filt.sigma = sigma;
  return filt;
}

std::optional<FiltrationViolation> verify_filtration(const Ults& m, const std::vector<Formula>& sigma,
                                                     const Filtration& filt) {
  const std::size_t n = m.base().num_states();
  const std::size_t nf = filt.model.base().num_states();
  if (filt.class_map.size() != n) {
    return FiltrationViolation{std::nullopt, std::nullopt, "class map does not cover the states"};
  }
  if (sigma.size() < 63 && nf > (std::size_t{1} << sigma.size())) {
    return FiltrationViolation{std::nullopt, std::nullopt,
                               std::to_string(nf) + " states exceed the 2^|sigma| bound"};
  }
  for (StateId w = 0; w < n; ++w) {
    if (filt.class_map[w] >= nf) {
      return FiltrationViolation{std::nullopt, w, "class map points outside the filtrated model"};
    }
  }
  Checker source(m);
  Checker target(filt.model);
  for (const Formula& f : sigma) {
    const StateSet a = source.extension(f);
    const StateSet b = target.extension(f);
    for (StateId w = 0; w < n; ++w) {
      if (a.contains(w) != b.contains(filt.class_map[w])) {
        return FiltrationViolation{f, w,
                                   "'" + print(f) + "' is " + (a.contains(w) ? "true" : "false") +
                                       " at " + m.base().state_name(w) + " but not at its class"};
      }
    }
  }
  return std::nullopt;
}

std::string dump_filtration(const Ults& source, const Filtration& filt) {
  ordered_json doc = ordered_json::parse(dump_model(filt.model));
  ordered_json map = ordered_json::object();
  for (StateId w = 0; w < filt.class_map.size(); ++w) {
    map[source.base().state_name(w)] = filt.model.base().state_name(filt.class_map[w]);
  }
  doc["class_map"] = std::move(map);
  ordered_json sigma = ordered_json::array();
  for (const Formula& f : filt.sigma) sigma.push_back(print(f));
  doc["sigma"] = std::move(sigma);
  return doc.dump(2);
}

}  // namespace khow
