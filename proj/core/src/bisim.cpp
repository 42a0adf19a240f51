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

#include "khow/bisim.hpp"

#include <algorithm>
#include <map>

#include "khow/checker.hpp"

namespace khow {

const char* clause_name(Clause c) {
  switch (c) {
    case Clause::kAtom:
      return "Atom";
    case Clause::kKhZig:
      return "Kh-Zig";
    case Clause::kKhZag:
      return "Kh-Zag";
    case Clause::kAZig:
      return "A-Zig";
    case Clause::kAZag:
      return "A-Zag";
  }
  return "?";
}

namespace {

using Valuation = std::set<std::string>;

// Valuation classes of one model in order of first occurrence.
struct Classes {
  std::vector<Valuation> valuation;
  std::vector<StateSet> members;
  std::vector<std::size_t> of_state;

  explicit Classes(const Lts& m) : of_state(m.num_states()) {
    for (StateId s = 0; s < m.num_states(); ++s) {
      auto it = std::find(valuation.begin(), valuation.end(), m.valuation(s));
      if (it == valuation.end()) {
        valuation.push_back(m.valuation(s));
        members.emplace_back(m.num_states());
        it = valuation.end() - 1;
      }
      const auto c = static_cast<std::size_t>(it - valuation.begin());
      members[c].insert(s);
      of_state[s] = c;
    }
    if (valuation.size() > kMaxValuationClasses) {
      throw ModelError("model realizes " + std::to_string(valuation.size()) +
                       " valuations; at most " + std::to_string(kMaxValuationClasses) +
                       " are supported");
    }
  }

  std::size_t size() const { return valuation.size(); }

  StateSet states_of(std::uint32_t mask, std::size_t n) const {
    StateSet out(n);
    for (std::size_t c = 0; c < size(); ++c) {
      if (mask >> c & 1u) out |= members[c];
    }
    return out;
  }
};

// Index of every agent of m in m2.
std::vector<std::size_t> match_agents(const Ults& m, const Ults& m2) {
  std::set<Agent> a(m.agents().begin(), m.agents().end());
  std::set<Agent> b(m2.agents().begin(), m2.agents().end());
  if (a != b) throw ModelError("models have different agent sets");
  std::vector<std::size_t> out;
  for (const Agent& i : m.agents()) out.push_back(m2.agent_index(i));
  return out;
}

StateSet image(const BisimRelation& z, const StateSet& u, std::size_t n2) {
  StateSet out(n2);
  for (const auto& [a, b] : z) {
    if (u.contains(a)) out.insert(b);
  }
  return out;
}

StateSet preimage(const BisimRelation& z, const StateSet& u2, std::size_t n) {
  StateSet out(n);
  for (const auto& [a, b] : z) {
    if (u2.contains(b)) out.insert(a);
  }
  return out;
}

bool executes(const std::vector<Checker::Summary>& s, const StateSet& u, const StateSet& t) {
  return std::any_of(s.begin(), s.end(), [&](const Checker::Summary& x) {
    return u.subset_of(x.se) && x.rel.image(u).subset_of(t);
  });
}

// One direction of the Kh clauses: every minimal image on side `a` must be
// matched on side `b` through `to_b`.
template <typename MapFn>
std::optional<Violation> check_zig(const Ults& a, const Ults& b,
                                   const std::vector<std::size_t>& agent_map, MapFn&& to_b,
                                   Clause clause) {
  const Classes classes(a.base());
  const std::size_t n = a.base().num_states();
  const Checker ca(a);
  const Checker cb(b);
  for (std::size_t i = 0; i < a.num_agents(); ++i) {
    const auto& sa = ca.summaries(i);
    const auto& sb = cb.summaries(agent_map[i]);
    for (std::uint32_t mask = 0; mask < (1u << classes.size()); ++mask) {
      const StateSet u = classes.states_of(mask, n);
      const StateSet zu = to_b(u);
      for (std::size_t k = 0; k < sa.size(); ++k) {
        if (!u.subset_of(sa[k].se)) continue;
        const StateSet t0 = sa[k].rel.image(u);
        if (!executes(sb, zu, to_b(t0))) {
          Violation v{clause};
          v.agent = i;
          v.u = u;
          v.t = t0;
          v.planset = k;
          return v;
        }
      }
    }
  }
  return std::nullopt;
}

bool is_union_of_classes(const Lts& m, const StateSet& u) {
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (StateId t = 0; t < m.num_states(); ++t) {
      if (m.valuation(s) == m.valuation(t) && u.contains(s) != u.contains(t)) return false;
    }
  }
  return true;
}

// Minimal image masks (over a shared valuation index) per agent and U.
using Profile = std::vector<std::vector<std::vector<std::uint32_t>>>;

Profile build_profile(const Ults& m, const std::vector<Valuation>& index,
                      const std::vector<std::size_t>& agent_order) {
  const Lts& base = m.base();
  const std::size_t n = base.num_states();
  std::vector<std::size_t> class_of(n);
  for (StateId s = 0; s < n; ++s) {
    class_of[s] = static_cast<std::size_t>(
        std::find(index.begin(), index.end(), base.valuation(s)) - index.begin());
  }
  const Checker checker(m);
  Profile out;
  for (std::size_t i : agent_order) {
    const auto& sums = checker.summaries(i);
    auto& per_agent = out.emplace_back();
    for (std::uint32_t mask = 0; mask < (1u << index.size()); ++mask) {
      StateSet u(n);
      for (StateId s = 0; s < n; ++s) {
        if (mask >> class_of[s] & 1u) u.insert(s);
      }
      std::vector<std::uint32_t> images;
      for (const auto& sum : sums) {
        if (!u.subset_of(sum.se)) continue;
        std::uint32_t img = 0;
        sum.rel.image(u).for_each([&](StateId v) { img |= 1u << class_of[v]; });
        images.push_back(img);
      }
      // Keep only the subset-minimal images.
      std::sort(images.begin(), images.end());
      images.erase(std::unique(images.begin(), images.end()), images.end());
      std::vector<std::uint32_t> minimal;
      for (std::uint32_t x : images) {
        const bool dominated = std::any_of(images.begin(), images.end(), [&](std::uint32_t y) {
          return y != x && (y & ~x) == 0;
        });
        if (!dominated) minimal.push_back(x);
      }
      per_agent.push_back(std::move(minimal));
    }
  }
  return out;
}

std::string describe(const Valuation& v) {
  std::string out = "{";
  for (const auto& p : v) out += (out.size() > 1 ? "," : "") + p;
  return out + "}";
}

// First point-independent difference between the models, if any.
std::optional<std::string> global_difference(const Ults& m, const Ults& m2) {
  const auto agent_map = match_agents(m, m2);
  const auto r1 = realized_valuations(m);
  const auto r2 = realized_valuations(m2);
  if (r1 != r2) {
    for (const auto& v : r1) {
      if (!r2.count(v)) return "valuation " + describe(v) + " is realized only in the first model";
    }
    for (const auto& v : r2) {
      if (!r1.count(v)) return "valuation " + describe(v) + " is realized only in the second model";
    }
  }
  const std::vector<Valuation> index(r1.begin(), r1.end());
  if (index.size() > kMaxValuationClasses) {
    throw ModelError("too many valuation classes for equivalence checking");
  }
  std::vector<std::size_t> order1(m.num_agents());
  for (std::size_t i = 0; i < order1.size(); ++i) order1[i] = i;
  const Profile p1 = build_profile(m, index, order1);
  const Profile p2 = build_profile(m2, index, agent_map);
  for (std::size_t i = 0; i < p1.size(); ++i) {
    for (std::size_t mask = 0; mask < p1[i].size(); ++mask) {
      if (p1[i][mask] != p2[i][mask]) {
        return "agent " + m.agents()[i] + " has different abilities from the valuation set #" +
               std::to_string(mask);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<StateSet> prop_definable_sets(const Ults& m) {
  const Classes classes(m.base());
  std::vector<StateSet> out;
  for (std::uint32_t mask = 0; mask < (1u << classes.size()); ++mask) {
    out.push_back(classes.states_of(mask, m.base().num_states()));
  }
  return out;
}

std::optional<Violation> verify_bisim(const Ults& m, const Ults& m2, const BisimRelation& z) {
  if (z.empty()) throw std::invalid_argument("empty relation");
  const std::size_t n = m.base().num_states();
  const std::size_t n2 = m2.base().num_states();
  for (const auto& [a, b] : z) {
    if (a >= n || b >= n2) throw std::invalid_argument("relation mentions an unknown state");
  }
  const auto agent_map = match_agents(m, m2);
  for (const auto& [a, b] : z) {
    if (m.base().valuation(a) != m2.base().valuation(b)) {
      Violation v{Clause::kAtom};
      v.pair = {a, b};
      return v;
    }
  }
  StateSet left(n), right(n2);
  for (const auto& [a, b] : z) {
    left.insert(a);
    right.insert(b);
  }
  for (StateId a = 0; a < n; ++a) {
    if (!left.contains(a)) {
      Violation v{Clause::kAZig};
      v.pair = {a, 0};
      return v;
    }
  }
  for (StateId b = 0; b < n2; ++b) {
    if (!right.contains(b)) {
      Violation v{Clause::kAZag};
      v.pair = {0, b};
      return v;
    }
  }
  auto zig = check_zig(m, m2, agent_map, [&](const StateSet& u) { return image(z, u, n2); },
                       Clause::kKhZig);
  if (!zig) {
    const auto back_map = match_agents(m2, m);
    zig = check_zig(m2, m, back_map, [&](const StateSet& u) { return preimage(z, u, n); },
                    Clause::kKhZag);
    if (zig) zig->agent = back_map[zig->agent];  // report as an agent of m
  }
  if (zig) zig->pair = *z.begin();
  return zig;
}

bool replay_violation(const Ults& m, const Ults& m2, const BisimRelation& z, const Violation& v) {
  const std::size_t n = m.base().num_states();
  const std::size_t n2 = m2.base().num_states();
  switch (v.clause) {
    case Clause::kAtom:
      return m.base().valuation(v.pair.first) != m2.base().valuation(v.pair.second);
    case Clause::kAZig:
      return std::none_of(z.begin(), z.end(), [&](const auto& p) { return p.first == v.pair.first; });
    case Clause::kAZag:
      return std::none_of(z.begin(), z.end(),
                          [&](const auto& p) { return p.second == v.pair.second; });
    case Clause::kKhZig:
    case Clause::kKhZag: {
      const bool zig = v.clause == Clause::kKhZig;
      const Ults& a = zig ? m : m2;
      const Ults& b = zig ? m2 : m;
      const Agent& agent = m.agents()[v.agent];
      const std::size_t ia = a.agent_index(agent);
      const std::size_t ib = b.agent_index(agent);
      if (!is_union_of_classes(a.base(), v.u)) return false;
      const PlanSet& pi = a.plansets(ia).at(v.planset);
      if (!v.u.subset_of(stexec_set(a.base(), pi))) return false;
      if (rel_of_set(a.base(), pi).image(v.u) != v.t) return false;
      const StateSet zu = zig ? image(z, v.u, n2) : preimage(z, v.u, n);
      const StateSet zt = zig ? image(z, v.t, n2) : preimage(z, v.t, n);
      return !executes(Checker(b).summaries(ib), zu, zt);
    }
  }
  return false;
}

std::set<std::set<std::string>> realized_valuations(const Ults& m) {
  std::set<std::set<std::string>> out;
  for (StateId s = 0; s < m.base().num_states(); ++s) out.insert(m.base().valuation(s));
  return out;
}

bool profiles_agree(const Ults& m, const Ults& m2) { return !global_difference(m, m2); }

bool equivalent(const Ults& m, StateId w, const Ults& m2, StateId w2) {
  if (m.base().valuation(w) != m2.base().valuation(w2)) return false;
  return profiles_agree(m, m2);
}

BisimResult bisimilar(const Ults& m, StateId w, const Ults& m2, StateId w2) {
  BisimResult out;
  const Lts& a = m.base();
  const Lts& b = m2.base();
  match_agents(m, m2);
  if (a.valuation(w) != b.valuation(w2)) {
    Violation v{Clause::kAtom};
    v.pair = {w, w2};
    out.violation = v;
    out.reason = "the points disagree on their valuations";
    return out;
  }
  // Candidate: relate states with equal valuations.
  BisimRelation z;
  for (StateId s = 0; s < a.num_states(); ++s) {
    for (StateId t = 0; t < b.num_states(); ++t) {
      if (a.valuation(s) == b.valuation(t)) z.emplace(s, t);
    }
  }
  out.violation = verify_bisim(m, m2, z);
  if (!out.violation) {
    out.bisimilar = true;
    out.z = std::move(z);
    return out;
  }
  switch (out.violation->clause) {
    case Clause::kAZig:
      out.reason = "state " + a.state_name(out.violation->pair.first) +
                   " has no counterpart with the same valuation";
      break;
    case Clause::kAZag:
      out.reason = "state " + b.state_name(out.violation->pair.second) +
                   " has no counterpart with the same valuation";
      break;
    default:
      out.reason = std::string("clause ") + clause_name(out.violation->clause) +
                   " fails for agent " + m.agents()[out.violation->agent];
  }
  return out;
}

namespace {

Formula indicator(const Valuation& v, const std::vector<std::string>& atoms) {
  std::optional<Formula> out;
  for (const auto& p : atoms) {
    Formula lit = v.count(p) ? Formula::atom(p) : Formula::neg(Formula::atom(p));
    out = out ? Formula::conj(*out, lit) : lit;
  }
  return out ? *out : Formula::top();
}

Formula union_of(const std::vector<Formula>& chis, std::uint32_t mask) {
  std::optional<Formula> out;
  for (std::size_t c = 0; c < chis.size(); ++c) {
    if (!(mask >> c & 1u)) continue;
    out = out ? Formula::disj(*out, chis[c]) : chis[c];
  }
  return out ? *out : Formula::bot();
}

}  // namespace

std::optional<Formula> find_distinguishing_formula(const Ults& m, StateId w, const Ults& m2,
                                                   StateId w2, int max_depth) {
  std::set<std::string> atom_set = m.base().atoms();
  atom_set.insert(m2.base().atoms().begin(), m2.base().atoms().end());
  const std::vector<std::string> atoms(atom_set.begin(), atom_set.end());
  for (const auto& p : atoms) {
    if (m.base().valuation(w).count(p) != m2.base().valuation(w2).count(p)) {
      return Formula::atom(p);
    }
  }
  if (max_depth < 1) return std::nullopt;
  match_agents(m, m2);

  auto valuations = realized_valuations(m);
  const auto r2 = realized_valuations(m2);
  valuations.insert(r2.begin(), r2.end());
  if (valuations.size() > kMaxValuationClasses) {
    throw ModelError("too many valuation classes for the formula search");
  }
  std::vector<Formula> chis;
  for (const auto& v : valuations) chis.push_back(indicator(v, atoms));

  Checker c1(m);
  Checker c2(m2);
  auto differs = [&](const Formula& f) { return c1.holds(w, f) != c2.holds(w2, f); };
  for (const Formula& chi : chis) {
    const Formula f = Formula::somewhere(chi);
    if (differs(f)) return f;
  }
  const std::uint32_t full = 1u << chis.size();
  for (const Agent& i : m.agents()) {
    for (std::uint32_t u = 0; u < full; ++u) {
      const Formula cond = union_of(chis, u);
      for (std::uint32_t t = 0; t < full; ++t) {
        const Formula f = Formula::kh(i, cond, union_of(chis, t));
        if (differs(f)) return f;
      }
    }
  }
  return std::nullopt;
}

}  // namespace khow
