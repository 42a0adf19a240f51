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

#include "khow/sat.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "khow/checker.hpp"
#include "khow/transform.hpp"

namespace khow {
namespace {

// Valuation sets are enumerated as subsets of 2^|atoms| bitmasks.
constexpr std::size_t kMaxAtoms = 6;

struct Shape {
  Formula core;
  AgentSet agents;
  std::vector<std::string> atoms;
  std::vector<Formula> closure;
  // Kh subformulas of the core formula, and the argument pair of each.
  std::vector<Formula> kh;
  std::vector<std::size_t> kh_pair;
  std::vector<std::pair<Formula, Formula>> pairs;
};

Shape make_shape(const Formula& f, const AgentSet& agents) {
  Shape s{desugar(f, agents), agents, {}, {}, {}, {}, {}};
  for (const std::string& a : atoms_of(s.core)) {
    if (a != kReservedAtom) s.atoms.push_back(a);
  }
  s.closure = subformula_closure(s.core);
  for (const Formula& g : s.closure) {
    if (g.op() != Op::kKh) continue;
    std::pair<Formula, Formula> p{g.cond(), g.goal()};
    auto it = std::find(s.pairs.begin(), s.pairs.end(), p);
    if (it == s.pairs.end()) it = s.pairs.insert(s.pairs.end(), std::move(p));
    s.kh.push_back(g);
    s.kh_pair.push_back(static_cast<std::size_t>(it - s.pairs.begin()));
  }
  return s;
}

// Extensions of every closure member when the Kh subformulas take the truth
// values in `beta`.
std::unordered_map<Formula, StateSet> intended(const Shape& s, const std::vector<unsigned>& vals,
                                               std::uint64_t beta) {
  const std::size_t n = vals.size();
  std::unordered_map<Formula, StateSet> ext;
  for (const Formula& g : s.closure) {
    StateSet out(n);
    switch (g.op()) {
      case Op::kAtom: {
        const auto it = std::find(s.atoms.begin(), s.atoms.end(), g.name());
        if (it == s.atoms.end()) break;
        const auto bit = static_cast<unsigned>(it - s.atoms.begin());
        for (StateId w = 0; w < n; ++w) {
          if ((vals[w] >> bit) & 1u) out.insert(w);
        }
        break;
      }
      case Op::kNeg:
        out = ext.at(g.lhs()).complement();
        break;
      case Op::kOr:
        out = ext.at(g.lhs()) | ext.at(g.rhs());
        break;
      case Op::kKh: {
        const auto k = static_cast<std::size_t>(std::find(s.kh.begin(), s.kh.end(), g) - s.kh.begin());
        if ((beta >> k) & 1u) out = StateSet::full(n);
        break;
      }
      default:
        throw std::logic_error("unexpected sugar in desugared formula");
    }
    ext.emplace(g, std::move(out));
  }
  return ext;
}

Ults build_candidate(const Shape& s, const std::vector<unsigned>& vals, std::uint64_t beta) {
  const auto ext = intended(s, vals, beta);
  const std::size_t n = vals.size();
  Lts b;
  for (const std::string& a : s.atoms) b.add_atom(a);
  for (StateId w = 0; w < n; ++w) {
    std::set<std::string> val;
    for (std::size_t bit = 0; bit < s.atoms.size(); ++bit) {
      if ((vals[w] >> bit) & 1u) val.insert(s.atoms[bit]);
    }
    b.add_state("s" + std::to_string(w), std::move(val));
  }
  std::vector<std::optional<ActionId>> action(s.pairs.size());
  for (std::size_t k = 0; k < s.kh.size(); ++k) {
    if (!((beta >> k) & 1u) || action[s.kh_pair[k]]) continue;
    const auto& [t1, t2] = s.pairs[s.kh_pair[k]];
    const ActionId a = b.add_action("a" + std::to_string(s.kh_pair[k]));
    ext.at(t1).for_each([&](StateId u) {
      ext.at(t2).for_each([&](StateId v) { b.add_transition(a, u, v); });
    });
    action[s.kh_pair[k]] = a;
  }
  const ActionId d = b.add_action("d");
  Ults m(std::move(b), s.agents);
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    std::set<ActionId> mine;
    for (std::size_t k = 0; k < s.kh.size(); ++k) {
      if (((beta >> k) & 1u) && s.kh[k].agent() == s.agents[i]) mine.insert(*action[s.kh_pair[k]]);
    }
    for (ActionId a : mine) m.add_planset(i, {{a}});
    m.add_planset(i, {{d}});
  }
  return m;
}

// Advances a strictly increasing index vector over [0, universe); false at
// the end.
bool next_combination(std::vector<unsigned>& c, unsigned universe) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < universe - (k - i)) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

AgentSet resolve_agents(const Formula& f, const AgentSet& agents) {
  const std::set<Agent> used = agents_of(f);
  if (agents.empty()) {
    if (used.empty()) return {kDefaultAgent};
    return AgentSet(used.begin(), used.end());
  }
  for (const Agent& a : used) {
    if (std::find(agents.begin(), agents.end(), a) == agents.end()) {
      throw std::invalid_argument("formula uses agent '" + a + "' outside the agent set");
    }
  }
  return agents;
}

std::size_t sat_bound(const Formula& f, const AgentSet& agents) {
  const Shape s = make_shape(f, resolve_agents(f, agents));
  return 1 + 2 * s.closure.size() * (s.pairs.size() + 1);
}

SatOutcome is_satisfiable(const Formula& f, const AgentSet& agents) {
  const Shape s = make_shape(f, resolve_agents(f, agents));
  if (s.atoms.size() > kMaxAtoms) {
    throw std::invalid_argument("satisfiability search supports at most " +
                                std::to_string(kMaxAtoms) + " atoms");
  }
  if (s.kh.size() >= 63) throw std::invalid_argument("too many Kh subformulas for the search");
  SatOutcome out;
  out.bound = 1 + 2 * s.closure.size() * (s.pairs.size() + 1);
  const auto universe = static_cast<unsigned>(1u << s.atoms.size());
  const std::size_t max_states = std::min<std::size_t>(out.bound, universe);
  const std::uint64_t betas = std::uint64_t{1} << s.kh.size();
  for (std::size_t size = 1; size <= max_states; ++size) {
    std::vector<unsigned> vals(size);
    for (unsigned k = 0; k < size; ++k) vals[k] = k;
    do {
      for (std::uint64_t beta = 0; beta < betas; ++beta) {
        ++out.candidates;
        Ults m = build_candidate(s, vals, beta);
        const StateSet ext = extension(m, s.core);
        if (ext.empty()) continue;
        out.satisfiable = true;
        out.point = ext.members().front();
        out.model = std::move(m);
        return out;
      }
    } while (next_combination(vals, universe));
  }
  return out;
}

bool is_valid(const Formula& f, const AgentSet& agents) {
  return !is_satisfiable(Formula::neg(f), resolve_agents(f, agents)).satisfiable;
}

const std::vector<AxiomSchema>& axiom_schemas() {
  static const std::vector<AxiomSchema> schemas = [] {
    auto make = [](Axiom id, const char* name, const char* text, std::vector<std::string> vars,
                   bool sound) { return AxiomSchema{id, name, parse(text), std::move(vars), sound}; };
    return std::vector<AxiomSchema>{
        make(Axiom::kTaut, "TAUT", "phi -> (psi -> phi)", {"phi", "psi"}, true),
        make(Axiom::kDistA, "DISTA", "A (phi -> psi) -> (A phi -> A psi)", {"phi", "psi"}, true),
        make(Axiom::kTA, "TA", "A phi -> phi", {"phi"}, true),
        make(Axiom::k4KhA, "4KhA", "Kh[i](psi, phi) -> A Kh[i](psi, phi)", {"psi", "phi"}, true),
        make(Axiom::k5KhA, "5KhA", "~Kh[i](psi, phi) -> A ~Kh[i](psi, phi)", {"psi", "phi"}, true),
        make(Axiom::kKhE, "KhE", "(E psi & Kh[i](psi, phi)) -> E phi", {"psi", "phi"}, true),
        make(Axiom::kKhA, "KhA",
             "(A (chi -> psi) & Kh[i](psi, phi) & A (phi -> theta)) -> Kh[i](chi, theta)",
             {"chi", "psi", "phi", "theta"}, true),
        make(Axiom::kSCond, "SCOND", "A ~psi -> Kh[i](psi, phi)", {"psi", "phi"}, true),
        make(Axiom::kCond, "COND", "Kh[i](bot, phi)", {"phi"}, true),
        make(Axiom::kEmp, "EMP", "A (psi -> phi) -> Kh[i](psi, phi)", {"psi", "phi"}, false),
        make(Axiom::kCompKh, "COMPKh", "(Kh[i](psi, phi) & Kh[i](phi, chi)) -> Kh[i](psi, chi)",
             {"psi", "phi", "chi"}, false),
    };
  }();
  return schemas;
}

const AxiomSchema& axiom_schema(std::string_view name) {
  for (const AxiomSchema& s : axiom_schemas()) {
    if (s.name == name) return s;
  }
  throw std::invalid_argument("unknown axiom schema '" + std::string(name) + "'");
}

Formula instantiate(const AxiomSchema& schema, const Bindings& bindings) {
  for (const std::string& v : schema.metavariables) {
    if (!bindings.formulas.count(v)) {
      throw std::invalid_argument("schema " + schema.name + " needs a binding for '" + v + "'");
    }
  }
  return substitute(
      schema.pattern,
      [&](const std::string& atom) -> std::optional<Formula> {
        const auto it = bindings.formulas.find(atom);
        if (it == bindings.formulas.end()) return std::nullopt;
        return it->second;
      },
      [&](const Agent&) { return bindings.agent; });
}

Ults emp_fail_model() {
  Lts b;
  const StateId w = b.add_state("w", {"p"});
  const StateId u = b.add_state("u", {"q"});
  const StateId v = b.add_state("v_r", {"r"});
  const StateId x = b.add_state("x", {});
  const ActionId a = b.add_action("a");
  const ActionId bb = b.add_action("b");
  const ActionId c = b.add_action("c");
  b.add_transition(a, w, u);
  b.add_transition(bb, u, v);
  b.add_transition(c, w, x);
  Ults m(std::move(b), {kDefaultAgent});
  m.add_planset(0, {{a}});
  m.add_planset(0, {{bb}});
  m.add_planset(0, {{a, bb}, {c}});
  return m;
}

std::vector<SchemaReport> soundness_harness(const std::vector<AxiomSchema>& schemas,
                                            const HarnessParams& params, Rng& rng) {
  if (params.trials < 1) throw std::invalid_argument("the harness needs at least one trial");
  ModelParams mp;
  mp.max_states = std::max<std::size_t>(params.max_states, 1);
  mp.min_states = std::min(mp.min_states, mp.max_states);
  mp.max_actions = params.max_actions;
  mp.max_plansets = params.max_plansets;
  mp.max_plan_length = params.max_plan_length;
  mp.agents = params.model_class == ModelClass::kGeneral ? params.agents : AgentSet{kDefaultAgent};
  FormulaParams fp;
  fp.agents = mp.agents;
  fp.max_kh_depth = 1;
  fp.max_size = 5;

  std::vector<SchemaReport> reports;
  for (const AxiomSchema& schema : schemas) {
    SchemaReport report;
    report.name = schema.name;
    auto check = [&](const Ults& m, const Formula& instance) {
      ++report.trials;
      const StateSet ext = extension(m, instance);
      if (ext.count() == m.base().num_states()) return;
      ++report.counterexamples;
      if (!report.first) {
        report.first = Counterexample{m, (ext.complement()).members().front(), instance};
      }
    };
    if (params.model_class == ModelClass::kGeneral) {
      // Every instance with metavariables drawn from p, q, r.
      const Ults fixture = emp_fail_model();
      const std::vector<Formula> atoms{Formula::atom("p"), Formula::atom("q"), Formula::atom("r")};
      std::vector<std::size_t> pick(schema.metavariables.size(), 0);
      while (true) {
        Bindings b;
        b.agent = kDefaultAgent;
        for (std::size_t k = 0; k < pick.size(); ++k) b.formulas.emplace(schema.metavariables[k], atoms[pick[k]]);
        check(fixture, instantiate(schema, b));
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == atoms.size()) pick[k++] = 0;
        if (k == pick.size()) break;
      }
    }
    for (int t = 0; t < params.trials; ++t) {
      Ults m;
      switch (params.model_class) {
        case ModelClass::kGeneral:
          m = random_ults(rng, mp);
          break;
        case ModelClass::kNu:
          m = lts_to_ults_nu(random_lts(rng, mp));
          break;
        case ModelClass::kAc:
          m = lts_to_ults_ac(random_lts(rng, mp));
          break;
      }
      Bindings b;
      b.agent = mp.agents[rng() % mp.agents.size()];
      for (const std::string& v : schema.metavariables) b.formulas.emplace(v, random_formula(rng, fp));
      check(m, instantiate(schema, b));
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace khow
