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

#include "khow/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "khow/bisim.hpp"
#include "khow/checker.hpp"
#include "khow/filtration.hpp"
#include "khow/model.hpp"
#include "khow/random.hpp"
#include "khow/sat.hpp"
#include "khow/syntax.hpp"
#include "khow/transform.hpp"

namespace khow::cli {
namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Output {
  std::ostream& out;
  bool structured = false;

  void emit(const json& doc) const { out << doc.dump(2) << '\n'; }
};

std::string planset_name(const Lts& b, const PlanSet& pi) {
  std::string out = "{";
  for (std::size_t k = 0; k < pi.size(); ++k) {
    if (k) out += ',';
    out += b.plan_name(pi[k]);
  }
  return out + "}";
}

std::vector<std::string> state_names(const Lts& b, const StateSet& s) {
  std::vector<std::string> out;
  s.for_each([&](StateId w) { out.push_back(b.state_name(w)); });
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += (k ? ", " : "") + items[k];
  return out;
}

AgentSet split_list(const std::string& text) {
  AgentSet out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw UsageError("empty item in list '" + text + "'");
    out.push_back(item);
  }
  return out;
}

const Ults& require_ults(const Model& m, const std::string& what) {
  if (const auto* u = std::get_if<Ults>(&m)) return *u;
  throw UsageError(what + " needs a ULTS (a model with agents and plansets)");
}

const Lts& require_lts(const Model& m, const std::string& what) {
  if (const auto* l = std::get_if<Lts>(&m)) return *l;
  throw UsageError(what + " needs an LTS (a model without agents and plansets)");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << text << '\n';
}

// --- check ----------------------------------------------------------------

int cmd_check(const Output& o, const std::string& path, const std::string& state,
              const std::string& text) {
  const Model model = load_model(path);
  json witnesses = json::array();
  bool verdict = false;
  std::vector<std::string> lines;
  if (const auto* u = std::get_if<Ults>(&model)) {
    const Formula f = parse(text, u->agents());
    verdict = check_ults(*u, state, f);
    for (const KhTriple& t : kh_pairs(f)) {
      std::vector<std::string> names;
      for (const PlanSet& pi : khow::witnesses(*u, t.agent, t.cond, t.goal)) {
        names.push_back(planset_name(u->base(), pi));
      }
      const std::string kh = print(Formula::kh(t.agent, t.cond, t.goal));
      lines.push_back(kh + ": " + (names.empty() ? "none" : join(names)));
      witnesses.push_back({{"formula", kh}, {"plansets", names}});
    }
  } else {
    const Lts& l = std::get<Lts>(model);
    const Formula f = parse(text);
    verdict = check_lts(l, state, f);
    LtsChecker checker(l);
    for (const KhTriple& t : kh_pairs(f)) {
      const auto plan = checker.witness(checker.extension(desugar(t.cond, {t.agent})),
                                        checker.extension(desugar(t.goal, {t.agent})));
      const std::string kh = print(Formula::kh(t.agent, t.cond, t.goal));
      lines.push_back(kh + ": " + (plan ? l.plan_name(*plan) : "none"));
      json entry{{"formula", kh}};
      entry["plan"] = plan ? json(l.plan_name(*plan)) : json(nullptr);
      witnesses.push_back(entry);
    }
  }
  if (o.structured) {
    o.emit({{"verdict", verdict}, {"state", state}, {"formula", text}, {"witnesses", witnesses}});
  } else {
    o.out << (verdict ? "true" : "false") << '\n';
    for (const std::string& line : lines) o.out << line << '\n';
  }
  return verdict ? kExitYes : kExitNo;
}

// --- sat / valid ----------------------------------------------------------

int cmd_sat(const Output& o, const std::string& text, const std::string& agents,
            const std::string& output, bool validity) {
  const AgentSet given = agents.empty() ? AgentSet{} : split_list(agents);
  const Formula f = parse(text, given);
  const AgentSet resolved = resolve_agents(f, given);
  const SatOutcome r = is_satisfiable(validity ? Formula::neg(f) : f, resolved);
  // For validity a model of the negation is a countermodel.
  const bool yes = validity ? !r.satisfiable : r.satisfiable;
  const char* verdict = validity ? (yes ? "VALID" : "NOT VALID") : (yes ? "SAT" : "UNSAT");
  std::string model_text;
  if (r.model) {
    model_text = dump_model(*r.model);
    if (!output.empty()) write_text(output, model_text);
  }
  if (o.structured) {
    json doc{{"verdict", verdict}, {"bound", r.bound}, {"candidates", r.candidates}};
    if (r.model) {
      doc["point"] = r.model->base().state_name(r.point);
      doc["model"] = json::parse(model_text);
    }
    o.emit(doc);
  } else {
    o.out << verdict << '\n';
    if (r.model) {
      o.out << (validity ? "countermodel at " : "model at ") << r.model->base().state_name(r.point)
            << '\n';
      if (output.empty()) o.out << model_text << '\n';
    } else {
      o.out << "searched up to bound " << r.bound << " (" << r.candidates << " candidates)\n";
    }
  }
  return yes ? kExitYes : kExitNo;
}

// --- bisim / equiv --------------------------------------------------------

json violation_json(const Ults& m, const Ults& m2, const Violation& v) {
  const bool second_first = v.clause == Clause::kKhZag || v.clause == Clause::kAZag;
  const Lts& from = second_first ? m2.base() : m.base();
  json doc{{"clause", clause_name(v.clause)},
           {"pair", {m.base().num_states() > v.pair.first ? m.base().state_name(v.pair.first) : "",
                     m2.base().num_states() > v.pair.second ? m2.base().state_name(v.pair.second) : ""}}};
  if (v.clause == Clause::kKhZig || v.clause == Clause::kKhZag) {
    doc["agent"] = m.agents()[std::min(v.agent, m.agents().size() - 1)];
    doc["u"] = state_names(from, v.u);
    doc["t"] = state_names(from, v.t);
    doc["planset"] = v.planset;
  }
  return doc;
}

std::pair<StateId, StateId> points(const Ults& m, const std::string& w, const Ults& m2,
                                   const std::string& w2) {
  return {m.base().state(w), m2.base().state(w2)};
}

int cmd_bisim(const Output& o, const std::string& a, const std::string& w, const std::string& b,
              const std::string& x, bool profiles_only) {
  const Model ma = load_model(a);
  const Model mb = load_model(b);
  const Ults& m = require_ults(ma, profiles_only ? "equiv" : "bisim");
  const Ults& m2 = require_ults(mb, profiles_only ? "equiv" : "bisim");
  const auto [s, s2] = points(m, w, m2, x);
  std::optional<Formula> dist;
  if (profiles_only) {
    const bool eq = equivalent(m, s, m2, s2);
    if (!eq) dist = find_distinguishing_formula(m, s, m2, s2, 2);
    if (o.structured) {
      json doc{{"verdict", eq ? "equivalent" : "not equivalent"}};
      if (dist) doc["distinguishing"] = print(*dist);
      o.emit(doc);
    } else {
      o.out << (eq ? "equivalent" : "not equivalent") << '\n';
      if (dist) o.out << "distinguishing: " << print(*dist) << '\n';
    }
    return eq ? kExitYes : kExitNo;
  }
  const BisimResult r = bisimilar(m, s, m2, s2);
  if (!r.bisimilar) dist = find_distinguishing_formula(m, s, m2, s2, 2);
  if (o.structured) {
    json doc{{"verdict", r.bisimilar ? "bisimilar" : "not bisimilar"}};
    if (r.bisimilar) {
      json z = json::array();
      for (const auto& [p, q] : r.z) z.push_back({m.base().state_name(p), m2.base().state_name(q)});
      doc["z"] = z;
    } else {
      doc["reason"] = r.reason;
      if (r.violation) doc["violation"] = violation_json(m, m2, *r.violation);
      if (dist) doc["distinguishing"] = print(*dist);
    }
    o.emit(doc);
  } else if (r.bisimilar) {
    o.out << "bisimilar\n";
    for (const auto& [p, q] : r.z) {
      o.out << m.base().state_name(p) << " ~ " << m2.base().state_name(q) << '\n';
    }
  } else {
    o.out << "not bisimilar\n" << r.reason << '\n';
    if (r.violation) o.out << "violation: " << violation_json(m, m2, *r.violation).dump() << '\n';
    if (dist) o.out << "distinguishing: " << print(*dist) << '\n';
  }
  return r.bisimilar ? kExitYes : kExitNo;
}

// --- filter / translate / classify ----------------------------------------

int cmd_filter(const Output& o, const std::string& path, const std::vector<std::string>& texts,
               const std::string& output) {
  const Model model = load_model(path);
  const Ults& m = require_ults(model, "filter");
  std::vector<Formula> formulas;
  for (const std::string& t : texts) formulas.push_back(parse(t, m.agents()));
  const std::vector<Formula> sigma = sigma_closure(formulas);
  const Filtration filt = filtrate(m, sigma);
  const auto bad = verify_filtration(m, sigma, filt);
  const std::string text = dump_filtration(m, filt);
  if (!output.empty()) {
    write_text(output, text);
    if (o.structured) {
      o.emit({{"states", m.base().num_states()},
              {"classes", filt.model.base().num_states()},
              {"sigma", sigma.size()},
              {"verified", !bad}});
    } else {
      o.out << m.base().num_states() << " states -> " << filt.model.base().num_states()
            << " classes (|sigma| = " << sigma.size() << ")\n";
    }
  } else {
    o.out << text << '\n';
  }
  if (bad) {
    throw std::logic_error("filtration failed verification: " + bad->message);
  }
  return kExitYes;
}

int cmd_translate(const Output& o, const std::string& path, const std::string& to,
                  const std::string& output) {
  const Model model = load_model(path);
  Model result;
  if (to == "lts") {
    result = ults_to_lts(require_ults(model, "translate --to lts"));
  } else if (to == "ults-nu") {
    result = lts_to_ults_nu(require_lts(model, "translate --to ults-nu"));
  } else {
    result = lts_to_ults_ac(require_lts(model, "translate --to ults-ac"));
  }
  const std::string text = dump_model(result);
  if (!output.empty()) {
    write_text(output, text);
    if (o.structured) {
      o.emit({{"written", output}});
    } else {
      o.out << "wrote " << output << '\n';
    }
  } else {
    o.out << text << '\n';
  }
  return kExitYes;
}

int cmd_classify(const Output& o, const std::string& path) {
  const Model model = load_model(path);
  const Ults& m = require_ults(model, "classify");
  const ClassReport r = classify(m);
  const Lts& b = m.base();
  const auto& s = m.plansets(0);
  if (o.structured) {
    json doc{{"nu_style", r.is_nu_style},
             {"active", r.is_active},
             {"se_compositional", r.is_se_compositional}};
    doc["active_witness"] = r.active_witness ? json(planset_name(b, s[*r.active_witness])) : json(nullptr);
    json comp = json::array();
    for (const auto& [pair, cover] : r.composition_witnesses) {
      comp.push_back({{"first", planset_name(b, s[pair.first])},
                      {"second", planset_name(b, s[pair.second])},
                      {"cover", planset_name(b, s[cover])}});
    }
    doc["composition_witnesses"] = comp;
    if (r.composition_counterexample) {
      doc["composition_counterexample"] = {planset_name(b, s[r.composition_counterexample->first]),
                                           planset_name(b, s[r.composition_counterexample->second])};
    }
    doc["explanation"] = r.explanation;
    o.emit(doc);
  } else {
    o.out << "nu-style: " << (r.is_nu_style ? "yes" : "no") << '\n';
    o.out << "active: " << (r.is_active ? "yes" : "no");
    if (r.active_witness) o.out << " (" << planset_name(b, s[*r.active_witness]) << ")";
    o.out << '\n';
    o.out << "se-compositional: " << (r.is_se_compositional ? "yes" : "no");
    if (r.composition_counterexample) {
      o.out << " (no cover for " << planset_name(b, s[r.composition_counterexample->first]) << " then "
            << planset_name(b, s[r.composition_counterexample->second]) << ")";
    }
    o.out << '\n';
  }
  return r.is_active && r.is_se_compositional ? kExitYes : kExitNo;
}

// --- axioms ---------------------------------------------------------------

int cmd_axioms(const Output& o, int trials, std::size_t max_states, const std::string& cls,
               const std::string& schemas, const std::string& agents) {
  HarnessParams params;
  params.trials = trials;
  params.max_states = max_states;
  params.model_class = cls == "nu" ? ModelClass::kNu : cls == "ac" ? ModelClass::kAc : ModelClass::kGeneral;
  if (!agents.empty()) params.agents = split_list(agents);
  std::vector<AxiomSchema> chosen;
  if (schemas.empty()) {
    chosen = axiom_schemas();
  } else {
    for (const std::string& name : split_list(schemas)) chosen.push_back(axiom_schema(name));
  }
  Rng rng(seed_from_env(2026));
  const auto reports = soundness_harness(chosen, params, rng);
  bool unexpected = false;
  json rows = json::array();
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const SchemaReport& r = reports[k];
    const bool expected_sound = chosen[k].sound_for_ults || params.model_class != ModelClass::kGeneral;
    const bool bad = expected_sound && r.counterexamples > 0;
    unexpected = unexpected || bad;
    json row{{"schema", r.name},
             {"trials", r.trials},
             {"counterexamples", r.counterexamples},
             {"expected_sound", expected_sound}};
    if (r.first) {
      row["instance"] = print(r.first->instance);
      row["point"] = r.first->model.base().state_name(r.first->point);
      row["model"] = json::parse(dump_model(r.first->model));
    }
    rows.push_back(row);
    if (!o.structured) {
      o.out << r.name << ": " << r.trials << " trials, " << r.counterexamples << " counterexamples";
      if (r.first) {
        o.out << "; e.g. " << print(r.first->instance) << " fails at "
              << r.first->model.base().state_name(r.first->point);
      }
      if (bad) o.out << " [UNEXPECTED]";
      o.out << '\n';
    }
  }
  if (o.structured) o.emit({{"class", cls}, {"schemas", rows}, {"unexpected", unexpected}});
  return unexpected ? kExitNo : kExitYes;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knowing-how logic toolkit: model checking, satisfiability, bisimulation, "
               "filtration and model translations.",
               "khow"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Structured output");

  std::string model, model2, state, state2, formula, agents, output, to = "lts", cls = "general",
                                                                       schemas;
  std::vector<std::string> formulas;
  int trials = 1000;
  std::size_t max_states = 4;

  auto* check = app.add_subcommand("check", "Evaluate a formula at a state");
  check->add_option("-m,--model", model, "Model file")->required();
  check->add_option("-w,--state", state, "State id")->required();
  check->add_option("-f,--formula", formula, "Formula")->required();

  auto* sat = app.add_subcommand("sat", "Decide satisfiability by bounded model search");
  auto* valid = app.add_subcommand("valid", "Decide validity");
  for (auto* sub : {sat, valid}) {
    sub->add_option("-f,--formula", formula, "Formula")->required();
    sub->add_option("--agents", agents, "Comma-separated agent set");
    sub->add_option("-o,--output", output, "Write the (counter)model here");
  }

  auto* bisim = app.add_subcommand("bisim", "Decide bisimilarity of two pointed models");
  auto* equiv = app.add_subcommand("equiv", "Decide logical equivalence of two pointed models");
  for (auto* sub : {bisim, equiv}) {
    sub->add_option("-m,--model", model, "First model file")->required();
    sub->add_option("-w,--state", state, "State of the first model")->required();
    sub->add_option("-n,--other", model2, "Second model file")->required();
    sub->add_option("-x,--other-state", state2, "State of the second model")->required();
  }

  auto* filter = app.add_subcommand("filter", "Filtrate through the closure of the formulas");
  filter->add_option("-m,--model", model, "Model file")->required();
  filter->add_option("-f,--formula", formulas, "Formula (repeatable)")->required();
  filter->add_option("-o,--output", output, "Write the filtration here");

  auto* translate = app.add_subcommand("translate", "Translate between LTS and ULTS");
  translate->add_option("-m,--model", model, "Model file")->required();
  translate->add_option("--to", to, "Target: lts, ults-nu or ults-ac")
      ->required()
      ->check(CLI::IsMember({"lts", "ults-nu", "ults-ac"}));
  translate->add_option("-o,--output", output, "Write the result here");

  auto* classify_cmd = app.add_subcommand("classify", "Report model-class membership");
  classify_cmd->add_option("-m,--model", model, "Single-agent ULTS file")->required();

  auto* axioms = app.add_subcommand("axioms", "Run the axiom soundness harness");
  axioms->add_option("--trials", trials, "Random instances per schema")->check(CLI::PositiveNumber);
  axioms->add_option("--max-states", max_states, "Largest random model")->check(CLI::PositiveNumber);
  axioms->add_option("--class", cls, "Model class: general, nu or ac")
      ->check(CLI::IsMember({"general", "nu", "ac"}));
  axioms->add_option("--schemas", schemas, "Comma-separated schema names (default: all)");
  axioms->add_option("--agents", agents, "Agents of random models (general class)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitYes : kExitError;
  }

  const Output o{out, as_json};
  try {
    if (*check) return cmd_check(o, model, state, formula);
    if (*sat) return cmd_sat(o, formula, agents, output, false);
    if (*valid) return cmd_sat(o, formula, agents, output, true);
    if (*bisim) return cmd_bisim(o, model, state, model2, state2, false);
    if (*equiv) return cmd_bisim(o, model, state, model2, state2, true);
    if (*filter) return cmd_filter(o, model, formulas, output);
    if (*translate) return cmd_translate(o, model, to, output);
    if (*classify_cmd) return cmd_classify(o, model);
    if (*axioms) return cmd_axioms(o, trials, max_states, cls, schemas, agents);
  } catch (const ParseError& e) {
    err << "error: formula: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace khow::cli
