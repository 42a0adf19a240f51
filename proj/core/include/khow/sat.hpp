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

// Satisfiability by bounded search over selection-shaped models, validity,
// and a soundness harness for the axiom schemas.
//
// Truth of f at a state depends only on the state's valuation over atoms(f)
// and on the (global) truth values of the Kh subformulas. So a model of f
// can be collapsed to one state per realized valuation, and given the Kh
// truth values every true Kh_i(t1, t2) is witnessed by a fresh action with
// relation [[t1]] x [[t2]]; such an action witnesses nothing the original
// witness did not. The search enumerates realized valuation sets by size up
// to sat_bound(f) and Kh truth assignments, then verifies each candidate
// with the model checker.

#ifndef KHOW_SAT_HPP_
#define KHOW_SAT_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "khow/model.hpp"
#include "khow/random.hpp"
#include "khow/syntax.hpp"

namespace khow {

// Agents used for f: `agents` when given (it must cover f), else the agents
// of f, else {"1"}. Throws std::invalid_argument when f names an agent
// outside a given set.
AgentSet resolve_agents(const Formula& f, const AgentSet& agents = {});

// 1 + 2 * |closure| * (|ACT_f| + 1) over the desugared formula, ACT_f being
// its distinct Kh argument pairs.
std::size_t sat_bound(const Formula& f, const AgentSet& agents = {});

struct SatOutcome {
  bool satisfiable = false;
  // The witness model and a point where f holds, when satisfiable.
  std::optional<Ults> model;
  StateId point = 0;
  // N(f); states searched up to min(N(f), number of valuations).
  std::size_t bound = 0;
  std::size_t candidates = 0;
};

SatOutcome is_satisfiable(const Formula& f, const AgentSet& agents = {});
bool is_valid(const Formula& f, const AgentSet& agents = {});

enum class Axiom { kTaut, kDistA, kTA, k4KhA, k5KhA, kKhE, kKhA, kSCond, kCond, kEmp, kCompKh };

struct AxiomSchema {
  Axiom id;
  std::string name;
  // Metavariables are the atoms psi, phi, chi, theta and the agent i.
  Formula pattern;
  std::vector<std::string> metavariables;
  // False for EMP and COMPKh, which hold over LTSs but not over all ULTSs.
  bool sound_for_ults;
};

const std::vector<AxiomSchema>& axiom_schemas();
// Throws std::invalid_argument for an unknown name.
const AxiomSchema& axiom_schema(std::string_view name);

struct Bindings {
  std::map<std::string, Formula> formulas;
  Agent agent = "1";
};

// Throws std::invalid_argument when a metavariable has no binding.
Formula instantiate(const AxiomSchema& schema, const Bindings& bindings);

enum class ModelClass {
  kGeneral,  // random ULTSs, plus every instance over the emp-fail model
  kNu,       // lts_to_ults_nu of random LTSs
  kAc,       // lts_to_ults_ac of random LTSs
};

struct HarnessParams {
  int trials = 1000;
  std::size_t max_states = 4;
  std::size_t max_actions = 2;
  // Only for the general class.
  std::size_t max_plansets = 3;
  std::size_t max_plan_length = 3;
  ModelClass model_class = ModelClass::kGeneral;
  AgentSet agents{"1"};
};

struct Counterexample {
  Ults model;
  StateId point = 0;
  Formula instance;
};

struct SchemaReport {
  std::string name;
  int trials = 0;
  int counterexamples = 0;
  std::optional<Counterexample> first;
};

std::vector<SchemaReport> soundness_harness(const std::vector<AxiomSchema>& schemas,
                                            const HarnessParams& params, Rng& rng);

// The four-state model on which EMP and COMPKh fail: w{p} -a-> u{q} -b->
// v_r{r}, w -c-> x{}, one agent with S = {{a}, {b}, {ab, c}}.
Ults emp_fail_model();

}  // namespace khow

#endif  // KHOW_SAT_HPP_
