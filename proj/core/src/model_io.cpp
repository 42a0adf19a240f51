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

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "khow/model.hpp"

namespace khow {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw ModelError(what);
}

std::string checked_name(const json& j, const std::string& what) {
  require(j.is_string() && !j.get<std::string>().empty(), what + " must be a nonempty string");
  return j.get<std::string>();
}

std::string checked_identifier(const json& j, const std::string& what) {
  require(j.is_string(), what + " must be a string");
  const std::string s = j.get<std::string>();
  require(is_identifier(s), what + " '" + s + "' is not an identifier");
  return s;
}

Plan read_plan(const Lts& base, const json& j) {
  require(j.is_array(), "plan must be a list of action names");
  Plan plan;
  for (const json& a : j) {
    require(a.is_string(), "action name must be a string");
    auto id = base.find_action(a.get<std::string>());
    require(id.has_value(), "plan uses undeclared action '" + a.get<std::string>() + "'");
    plan.push_back(*id);
  }
  return plan;
}

Lts read_lts(const json& doc) {
  Lts m;
  if (doc.contains("atoms")) {
    require(doc["atoms"].is_array(), "'atoms' must be a list");
    for (const json& p : doc["atoms"]) {
      std::string atom = checked_identifier(p, "atom");
      require(atom != kReservedAtom, "atom '_p0' is reserved");
      m.add_atom(std::move(atom));
    }
  }
  require(doc.contains("states") && doc["states"].is_array(), "'states' must be a list");
  require(!doc["states"].empty(), "model has no states");
  for (const json& s : doc["states"]) {
    require(s.is_object() && s.contains("id"), "state entry needs an 'id'");
    std::string id = checked_name(s["id"], "state id");
    std::set<std::string> val;
    if (s.contains("val")) {
      require(s["val"].is_array(), "state 'val' must be a list");
      for (const json& p : s["val"]) {
        std::string atom = checked_identifier(p, "atom");
        require(atom != kReservedAtom, "atom '_p0' is reserved");
        val.insert(std::move(atom));
      }
    }
    require(!m.find_state(id), "duplicate state '" + id + "'");
    m.add_state(std::move(id), std::move(val));
  }
  const json rel = doc.value("rel", json::object());
  require(rel.is_object(), "'rel' must be an object");
  if (doc.contains("actions")) {
    require(doc["actions"].is_array(), "'actions' must be a list");
    for (const json& a : doc["actions"]) {
      std::string name = checked_name(a, "action");
      require(!m.find_action(name), "duplicate action '" + name + "'");
      const bool defined = rel.contains(name);
      m.add_action(std::move(name), defined);
    }
  }
  for (const auto& [name, pairs] : rel.items()) {
    auto a = m.find_action(name);
    require(a.has_value(), "relation for undeclared action '" + name + "'");
    require(pairs.is_array(), "relation of '" + name + "' must be a list of pairs");
    for (const json& edge : pairs) {
      require(edge.is_array() && edge.size() == 2 && edge[0].is_string() && edge[1].is_string(),
              "relation edge must be a pair of state ids");
      auto from = m.find_state(edge[0].get<std::string>());
      auto to = m.find_state(edge[1].get<std::string>());
      require(from && to, "relation of '" + name + "' mentions an unknown state");
      m.add_transition(*a, *from, *to);
    }
  }
  return m;
}

}  // namespace

Model parse_model(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
  require(doc.is_object(), "model file must contain an object");
  Lts base = read_lts(doc);
  const bool has_agents = doc.contains("agents");
  const bool has_plansets = doc.contains("plansets");
  if (!has_agents && !has_plansets) return base;
  require(has_agents && has_plansets, "a ULTS needs both 'agents' and 'plansets'");
  require(doc["agents"].is_array(), "'agents' must be a list");
  AgentSet agents;
  for (const json& a : doc["agents"]) agents.push_back(checked_identifier(a, "agent"));
  require(doc["plansets"].is_object(), "'plansets' must be an object");
  Ults m(std::move(base), agents);
  for (const auto& [agent, collection] : doc["plansets"].items()) {
    require(m.has_agent(agent), "plan sets for undeclared agent '" + agent + "'");
    require(collection.is_array(), "plan sets of agent '" + agent + "' must be a list");
    const std::size_t i = m.agent_index(agent);
    for (const json& pi : collection) {
      require(pi.is_array(), "plan set must be a list of plans");
      PlanSet set;
      for (const json& plan : pi) set.push_back(read_plan(m.base(), plan));
      require(normalize(set).size() == set.size(), "plan set lists a plan twice");
      m.add_planset(i, std::move(set));
    }
  }
  m.validate();
  return m;
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

namespace {

json lts_json(const Lts& m) {
  json doc;
  doc["atoms"] = json::array();
  for (const auto& p : m.atoms()) doc["atoms"].push_back(p);
  doc["states"] = json::array();
  for (StateId s = 0; s < m.num_states(); ++s) {
    json val = json::array();
    for (const auto& p : m.valuation(s)) val.push_back(p);
    doc["states"].push_back({{"id", m.state_name(s)}, {"val", val}});
  }
  doc["actions"] = json::array();
  doc["rel"] = json::object();
  for (ActionId a = 0; a < m.num_actions(); ++a) {
    doc["actions"].push_back(m.action_name(a));
    if (!m.defined(a)) continue;
    json edges = json::array();
    for (StateId s = 0; s < m.num_states(); ++s) {
      m.relation(a)->successors(s).for_each([&](StateId t) {
        edges.push_back({m.state_name(s), m.state_name(t)});
      });
    }
    doc["rel"][m.action_name(a)] = edges;
  }
  return doc;
}

}  // namespace

std::string dump_model(const Model& model) {
  json doc;
  if (const auto* lts = std::get_if<Lts>(&model)) {
    doc = lts_json(*lts);
  } else {
    const Ults& m = std::get<Ults>(model);
    doc = lts_json(m.base());
    doc["agents"] = m.agents();
    doc["plansets"] = json::object();
    for (std::size_t i = 0; i < m.num_agents(); ++i) {
      json collection = json::array();
      for (const PlanSet& pi : m.plansets(i)) {
        json set = json::array();
        for (const Plan& plan : pi) {
          json names = json::array();
          for (ActionId a : plan) names.push_back(m.base().action_name(a));
          set.push_back(names);
        }
        collection.push_back(set);
      }
      doc["plansets"][m.agents()[i]] = collection;
    }
  }
  return doc.dump(2);
}

void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write model file '" + path + "'");
  out << dump_model(m) << '\n';
}

}  // namespace khow
