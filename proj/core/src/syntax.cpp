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

#include "khow/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace khow {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at offset " + std::to_string(offset)),
      offset_(offset) {}

namespace {

std::size_t saturating_add(std::size_t a, std::size_t b) {
  const std::size_t max = std::numeric_limits<std::size_t>::max();
  return a > max - b ? max : a + b;
}

bool is_sugar(Op op) {
  switch (op) {
    case Op::kAtom:
    case Op::kNeg:
    case Op::kOr:
    case Op::kKh:
      return false;
    default:
      return true;
  }
}

}  // namespace

Formula Formula::make(Op op, std::string label, std::vector<Formula> children) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->label = std::move(label);
  node->children = std::move(children);
  std::size_t h = static_cast<std::size_t>(op) * 0x9e3779b97f4a7c15ULL;
  h ^= std::hash<std::string>{}(node->label) + (h << 6) + (h >> 2);
  std::size_t size = 1;
  int depth = 0;
  bool core = !is_sugar(op);
  for (const Formula& c : node->children) {
    h = h * 1000003u ^ c.hash();
    size = saturating_add(size, c.size());
    depth = std::max(depth, c.modal_depth());
    core = core && c.is_core();
  }
  if (op == Op::kKh || op == Op::kAlways || op == Op::kSomewhere) ++depth;
  node->hash = h;
  node->size = size;
  node->depth = depth;
  node->core = core;
  return Formula(std::move(node));
}

Formula Formula::atom(std::string name) { return make(Op::kAtom, std::move(name), {}); }
Formula Formula::neg(Formula f) { return make(Op::kNeg, {}, {std::move(f)}); }
Formula Formula::disj(Formula lhs, Formula rhs) {
  return make(Op::kOr, {}, {std::move(lhs), std::move(rhs)});
}
Formula Formula::kh(Agent agent, Formula cond, Formula goal) {
  return make(Op::kKh, std::move(agent), {std::move(cond), std::move(goal)});
}
Formula Formula::conj(Formula lhs, Formula rhs) {
  return make(Op::kAnd, {}, {std::move(lhs), std::move(rhs)});
}
Formula Formula::implies(Formula lhs, Formula rhs) {
  return make(Op::kImplies, {}, {std::move(lhs), std::move(rhs)});
}
Formula Formula::top() { return make(Op::kTop, {}, {}); }
Formula Formula::bot() { return make(Op::kBot, {}, {}); }
Formula Formula::always(Formula f) { return make(Op::kAlways, {}, {std::move(f)}); }
Formula Formula::somewhere(Formula f) { return make(Op::kSomewhere, {}, {std::move(f)}); }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.op() != b.op() || a.label() != b.label()) return false;
  const auto& ac = a.children();
  const auto& bc = b.children();
  if (ac.size() != bc.size()) return false;
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (!(ac[i] == bc[i])) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  if (auto c = a.label() <=> b.label(); c != 0) return c;
  const auto& ac = a.children();
  const auto& bc = b.children();
  for (std::size_t i = 0; i < std::min(ac.size(), bc.size()); ++i) {
    if (auto c = ac[i] <=> bc[i]; c != 0) return c;
  }
  return ac.size() <=> bc.size();
}

bool is_identifier(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

// ---------------------------------------------------------------------------
// Parser

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_keyword(std::string_view word) {
  return word == "A" || word == "E" || word == "Kh" || word == "top" || word == "bot";
}

class Parser {
 public:
  Parser(std::string_view text, const AgentSet& agents) : text_(text), agents_(agents) {}

  Formula parse_all() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty formula", pos_);
    Formula f = formula();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  std::string_view peek_word() {
    skip_space();
    std::size_t end = pos_;
    while (end < text_.size() && is_ident_char(text_[end])) ++end;
    return text_.substr(pos_, end - pos_);
  }

  Formula formula() {
    Formula lhs = disjunction();
    if (accept("->")) return Formula::implies(std::move(lhs), formula());
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (accept("|")) f = Formula::disj(std::move(f), conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (accept("&")) f = Formula::conj(std::move(f), unary());
    return f;
  }

  Formula unary() {
    if (accept("~")) return Formula::neg(unary());
    const std::string_view word = peek_word();
    if (word == "A") {
      pos_ += 1;
      return Formula::always(unary());
    }
    if (word == "E") {
      pos_ += 1;
      return Formula::somewhere(unary());
    }
    return primary();
  }

  Formula primary() {
    skip_space();
    if (pos_ == text_.size()) fail("unexpected end of input");
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    const std::size_t start = pos_;
    const std::string_view word = peek_word();
    if (word.empty()) fail(std::string("unexpected character '") + text_[pos_] + "'");
    pos_ += word.size();
    if (word == "top") return Formula::top();
    if (word == "bot") return Formula::bot();
    if (word == "Kh") {
      expect("[");
      const std::size_t agent_pos = (skip_space(), pos_);
      const std::string_view agent = peek_word();
      if (agent.empty()) fail("expected agent identifier");
      pos_ += agent.size();
      if (!agents_.empty() &&
          std::find(agents_.begin(), agents_.end(), agent) == agents_.end()) {
        throw ParseError("unknown agent '" + std::string(agent) + "'", agent_pos);
      }
      expect("]");
      expect("(");
      Formula cond = formula();
      expect(",");
      Formula goal = formula();
      expect(")");
      return Formula::kh(std::string(agent), std::move(cond), std::move(goal));
    }
    if (is_keyword(word)) {
      throw ParseError("keyword '" + std::string(word) + "' used as atom", start);
    }
    return Formula::atom(std::string(word));
  }

  std::string_view text_;
  const AgentSet& agents_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text, const AgentSet& agents) {
  return Parser(text, agents).parse_all();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

// Binding strength; larger binds tighter.
int precedence(Op op) {
  switch (op) {
    case Op::kImplies:
      return 1;
    case Op::kOr:
      return 2;
    case Op::kAnd:
      return 3;
    case Op::kNeg:
    case Op::kAlways:
    case Op::kSomewhere:
      return 4;
    default:
      return 5;
  }
}

void print_to(const Formula& f, int min_prec, std::string& out) {
  const int prec = precedence(f.op());
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (f.op()) {
    case Op::kAtom:
      out += f.name();
      break;
    case Op::kTop:
      out += "top";
      break;
    case Op::kBot:
      out += "bot";
      break;
    case Op::kNeg:
      out += '~';
      print_to(f.lhs(), 4, out);
      break;
    case Op::kAlways:
    case Op::kSomewhere:
      out += f.op() == Op::kAlways ? "A " : "E ";
      print_to(f.lhs(), 4, out);
      break;
    case Op::kAnd:
      print_to(f.lhs(), 3, out);
      out += " & ";
      print_to(f.rhs(), 4, out);
      break;
    case Op::kOr:
      print_to(f.lhs(), 2, out);
      out += " | ";
      print_to(f.rhs(), 3, out);
      break;
    case Op::kImplies:
      print_to(f.lhs(), 2, out);
      out += " -> ";
      print_to(f.rhs(), 1, out);
      break;
    case Op::kKh:
      out += "Kh[" + f.agent() + "](";
      print_to(f.cond(), 1, out);
      out += ", ";
      print_to(f.goal(), 1, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print(const Formula& f) {
  std::string out;
  print_to(f, 1, out);
  return out;
}

// ---------------------------------------------------------------------------
// Desugaring and structural utilities

namespace {

Formula core_and(const Formula& a, const Formula& b) {
  return Formula::neg(Formula::disj(Formula::neg(a), Formula::neg(b)));
}

Formula core_bot() {
  const Formula p0 = Formula::atom(std::string(kReservedAtom));
  return core_and(p0, Formula::neg(p0));
}

class Desugarer {
 public:
  explicit Desugarer(const AgentSet& agents) : agents_(agents), bot_(core_bot()) {}

  Formula run(const Formula& f) {
    if (f.is_core()) return f;
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
    Formula out = rewrite(f);
    memo_.emplace(f.id(), out);
    return out;
  }

 private:
  Formula universal(const Formula& inner) {
    if (agents_.empty()) {
      throw std::invalid_argument("A/E need a nonempty agent set");
    }
    const Formula negated = Formula::neg(inner);
    Formula out = Formula::kh(agents_.front(), negated, bot_);
    for (std::size_t i = 1; i < agents_.size(); ++i) {
      out = Formula::disj(out, Formula::kh(agents_[i], negated, bot_));
    }
    return out;
  }

  Formula rewrite(const Formula& f) {
    switch (f.op()) {
      case Op::kAtom:
        return f;
      case Op::kNeg:
        return Formula::neg(run(f.lhs()));
      case Op::kOr:
        return Formula::disj(run(f.lhs()), run(f.rhs()));
      case Op::kKh:
        return Formula::kh(f.agent(), run(f.cond()), run(f.goal()));
      case Op::kAnd:
        return core_and(run(f.lhs()), run(f.rhs()));
      case Op::kImplies:
        return Formula::disj(Formula::neg(run(f.lhs())), run(f.rhs()));
      case Op::kTop:
        return Formula::neg(bot_);
      case Op::kBot:
        return bot_;
      case Op::kAlways:
        return universal(run(f.lhs()));
      case Op::kSomewhere:
        return Formula::neg(universal(Formula::neg(run(f.lhs()))));
    }
    return f;
  }

  const AgentSet& agents_;
  Formula bot_;
  std::unordered_map<const void*, Formula> memo_;
};

template <typename Fn>
void visit_once(const Formula& f, std::unordered_set<const void*>& seen, Fn&& fn) {
  if (!seen.insert(f.id()).second) return;
  for (const Formula& c : f.children()) visit_once(c, seen, fn);
  fn(f);
}

}  // namespace

Formula desugar(const Formula& f, const AgentSet& agents) { return Desugarer(agents).run(f); }

std::vector<Formula> subformula_closure(const Formula& f) {
  std::vector<Formula> out;
  std::unordered_set<Formula> distinct;
  std::unordered_set<const void*> seen;
  visit_once(f, seen, [&](const Formula& g) {
    if (distinct.insert(g).second) out.push_back(g);
  });
  return out;
}

std::vector<KhTriple> kh_pairs(const Formula& f) {
  std::vector<KhTriple> out;
  for (const Formula& g : subformula_closure(f)) {
    if (g.op() == Op::kKh) out.push_back({g.agent(), g.cond(), g.goal()});
  }
  return out;
}

std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  std::unordered_set<const void*> seen;
  visit_once(f, seen, [&](const Formula& g) {
    if (g.op() == Op::kAtom) out.insert(g.name());
  });
  return out;
}

std::set<Agent> agents_of(const Formula& f) {
  std::set<Agent> out;
  std::unordered_set<const void*> seen;
  visit_once(f, seen, [&](const Formula& g) {
    if (g.op() == Op::kKh) out.insert(g.agent());
  });
  return out;
}

Formula substitute(const Formula& f,
                   const std::function<std::optional<Formula>(const std::string&)>& atoms,
                   const std::function<Agent(const Agent&)>& agents) {
  switch (f.op()) {
    case Op::kAtom: {
      auto replacement = atoms(f.name());
      return replacement ? *replacement : f;
    }
    case Op::kTop:
    case Op::kBot:
      return f;
    case Op::kNeg:
      return Formula::neg(substitute(f.lhs(), atoms, agents));
    case Op::kAlways:
      return Formula::always(substitute(f.lhs(), atoms, agents));
    case Op::kSomewhere:
      return Formula::somewhere(substitute(f.lhs(), atoms, agents));
    case Op::kOr:
      return Formula::disj(substitute(f.lhs(), atoms, agents), substitute(f.rhs(), atoms, agents));
    case Op::kAnd:
      return Formula::conj(substitute(f.lhs(), atoms, agents), substitute(f.rhs(), atoms, agents));
    case Op::kImplies:
      return Formula::implies(substitute(f.lhs(), atoms, agents),
                              substitute(f.rhs(), atoms, agents));
    case Op::kKh:
      return Formula::kh(agents(f.agent()), substitute(f.cond(), atoms, agents),
                         substitute(f.goal(), atoms, agents));
  }
  return f;
}

}  // namespace khow
