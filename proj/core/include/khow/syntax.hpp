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

// Formulas of the multi-agent knowing-how language.
//
// The core language has four constructors: atoms, negation, disjunction and
// Kh[i](cond, goal). The parser additionally accepts the usual sugar
// (conjunction, implication, top, bottom and the universal/existential
// modalities A and E); desugar() rewrites it into the core constructors.
//
// Concrete grammar, loosest binding first:
//
//   formula := disj ( "->" formula )?          right associative
//   disj    := conj ( "|" conj )*              left associative
//   conj    := unary ( "&" unary )*            left associative
//   unary   := "~" unary | "A" unary | "E" unary | primary
//   primary := IDENT | "top" | "bot" | "(" formula ")"
//            | "Kh" "[" IDENT "]" "(" formula "," formula ")"
//
// Identifiers are nonempty runs of ASCII letters, digits and underscores.
// "A", "E", "Kh", "top" and "bot" are keywords.

#ifndef KHOW_SYNTAX_HPP_
#define KHOW_SYNTAX_HPP_

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace khow {

using Agent = std::string;
using AgentSet = std::vector<Agent>;

// Atom used to encode bottom as `_p0 & ~_p0`. Model files may not use it.
inline constexpr std::string_view kReservedAtom = "_p0";

enum class Op {
  kAtom,
  kNeg,
  kOr,
  kKh,
  // Sugar; removed by desugar().
  kAnd,
  kImplies,
  kTop,
  kBot,
  kAlways,     // A
  kSomewhere,  // E
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class Formula {
 public:
  static Formula atom(std::string name);
  static Formula neg(Formula f);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula kh(Agent agent, Formula cond, Formula goal);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula top();
  static Formula bot();
  static Formula always(Formula f);
  static Formula somewhere(Formula f);

  Op op() const { return node_->op; }
  // Atom name or Kh agent; empty otherwise.
  const std::string& label() const { return node_->label; }
  const std::string& name() const { return node_->label; }
  const Agent& agent() const { return node_->label; }

  // First operand (Neg, A, E, binary lhs, Kh condition).
  const Formula& lhs() const { return node_->children[0]; }
  // Second operand (binary rhs, Kh goal).
  const Formula& rhs() const { return node_->children[1]; }
  const Formula& cond() const { return lhs(); }
  const Formula& goal() const { return rhs(); }
  const std::vector<Formula>& children() const { return node_->children; }

  // True when no sugar occurs anywhere in the tree.
  bool is_core() const { return node_->core; }
  // Number of nodes of the formula read as a tree.
  std::size_t size() const { return node_->size; }
  // Maximal nesting of Kh (A and E count as one level).
  int modal_depth() const { return node_->depth; }
  std::size_t hash() const { return node_->hash; }

  // Identity of the shared node; equal formulas may have different ids.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node {
    Op op;
    std::string label;
    std::vector<Formula> children;
    std::size_t hash;
    std::size_t size;
    int depth;
    bool core;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Op op, std::string label, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Parses `text`. When `agents` is nonempty every Kh agent must belong to it.
Formula parse(std::string_view text, const AgentSet& agents = {});

// Rewrites sugar into the core constructors. A phi becomes the disjunction
// over all agents of Kh[i](~phi, bot); bot is `_p0 & ~_p0` expanded.
// Throws std::invalid_argument when `agents` is empty and the formula uses A
// or E.
Formula desugar(const Formula& f, const AgentSet& agents);

std::string print(const Formula& f);

// Distinct subformulas in post-order (children before parents), each listed
// once at its first occurrence.
std::vector<Formula> subformula_closure(const Formula& f);

struct KhTriple {
  Agent agent;
  Formula cond;
  Formula goal;
  friend bool operator==(const KhTriple&, const KhTriple&) = default;
};

// Argument triples of all Kh subformulas, deduplicated, in closure order.
std::vector<KhTriple> kh_pairs(const Formula& f);

std::set<std::string> atoms_of(const Formula& f);
std::set<Agent> agents_of(const Formula& f);

// Replaces atoms by formulas and renames Kh agents; used to instantiate
// schematic templates.
Formula substitute(const Formula& f,
                   const std::function<std::optional<Formula>(const std::string&)>& atoms,
                   const std::function<Agent(const Agent&)>& agents);

bool is_identifier(std::string_view token);

}  // namespace khow

template <>
struct std::hash<khow::Formula> {
  std::size_t operator()(const khow::Formula& f) const { return f.hash(); }
};

#endif  // KHOW_SYNTAX_HPP_
