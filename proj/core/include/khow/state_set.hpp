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

// Dense bit-set of states and dense binary relations over state indices.

#ifndef KHOW_STATE_SET_HPP_
#define KHOW_STATE_SET_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace khow {

using StateId = std::size_t;

class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t universe);
  StateSet(std::size_t universe, std::initializer_list<StateId> members);

  static StateSet full(std::size_t universe);

  std::size_t universe() const { return universe_; }
  std::size_t count() const;
  bool empty() const;
  bool contains(StateId s) const {
    return (words_[s >> 6] >> (s & 63)) & 1u;
  }
  void insert(StateId s) { words_[s >> 6] |= std::uint64_t{1} << (s & 63); }
  void erase(StateId s) { words_[s >> 6] &= ~(std::uint64_t{1} << (s & 63)); }

  bool subset_of(const StateSet& other) const;
  bool intersects(const StateSet& other) const;
  StateSet complement() const;

  StateSet& operator|=(const StateSet& other);
  StateSet& operator&=(const StateSet& other);
  StateSet& operator-=(const StateSet& other);
  friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
  friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
  friend StateSet operator-(StateSet a, const StateSet& b) { return a -= b; }

  std::vector<StateId> members() const;

  // Calls fn(s) for every member in ascending order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = __builtin_ctzll(bits);
        fn(static_cast<StateId>(w * 64 + static_cast<std::size_t>(bit)));
        bits &= bits - 1;
      }
    }
  }

  std::size_t hash() const;

  friend bool operator==(const StateSet&, const StateSet&) = default;
  friend std::strong_ordering operator<=>(const StateSet&, const StateSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

// Binary relation on {0..n-1}, stored as one successor set per source.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t universe);

  static Relation identity(std::size_t universe);

  std::size_t universe() const { return rows_.size(); }
  void insert(StateId from, StateId to) { rows_[from].insert(to); }
  bool contains(StateId from, StateId to) const { return rows_[from].contains(to); }
  const StateSet& successors(StateId from) const { return rows_[from]; }

  bool empty() const;
  std::size_t size() const;
  StateSet image(const StateSet& sources) const;
  // States with at least one successor.
  StateSet domain() const;

  // Pairs (u, w) with (u, v) in *this and (v, w) in next.
  Relation then(const Relation& next) const;
  Relation restrict_sources(const StateSet& sources) const;
  bool subset_of(const Relation& other) const;
  Relation& operator|=(const Relation& other);

  std::size_t hash() const;

  friend bool operator==(const Relation&, const Relation&) = default;
  friend std::strong_ordering operator<=>(const Relation&, const Relation&) = default;

 private:
  std::vector<StateSet> rows_;
};

}  // namespace khow

#endif  // KHOW_STATE_SET_HPP_
