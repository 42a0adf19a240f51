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

#include "khow/state_set.hpp"

#include <bit>
#include <functional>

namespace khow {

StateSet::StateSet(std::size_t universe)
    : universe_(universe), words_((universe + 63) / 64, 0) {}

StateSet::StateSet(std::size_t universe, std::initializer_list<StateId> members)
    : StateSet(universe) {
  for (StateId s : members) insert(s);
}

StateSet StateSet::full(std::size_t universe) {
  StateSet s(universe);
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  if (universe % 64 != 0 && !s.words_.empty()) {
    s.words_.back() = (std::uint64_t{1} << (universe % 64)) - 1;
  }
  return s;
}

std::size_t StateSet::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool StateSet::empty() const {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

bool StateSet::subset_of(const StateSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

bool StateSet::intersects(const StateSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & other.words_[i]) != 0) return true;
  }
  return false;
}

StateSet StateSet::complement() const { return full(universe_) - *this; }

StateSet& StateSet::operator|=(const StateSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

StateSet& StateSet::operator&=(const StateSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

StateSet& StateSet::operator-=(const StateSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

std::vector<StateId> StateSet::members() const {
  std::vector<StateId> out;
  for_each([&](StateId s) { out.push_back(s); });
  return out;
}

std::size_t StateSet::hash() const {
  std::size_t h = universe_;
  for (auto w : words_) {
    h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

Relation::Relation(std::size_t universe) : rows_(universe, StateSet(universe)) {}

Relation Relation::identity(std::size_t universe) {
  Relation r(universe);
  for (StateId s = 0; s < universe; ++s) r.insert(s, s);
  return r;
}

bool Relation::empty() const {
  for (const auto& row : rows_) {
    if (!row.empty()) return false;
  }
  return true;
}

std::size_t Relation::size() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.count();
  return n;
}

StateSet Relation::image(const StateSet& sources) const {
  StateSet out(universe());
  sources.for_each([&](StateId s) { out |= rows_[s]; });
  return out;
}

StateSet Relation::domain() const {
  StateSet out(universe());
  for (StateId s = 0; s < rows_.size(); ++s) {
    if (!rows_[s].empty()) out.insert(s);
  }
  return out;
}

Relation Relation::then(const Relation& next) const {
  Relation out(universe());
  for (StateId s = 0; s < rows_.size(); ++s) out.rows_[s] = next.image(rows_[s]);
  return out;
}

Relation Relation::restrict_sources(const StateSet& sources) const {
  Relation out(universe());
  sources.for_each([&](StateId s) { out.rows_[s] = rows_[s]; });
  return out;
}

bool Relation::subset_of(const Relation& other) const {
  for (std::size_t s = 0; s < rows_.size(); ++s) {
    if (!rows_[s].subset_of(other.rows_[s])) return false;
  }
  return true;
}

Relation& Relation::operator|=(const Relation& other) {
  for (std::size_t s = 0; s < rows_.size(); ++s) rows_[s] |= other.rows_[s];
  return *this;
}

std::size_t Relation::hash() const {
  std::size_t h = rows_.size();
  for (const auto& row : rows_) h = h * 1000003u ^ row.hash();
  return h;
}

}  // namespace khow
