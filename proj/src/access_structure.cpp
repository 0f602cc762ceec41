// Copyright 2026 The AQSS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aqss/access_structure.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <iterator>

#include "aqss/error.hpp"

namespace aqss {

PlayerId::PlayerId(std::string label) : label_(std::move(label)) {
  if (label_.empty()) {
    throw InputError("player label must be nonempty");
  }
  for (char c : label_) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '{' || c == '}' || c == ';') {
      throw InputError("invalid character in player label '" + label_ + "'");
    }
  }
}

PlayerSet::PlayerSet(std::initializer_list<PlayerId> members) : PlayerSet(std::vector<PlayerId>(members)) {}

PlayerSet::PlayerSet(std::vector<PlayerId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

PlayerSet PlayerSet::from_letters(std::string_view letters) {
  std::vector<PlayerId> members;
  for (char c : letters) {
    members.emplace_back(std::string(1, c));
  }
  return PlayerSet(std::move(members));
}

bool PlayerSet::contains(const PlayerId& player) const {
  return std::binary_search(members_.begin(), members_.end(), player);
}

bool PlayerSet::is_subset_of(const PlayerSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

bool PlayerSet::intersects(const PlayerSet& other) const {
  auto a = members_.begin();
  auto b = other.members_.begin();
  while (a != members_.end() && b != other.members_.end()) {
    if (*a == *b) return true;
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return false;
}

PlayerSet PlayerSet::united(const PlayerSet& other) const {
  std::vector<PlayerId> out;
  std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                 std::back_inserter(out));
  return PlayerSet(std::move(out));
}

PlayerSet PlayerSet::minus(const PlayerSet& other) const {
  std::vector<PlayerId> out;
  std::set_difference(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                      std::back_inserter(out));
  return PlayerSet(std::move(out));
}

PlayerSet PlayerSet::with(const PlayerId& player) const {
  std::vector<PlayerId> out = members_;
  out.push_back(player);
  return PlayerSet(std::move(out));
}

PlayerSet PlayerSet::without(const PlayerId& player) const {
  std::vector<PlayerId> out;
  for (const auto& m : members_) {
    if (m != player) out.push_back(m);
  }
  return PlayerSet(std::move(out));
}

std::string PlayerSet::to_string() const {
  bool compact = !members_.empty() &&
                 std::all_of(members_.begin(), members_.end(), [](const PlayerId& p) { return p.label().size() == 1; });
  std::string out;
  if (compact) {
    for (const auto& m : members_) out += m.label();
    return out;
  }
  out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ",";
    out += members_[i].label();
  }
  return out + "}";
}

namespace {

std::vector<PlayerSet> minimal_antichain(std::vector<PlayerSet> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<PlayerSet> out;
  for (const auto& s : sets) {
    bool dominated = std::any_of(sets.begin(), sets.end(),
                                 [&](const PlayerSet& t) { return t != s && t.is_subset_of(s); });
    if (!dominated) out.push_back(s);
  }
  return out;
}

using Mask = std::uint32_t;

// Bit-level view of a structure whose universe is small enough to enumerate.
class SubsetIndex {
 public:
  explicit SubsetIndex(const AccessStructure& structure) : universe_(structure.universe().members()) {
    if (universe_.size() > kMaxEnumerationPlayers) {
      throw ResourceLimit("universe has " + std::to_string(universe_.size()) + " players; subset enumeration is capped at " +
                          std::to_string(kMaxEnumerationPlayers));
    }
    full_ = universe_.empty() ? 0 : static_cast<Mask>((Mask{1} << universe_.size()) - 1);
    for (const auto& s : structure.minimal_sets()) minimal_.push_back(mask_of(s));
  }

  Mask full() const { return full_; }

  Mask mask_of(const PlayerSet& set) const {
    Mask m = 0;
    for (const auto& p : set) {
      auto it = std::lower_bound(universe_.begin(), universe_.end(), p);
      m |= Mask{1} << static_cast<unsigned>(it - universe_.begin());
    }
    return m;
  }

  PlayerSet set_of(Mask m) const {
    std::vector<PlayerId> members;
    for (std::size_t i = 0; i < universe_.size(); ++i) {
      if (m & (Mask{1} << i)) members.push_back(universe_[i]);
    }
    return PlayerSet(std::move(members));
  }

  bool authorized(Mask m) const {
    return std::any_of(minimal_.begin(), minimal_.end(), [m](Mask a) { return (a & ~m) == 0; });
  }

  std::vector<Mask> maximal_unauthorized() const {
    std::vector<Mask> out;
    for (Mask m = 0;; ++m) {
      if (!authorized(m)) {
        bool maximal = true;
        for (std::size_t i = 0; i < universe_.size() && maximal; ++i) {
          Mask bit = Mask{1} << i;
          if (!(m & bit) && !authorized(m | bit)) maximal = false;
        }
        if (maximal) out.push_back(m);
      }
      if (m == full_) break;
    }
    return out;
  }

 private:
  std::vector<PlayerId> universe_;
  std::vector<Mask> minimal_;
  Mask full_ = 0;
};

}  // namespace

AccessStructure::AccessStructure(PlayerSet universe, std::vector<PlayerSet> sets) : universe_(std::move(universe)) {
  if (sets.empty()) {
    throw InputError("access structure needs at least one authorized set");
  }
  for (const auto& s : sets) {
    if (s.empty()) {
      throw InputError("authorized sets must be nonempty");
    }
    if (!s.is_subset_of(universe_)) {
      throw InputError("authorized set " + s.to_string() + " mentions players outside the universe " +
                       universe_.to_string());
    }
  }
  minimal_sets_ = minimal_antichain(std::move(sets));
}

std::string AccessStructure::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < minimal_sets_.size(); ++i) {
    if (i) out += ", ";
    out += minimal_sets_[i].to_string();
  }
  return out + "}";
}

AccessStructure reduce_to_minimal(std::vector<PlayerSet> sets) {
  PlayerSet universe;
  for (const auto& s : sets) universe = universe.united(s);
  return AccessStructure(std::move(universe), std::move(sets));
}

bool is_authorized(const AccessStructure& structure, const PlayerSet& coalition) {
  if (!coalition.is_subset_of(structure.universe())) {
    throw InputError("coalition " + coalition.to_string() + " is not within the universe " +
                     structure.universe().to_string());
  }
  const auto& sets = structure.minimal_sets();
  return std::any_of(sets.begin(), sets.end(), [&](const PlayerSet& a) { return a.is_subset_of(coalition); });
}

std::vector<IndexPair> check_pairwise_overlap(const AccessStructure& structure) {
  std::vector<IndexPair> out;
  const auto& sets = structure.minimal_sets();
  for (std::size_t j = 0; j < sets.size(); ++j) {
    for (std::size_t k = j + 1; k < sets.size(); ++k) {
      if (!sets[j].intersects(sets[k])) out.emplace_back(j, k);
    }
  }
  return out;
}

std::vector<PlayerSet> maximal_unauthorized_sets(const AccessStructure& structure) {
  SubsetIndex index(structure);
  std::vector<PlayerSet> out;
  for (Mask m : index.maximal_unauthorized()) out.push_back(index.set_of(m));
  std::stable_sort(out.begin(), out.end(), [](const PlayerSet& a, const PlayerSet& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  return out;
}

bool is_self_dual(const AccessStructure& structure) {
  SubsetIndex index(structure);
  for (Mask m = 0;; ++m) {
    if (index.authorized(m) == index.authorized(index.full() & ~m)) return false;
    if (m == index.full()) break;
  }
  return true;
}

AccessStructure maximal_structure(const AccessStructure& structure) {
  if (!check_pairwise_overlap(structure).empty()) {
    throw InputError("no self-dual completion exists: " + structure.to_string() +
                     " has disjoint authorized sets");
  }
  constexpr int kIterationBudget = 1 << 16;
  AccessStructure current = structure;
  for (int iter = 0; iter < kIterationBudget; ++iter) {
    SubsetIndex index(current);
    std::vector<PlayerSet> defects;
    for (Mask m : index.maximal_unauthorized()) {
      if (!index.authorized(index.full() & ~m)) defects.push_back(index.set_of(m));
    }
    if (defects.empty()) return current;
    const PlayerSet& smallest = *std::min_element(defects.begin(), defects.end());
    std::vector<PlayerSet> sets = current.minimal_sets();
    sets.push_back(current.universe().minus(smallest));
    current = AccessStructure(current.universe(), std::move(sets));
  }
  throw UnsupportedStructure("maximal completion search exhausted for " + structure.to_string());
}

AccessStructure restrict_without(const AccessStructure& structure, const PlayerId& excluded) {
  if (!structure.universe().contains(excluded)) {
    throw InputError("player " + excluded.label() + " is not in the universe " + structure.universe().to_string());
  }
  std::vector<PlayerSet> sets;
  for (const auto& s : structure.minimal_sets()) {
    PlayerSet reduced = s.without(excluded);
    if (reduced.empty()) {
      throw InputError("degenerate restriction: removing " + excluded.label() + " empties authorized set " +
                       s.to_string());
    }
    sets.push_back(std::move(reduced));
  }
  return AccessStructure(structure.universe().without(excluded), std::move(sets));
}

}  // namespace aqss
