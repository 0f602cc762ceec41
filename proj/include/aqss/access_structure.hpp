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

#ifndef AQSS_ACCESS_STRUCTURE_HPP_
#define AQSS_ACCESS_STRUCTURE_HPP_

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aqss {

// Operations that enumerate subsets of the universe refuse larger inputs.
inline constexpr std::size_t kMaxEnumerationPlayers = 20;

// A player label: a single token with no whitespace, commas, braces or semicolons.
class PlayerId {
 public:
  explicit PlayerId(std::string label);

  const std::string& label() const noexcept { return label_; }

  friend auto operator<=>(const PlayerId&, const PlayerId&) = default;
  friend bool operator==(const PlayerId&, const PlayerId&) = default;

 private:
  std::string label_;
};

// Finite set of players, kept sorted. Sets order lexicographically by their
// sorted member lists, so {A,B} < {A,B,C} < {A,C} < {B}.
class PlayerSet {
 public:
  PlayerSet() = default;
  PlayerSet(std::initializer_list<PlayerId> members);
  explicit PlayerSet(std::vector<PlayerId> members);

  // "ABC" -> {A,B,C}. Each character becomes one player.
  static PlayerSet from_letters(std::string_view letters);

  const std::vector<PlayerId>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  bool contains(const PlayerId& player) const;
  bool is_subset_of(const PlayerSet& other) const;
  bool intersects(const PlayerSet& other) const;

  PlayerSet united(const PlayerSet& other) const;
  PlayerSet minus(const PlayerSet& other) const;
  PlayerSet with(const PlayerId& player) const;
  PlayerSet without(const PlayerId& player) const;

  // "ABC" when every label is one character, otherwise "{alice,bob}".
  std::string to_string() const;

  friend auto operator<=>(const PlayerSet&, const PlayerSet&) = default;
  friend bool operator==(const PlayerSet&, const PlayerSet&) = default;

 private:
  std::vector<PlayerId> members_;
};

// A monotone access structure in antichain normal form: the universe of
// players plus the inclusion-minimal authorized sets, sorted lexicographically.
class AccessStructure {
 public:
  // Reduces `sets` to its minimal antichain. Throws InputError when there is no
  // set, when a set is empty, or when a set leaves the universe.
  AccessStructure(PlayerSet universe, std::vector<PlayerSet> sets);

  const PlayerSet& universe() const noexcept { return universe_; }
  const std::vector<PlayerSet>& minimal_sets() const noexcept { return minimal_sets_; }
  std::size_t size() const noexcept { return minimal_sets_.size(); }

  // "{ABC, BD, EFG}".
  std::string to_string() const;

  friend bool operator==(const AccessStructure&, const AccessStructure&) = default;

 private:
  PlayerSet universe_;
  std::vector<PlayerSet> minimal_sets_;
};

using IndexPair = std::pair<std::size_t, std::size_t>;

// Structure whose universe is the union of the given sets.
AccessStructure reduce_to_minimal(std::vector<PlayerSet> sets);

// True iff `coalition` contains some minimal set. Throws InputError when the
// coalition mentions a player outside the universe.
bool is_authorized(const AccessStructure& structure, const PlayerSet& coalition);

// Every pair (j,k), j<k, of minimal sets with empty intersection. Empty iff the
// structure satisfies the no-cloning overlap condition.
std::vector<IndexPair> check_pairwise_overlap(const AccessStructure& structure);

// Inclusion-maximal unauthorized subsets of the universe, largest first, then
// lexicographic.
std::vector<PlayerSet> maximal_unauthorized_sets(const AccessStructure& structure);

// True iff for every T in the universe exactly one of T, complement(T) is authorized.
bool is_self_dual(const AccessStructure& structure);

// Self-dual completion whose closure contains the closure of `structure`.
// Repeatedly takes the lexicographically smallest maximal unauthorized set
// whose complement is also unauthorized and authorizes that complement.
// Throws InputError if the overlap condition fails and UnsupportedStructure if
// the iteration budget runs out.
AccessStructure maximal_structure(const AccessStructure& structure);

// Removes `excluded` from the universe and from every minimal set, then
// re-reduces. Throws InputError if the player is unknown or a set becomes empty.
AccessStructure restrict_without(const AccessStructure& structure, const PlayerId& excluded);

}  // namespace aqss

#endif  // AQSS_ACCESS_STRUCTURE_HPP_
