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

#ifndef AQSS_SCHEME_HPP_
#define AQSS_SCHEME_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aqss/access_structure.hpp"
#include "aqss/link_cover.hpp"
#include "json.hpp"

namespace aqss {

// ((k,n)): n shares, any k reconstruct. Requires 1 <= k <= n < 2k.
class ThresholdParams {
 public:
  ThresholdParams(int k, int n);

  int k() const noexcept { return k_; }
  int n() const noexcept { return n_; }
  bool is_polynomial() const noexcept { return n_ == 2 * k_ - 1; }
  bool is_and() const noexcept { return n_ == k_; }
  std::string to_string() const;  // "((2,3))"

  friend bool operator==(const ThresholdParams&, const ThresholdParams&) = default;

 private:
  int k_;
  int n_;
};

// Nested threshold layers. Leaves are player shares or shares resident with
// the dealer.
class SchemeTree {
 public:
  enum class Kind { kThreshold, kPlayer, kResident };

  // Throws InputError unless children.size() == params.n().
  static SchemeTree threshold(ThresholdParams params, std::vector<SchemeTree> children);
  static SchemeTree player(PlayerId owner);
  static SchemeTree resident(std::size_t index);

  Kind kind() const noexcept { return kind_; }
  bool is_threshold() const noexcept { return kind_ == Kind::kThreshold; }
  const ThresholdParams& params() const;
  const std::vector<SchemeTree>& children() const noexcept { return children_; }
  const PlayerId& owner() const;
  std::size_t resident_index() const;

  friend bool operator==(const SchemeTree&, const SchemeTree&) = default;

 private:
  SchemeTree(Kind kind, ThresholdParams params) : kind_(kind), params_(params) {}

  Kind kind_;
  ThresholdParams params_;
  std::vector<SchemeTree> children_;
  std::optional<PlayerId> owner_;
  std::size_t resident_ = 0;
};

struct ThresholdShape {
  ThresholdParams params;
  PlayerSet support;
};

// Recognizes structures whose minimal sets are exactly the k-subsets of an
// n-player support with n < 2k.
std::optional<ThresholdShape> detect_threshold_structure(const AccessStructure& structure);

// A self-dual threshold structure ((k,2k-1)) over part of the class's players
// whose closure contains the class's closure. Tries maximal_structure() first;
// otherwise the smallest (then lexicographically first) odd support on which
// majority authorizes every minimal set. Empty if none exists.
std::optional<ThresholdShape> threshold_completion(const AccessStructure& class_structure);

// Sub-structure formed by the given minimal sets over their own players.
AccessStructure class_structure(const AccessStructure& structure, const std::vector<std::size_t>& members);

// Conventional scheme for one partially linked class: ((|a|,|a|)) for a single
// set, else ((r,2r-1)) over per-set AND layers and r-1 completion shares.
// Throws UnsupportedStructure when the class has no threshold completion.
SchemeTree build_class_scheme(const AccessStructure& class_structure);

// Assisted scheme: a ((lambda,2lambda-1)) layer over one class scheme per class
// plus lambda-1 resident shares; just the class scheme when lambda = 1.
SchemeTree build_scheme(const AccessStructure& structure, const PartialLinkClassification& classification);

std::size_t resident_share_count(const SchemeTree& tree);
std::size_t player_share_count(const SchemeTree& tree);

// Leaves in depth-first order.
std::vector<const SchemeTree*> leaves(const SchemeTree& tree);

// Counts for the common-player embedding: X joins every authorized set and
// keeps its shares.
struct TrivialEmbeddingAnalysis {
  std::size_t r = 0;              // authorized sets in the structure
  std::size_t x = 0;              // minimal sets of the completion that contain X
  std::size_t naive_count = 0;    // r + (r-1) x
  std::size_t better_count = 0;   // r
  std::size_t theorem_count = 0;  // lambda - 1
  PlayerId dealer_player{"X"};
  AccessStructure augmented;      // X added to every minimal set
  AccessStructure completion;     // maximal completion of `augmented`
};

TrivialEmbeddingAnalysis analyze_trivial_embedding(const AccessStructure& structure);

nlohmann::json to_json(const SchemeTree& tree);
SchemeTree scheme_from_json(const nlohmann::json& json);

}  // namespace aqss

#endif  // AQSS_SCHEME_HPP_
