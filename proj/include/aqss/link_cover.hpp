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

#ifndef AQSS_LINK_COVER_HPP_
#define AQSS_LINK_COVER_HPP_

#include <cstddef>
#include <vector>

#include "aqss/access_structure.hpp"

namespace aqss {

inline constexpr std::size_t kDefaultVertexCap = 20;

// Access-structure graph: one vertex per minimal authorized set, an edge
// between two vertices iff their sets intersect.
class ASGraph {
 public:
  // Throws InputError on self-loops or out-of-range endpoints.
  ASGraph(std::size_t vertex_count, std::vector<IndexPair> edges);

  std::size_t vertex_count() const noexcept { return n_; }
  // Normalized (j<k), sorted, without duplicates.
  const std::vector<IndexPair>& edges() const noexcept { return edges_; }
  bool adjacent(std::size_t j, std::size_t k) const { return adjacency_[j * n_ + k] != 0; }
  std::size_t degree(std::size_t v) const;

 private:
  std::size_t n_;
  std::vector<IndexPair> edges_;
  std::vector<char> adjacency_;
};

// A partition of the vertices into cliques. Stored canonically: members of a
// class ascending, classes ordered by their smallest member.
class PartialLinkClassification {
 public:
  explicit PartialLinkClassification(std::vector<std::vector<std::size_t>> classes);

  const std::vector<std::vector<std::size_t>>& classes() const noexcept { return classes_; }
  std::size_t size() const noexcept { return classes_.size(); }
  // assignment()[v] is the class index of vertex v.
  std::vector<std::size_t> assignment() const;

  friend bool operator==(const PartialLinkClassification&, const PartialLinkClassification&) = default;

 private:
  std::vector<std::vector<std::size_t>> classes_;
};

ASGraph build_as_graph(const AccessStructure& structure);

// Partition of all vertices into nonempty disjoint cliques (property (a)).
bool is_clique_partition(const ASGraph& graph, const PartialLinkClassification& classification);

// Every pair of distinct classes has a non-adjacent cross pair (property (b)).
bool classes_pairwise_separated(const ASGraph& graph, const PartialLinkClassification& classification);

// Merges classes whose union is a clique until none remain.
PartialLinkClassification merge_normalize(const ASGraph& graph, PartialLinkClassification classification);

// Minimum clique cover. Ties resolve to the lexicographically smallest class
// assignment in vertex order. Throws ResourceLimit above `vertex_cap` vertices.
PartialLinkClassification exact_min_clique_cover(const ASGraph& graph, std::size_t vertex_cap = kDefaultVertexCap);

// Every minimum clique cover, in lexicographic assignment order, up to
// `limit` of them. `truncated` reports whether more exist.
std::vector<PartialLinkClassification> all_min_clique_covers(const ASGraph& graph, std::size_t limit, bool& truncated,
                                                             std::size_t vertex_cap = kDefaultVertexCap);

// Grows cliques from the highest-degree uncovered vertex. Valid, not minimal.
PartialLinkClassification greedy_clique_cover(const ASGraph& graph);

// Size of the smallest partial link classification of the structure.
std::size_t lambda(const AccessStructure& structure, std::size_t vertex_cap = kDefaultVertexCap);

std::size_t component_count(const ASGraph& graph);

}  // namespace aqss

#endif  // AQSS_LINK_COVER_HPP_
