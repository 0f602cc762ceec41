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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "aqss/error.hpp"
#include "aqss/link_cover.hpp"
#include "test_util.hpp"

namespace aqss {
namespace {

using testing::structure;

// alpha, beta, chi, delta, epsilon, phi = 0..5.
ASGraph bridged_triangles() { return ASGraph(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}}); }

ASGraph complete(std::size_t n) {
  std::vector<IndexPair> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return ASGraph(n, edges);
}

ASGraph random_graph(std::mt19937& rng, std::size_t n, double density) {
  std::bernoulli_distribution edge(density);
  std::vector<IndexPair> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (edge(rng)) edges.emplace_back(i, j);
    }
  }
  return ASGraph(n, edges);
}

// Oracle: every set partition as a restricted growth string, in lexicographic
// order. Returns all clique partitions of minimum size.
std::vector<std::vector<std::size_t>> minimum_partitions_oracle(const ASGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::size_t>> best;
  std::size_t best_size = n + 1;
  std::vector<std::size_t> rgs(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t v, std::size_t used) {
    if (v == n) {
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          if (rgs[a] == rgs[b] && !g.adjacent(a, b)) return;
        }
      }
      if (used < best_size) {
        best_size = used;
        best.clear();
      }
      if (used == best_size) best.push_back(rgs);
      return;
    }
    for (std::size_t c = 0; c <= used && c < n; ++c) {
      rgs[v] = c;
      rec(v + 1, std::max(used, c + 1));
    }
  };
  if (n == 0) return {{}};
  rec(0, 0);
  return best;
}

TEST(ASGraph, FromStructures) {
  const auto g = build_as_graph(structure({"ABC", "BD", "EFG"}));
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.edges(), (std::vector<IndexPair>{{0, 1}}));
  const auto k = build_as_graph(structure({"ABC", "ADE", "BDF", "ABD"}));
  EXPECT_EQ(k.edges().size(), 6u);
  const auto one = build_as_graph(structure({"AB"}));
  EXPECT_EQ(one.vertex_count(), 1u);
  EXPECT_TRUE(one.edges().empty());
  EXPECT_THROW(ASGraph(2, {{0, 0}}), InputError);
  EXPECT_THROW(ASGraph(2, {{0, 2}}), InputError);
}

TEST(ExactCover, Examples) {
  const auto bridged = exact_min_clique_cover(bridged_triangles());
  EXPECT_EQ(bridged.size(), 2u);
  EXPECT_EQ(bridged.classes(), (std::vector<std::vector<std::size_t>>{{0, 1, 2}, {3, 4, 5}}));
  EXPECT_EQ(exact_min_clique_cover(complete(5)).size(), 1u);
  EXPECT_EQ(exact_min_clique_cover(ASGraph(4, {})).size(), 4u);
  EXPECT_EQ(exact_min_clique_cover(ASGraph(0, {})).size(), 0u);
}

TEST(ExactCover, VertexCap) {
  EXPECT_THROW(exact_min_clique_cover(ASGraph(21, {})), ResourceLimit);
  EXPECT_EQ(exact_min_clique_cover(ASGraph(21, {}), 21).size(), 21u);
}

TEST(ExactCover, MatchesPartitionOracleOnRandomGraphs) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  std::uniform_real_distribution<double> density(0.1, 0.9);
  for (int trial = 0; trial < 150; ++trial) {
    const ASGraph g = random_graph(rng, size(rng), density(rng));
    const auto oracle = minimum_partitions_oracle(g);
    const auto exact = exact_min_clique_cover(g);
    ASSERT_EQ(exact.size(), *std::max_element(oracle.front().begin(), oracle.front().end()) + 1) << trial;
    EXPECT_TRUE(is_clique_partition(g, exact));
    EXPECT_TRUE(classes_pairwise_separated(g, exact));
    EXPECT_EQ(exact.assignment(), oracle.front()) << "lexicographically smallest minimum cover";
    EXPECT_GE(exact.size(), component_count(g));
    const bool is_complete = g.edges().size() == g.vertex_count() * (g.vertex_count() - 1) / 2;
    EXPECT_EQ(exact.size() == 1, is_complete);

    const auto greedy = greedy_clique_cover(g);
    EXPECT_TRUE(is_clique_partition(g, greedy));
    EXPECT_GE(greedy.size(), exact.size());

    bool truncated = true;
    const auto every = all_min_clique_covers(g, 100000, truncated);
    EXPECT_FALSE(truncated);
    ASSERT_EQ(every.size(), oracle.size());
    for (std::size_t i = 0; i < every.size(); ++i) EXPECT_EQ(every[i].assignment(), oracle[i]);
  }
}

TEST(AllCovers, Truncation) {
  bool truncated = false;
  const auto some = all_min_clique_covers(ASGraph(3, {{0, 1}, {1, 2}}), 1, truncated);
  EXPECT_EQ(some.size(), 1u);
  EXPECT_TRUE(truncated);
}

TEST(GreedyCover, Examples) {
  EXPECT_EQ(greedy_clique_cover(complete(6)).size(), 1u);
  EXPECT_EQ(greedy_clique_cover(ASGraph(5, {})).size(), 5u);
  const auto bridged = greedy_clique_cover(bridged_triangles());
  EXPECT_TRUE(bridged.size() == 2u || bridged.size() == 3u);
  EXPECT_TRUE(is_clique_partition(bridged_triangles(), bridged));
}

TEST(MergeNormalize, RestoresSeparation) {
  const ASGraph g = complete(3);
  const PartialLinkClassification split({{0}, {1}, {2}});
  EXPECT_FALSE(classes_pairwise_separated(g, split));
  const auto merged = merge_normalize(g, split);
  EXPECT_EQ(merged.size(), 1u);
  EXPECT_TRUE(classes_pairwise_separated(g, merged));
}

TEST(Classification, RejectsNonCliques) {
  const ASGraph g(3, {{0, 1}});
  EXPECT_FALSE(is_clique_partition(g, PartialLinkClassification({{0, 2}, {1}})));
  EXPECT_FALSE(is_clique_partition(g, PartialLinkClassification({{0, 1}})));
  EXPECT_TRUE(is_clique_partition(g, PartialLinkClassification({{0, 1}, {2}})));
}

TEST(Lambda, KnownStructures) {
  EXPECT_EQ(lambda(structure({"ABC", "ADE", "BDF"})), 1u);
  EXPECT_EQ(lambda(structure({"ABC", "BD", "EFG"})), 2u);
  EXPECT_EQ(lambda(structure({"ABC", "DE", "FGH"})), 3u);
}

TEST(ComponentCount, Examples) {
  EXPECT_EQ(component_count(bridged_triangles()), 1u);
  EXPECT_EQ(component_count(ASGraph(3, {})), 3u);
  EXPECT_EQ(component_count(build_as_graph(structure({"ABC", "DE", "FGH"}))), 3u);
}

TEST(Lambda, StructureProperties) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    const auto g = testing::random_structure(rng, 7, 7, 3);
    const auto graph = build_as_graph(g);
    const std::size_t l = lambda(g);
    EXPECT_GE(l, 1u);
    EXPECT_GE(l, component_count(graph));
    EXPECT_EQ(l == 1, check_pairwise_overlap(g).empty()) << g.to_string();
  }
}

}  // namespace
}  // namespace aqss
