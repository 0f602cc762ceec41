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

#include "aqss/access_structure.hpp"
#include "aqss/error.hpp"
#include "test_util.hpp"

namespace aqss {
namespace {

using testing::authorized_oracle;
using testing::from_mask;
using testing::letters;
using testing::structure;
using testing::to_mask;

std::vector<std::string> names(const std::vector<PlayerSet>& sets) {
  std::vector<std::string> out;
  for (const auto& s : sets) out.push_back(s.to_string());
  return out;
}

TEST(PlayerId, RejectsSeparators) {
  EXPECT_NO_THROW(PlayerId("alice"));
  EXPECT_THROW(PlayerId(""), InputError);
  EXPECT_THROW(PlayerId("a b"), InputError);
  EXPECT_THROW(PlayerId("a,b"), InputError);
  EXPECT_THROW(PlayerId("{a"), InputError);
  EXPECT_THROW(PlayerId("a;"), InputError);
}

TEST(PlayerSet, SetSemanticsAndOrder) {
  PlayerSet s{PlayerId("B"), PlayerId("A"), PlayerId("B")};
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.to_string(), "AB");
  EXPECT_LT(letters("AB"), letters("ABC"));
  EXPECT_LT(letters("ABC"), letters("AC"));
  EXPECT_LT(letters("AC"), letters("B"));
  EXPECT_EQ((PlayerSet{PlayerId("bob"), PlayerId("al")}).to_string(), "{al,bob}");
  EXPECT_TRUE(letters("AB").is_subset_of(letters("ABC")));
  EXPECT_FALSE(letters("AD").intersects(letters("BC")));
  EXPECT_EQ(letters("ABC").minus(letters("B")), letters("AC"));
}

TEST(ReduceToMinimal, Examples) {
  EXPECT_EQ(structure({"ABC", "AB", "AD"}).to_string(), "{AB, AD}");
  EXPECT_EQ(structure({"ABC", "ADE", "BDF"}).to_string(), "{ABC, ADE, BDF}");
  EXPECT_EQ(structure({"A"}).to_string(), "{A}");
  EXPECT_EQ(structure({"AB", "AB"}).size(), 1u);
  EXPECT_THROW(reduce_to_minimal({}), InputError);
  EXPECT_THROW(reduce_to_minimal({PlayerSet{}}), InputError);
}

TEST(ReduceToMinimal, IdempotentAndClosurePreserving) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PlayerSet> raw;
    std::uniform_int_distribution<std::uint32_t> pick(1, 63);
    const PlayerSet universe = letters("ABCDEF");
    for (int i = 0; i < 5; ++i) raw.push_back(from_mask(universe, pick(rng)));
    const AccessStructure once = reduce_to_minimal(raw);
    EXPECT_EQ(reduce_to_minimal(once.minimal_sets()).minimal_sets(), once.minimal_sets());
    std::vector<std::uint32_t> in_masks;
    for (const auto& s : raw) in_masks.push_back(to_mask(universe, s));
    for (std::uint32_t t = 0; t < 64; ++t) {
      EXPECT_EQ(is_authorized(AccessStructure(universe, once.minimal_sets()), from_mask(universe, t)),
                authorized_oracle(in_masks, t));
    }
    for (const auto& a : once.minimal_sets()) {
      for (const auto& b : once.minimal_sets()) {
        if (!(a == b)) EXPECT_FALSE(a.is_subset_of(b));
      }
    }
  }
}

TEST(IsAuthorized, Examples) {
  const auto g = structure({"ABC", "BD", "EFG"});
  EXPECT_TRUE(is_authorized(g, letters("BDF")));
  EXPECT_FALSE(is_authorized(g, letters("AB")));
  EXPECT_TRUE(is_authorized(g, letters("ABCDEFG")));
  EXPECT_THROW(is_authorized(g, letters("AZ")), InputError);
}

TEST(IsAuthorized, Monotone) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = testing::random_structure(rng, 6, 4, 3);
    const auto& u = g.universe();
    const std::uint32_t full = (1u << u.size()) - 1;
    for (std::uint32_t t = 0; t <= full; ++t) {
      if (!is_authorized(g, from_mask(u, t))) continue;
      for (std::size_t i = 0; i < u.size(); ++i) EXPECT_TRUE(is_authorized(g, from_mask(u, t | 1u << i)));
    }
  }
}

TEST(PairwiseOverlap, Examples) {
  EXPECT_TRUE(check_pairwise_overlap(structure({"ABC", "ADE", "BDF"})).empty());
  const auto pairs = check_pairwise_overlap(structure({"ABC", "BD", "EFG"}));
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0], IndexPair(0, 2));
  EXPECT_EQ(pairs[1], IndexPair(1, 2));
  EXPECT_TRUE(check_pairwise_overlap(structure({"AB"})).empty());
}

// Oracle: scan every subset of the universe.
std::vector<std::string> maximal_unauthorized_oracle(const AccessStructure& g) {
  const auto& u = g.universe();
  std::vector<std::uint32_t> minimal;
  for (const auto& s : g.minimal_sets()) minimal.push_back(to_mask(u, s));
  const std::uint32_t full = (1u << u.size()) - 1;
  std::vector<PlayerSet> out;
  for (std::uint32_t t = 0; t <= full; ++t) {
    if (authorized_oracle(minimal, t)) continue;
    bool maximal = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!(t >> i & 1u) && !authorized_oracle(minimal, t | 1u << i)) maximal = false;
    }
    if (maximal) out.push_back(from_mask(u, t));
  }
  std::sort(out.begin(), out.end(), [](const PlayerSet& a, const PlayerSet& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  return names(out);
}

TEST(MaximalUnauthorized, Examples) {
  EXPECT_EQ(names(maximal_unauthorized_sets(structure({"AB"}))), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(names(maximal_unauthorized_sets(structure({"AB", "BC", "AC"}))),
            (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(names(maximal_unauthorized_sets(structure({"ABC", "BD"}))),
            (std::vector<std::string>{"ACD", "AB", "BC"}));
}

TEST(MaximalUnauthorized, MatchesSubsetScan) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = testing::random_structure(rng, 7, 5, 4);
    EXPECT_EQ(names(maximal_unauthorized_sets(g)), maximal_unauthorized_oracle(g)) << g.to_string();
  }
}

// Exhaustive self-duality and closure containment.
void expect_valid_completion(const AccessStructure& g, const AccessStructure& max) {
  const auto& u = g.universe();
  ASSERT_EQ(max.universe(), u);
  std::vector<std::uint32_t> minimal;
  for (const auto& s : max.minimal_sets()) minimal.push_back(to_mask(u, s));
  const std::uint32_t full = (1u << u.size()) - 1;
  for (std::uint32_t t = 0; t <= full; ++t) {
    EXPECT_NE(authorized_oracle(minimal, t), authorized_oracle(minimal, full & ~t)) << max.to_string();
  }
  for (const auto& a : g.minimal_sets()) EXPECT_TRUE(is_authorized(max, a));
  for (const auto& a : max.minimal_sets()) {
    for (const auto& b : max.minimal_sets()) EXPECT_TRUE(a.intersects(b));
  }
  EXPECT_TRUE(is_self_dual(max));
}

TEST(MaximalStructure, Examples) {
  const auto triangle = structure({"AB", "BC", "AC"});
  EXPECT_EQ(maximal_structure(triangle), triangle);

  const AccessStructure abc_bd(letters("ABCD"), {letters("ABC"), letters("BD")});
  const auto max = maximal_structure(abc_bd);
  expect_valid_completion(abc_bd, max);
  EXPECT_EQ(max.to_string(), "{BC, BD, CD}");

  const auto ab = structure({"AB"});
  const auto single = maximal_structure(ab);
  expect_valid_completion(ab, single);
  EXPECT_EQ(single.size(), 1u);
  EXPECT_EQ(single.minimal_sets()[0].size(), 1u);

  EXPECT_THROW(maximal_structure(structure({"AB", "CD"})), InputError);
}

TEST(MaximalStructure, RandomCompletionsAreSelfDual) {
  std::mt19937 rng(5);
  int checked = 0;
  while (checked < 60) {
    const auto g = testing::random_structure(rng, 6, 4, 4);
    if (!check_pairwise_overlap(g).empty()) continue;
    expect_valid_completion(g, maximal_structure(g));
    ++checked;
  }
}

TEST(Restrict, Examples) {
  const AccessStructure gp = structure({"ABCX", "DEX", "FGHX"});
  EXPECT_EQ(restrict_without(gp, PlayerId("X")).to_string(), "{ABC, DE, FGH}");
  EXPECT_THROW(restrict_without(structure({"AB"}), PlayerId("C")), InputError);
  EXPECT_THROW(restrict_without(structure({"AX", "X"}), PlayerId("X")), InputError);
}

TEST(Universe, EnumerationCap) {
  std::vector<PlayerId> many;
  for (int i = 0; i < 21; ++i) many.emplace_back("p" + std::to_string(i));
  const AccessStructure big(PlayerSet(many), {PlayerSet{PlayerId("p0")}});
  EXPECT_THROW(maximal_unauthorized_sets(big), ResourceLimit);
}

}  // namespace
}  // namespace aqss
