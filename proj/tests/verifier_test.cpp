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

#include "aqss/error.hpp"
#include "aqss/verifier.hpp"
#include "test_util.hpp"

namespace aqss {
namespace {

using testing::letters;
using testing::structure;

struct Case {
  AccessStructure g;
  PartialLinkClassification classes;
  SchemeTree tree;
};

Case make(const std::vector<std::string>& sets) {
  auto g = structure(sets);
  auto classes = exact_min_clique_cover(build_as_graph(g));
  auto tree = build_scheme(g, classes);
  return {std::move(g), std::move(classes), std::move(tree)};
}

std::vector<PlayerSet> maximal_unauthorized_oracle(const AccessStructure& g) {
  std::vector<PlayerSet> out;
  const auto& u = g.universe();
  const std::uint32_t full = (1u << u.size()) - 1;
  for (std::uint32_t m = 0; m <= full; ++m) {
    if (testing::authorized_oracle(g, testing::from_mask(u, m))) continue;
    bool maximal = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const std::uint32_t bigger = m | (1u << i);
      if (bigger != m && !testing::authorized_oracle(g, testing::from_mask(u, bigger))) maximal = false;
    }
    if (maximal) out.push_back(testing::from_mask(u, m));
  }
  return out;
}

void expect_sound(const VerificationReport& r, const AccessStructure& g) {
  EXPECT_TRUE(r.overall);
  EXPECT_TRUE(r.verdicts_agree);
  EXPECT_TRUE(r.resident_count_matches);
  ASSERT_EQ(r.recoverability.size(), g.minimal_sets().size());
  for (const auto& e : r.recoverability) {
    EXPECT_TRUE(e.pass) << e.set.to_string();
    ASSERT_TRUE(e.fidelity);
    EXPECT_GE(*e.fidelity, 1 - kTolerance);
    EXPECT_LE(e.decoupling_distance, kTolerance);
  }
  auto expected = maximal_unauthorized_oracle(g);
  std::vector<PlayerSet> got;
  for (const auto& e : r.privacy) {
    EXPECT_TRUE(e.pass) << e.set.to_string();
    EXPECT_FALSE(e.decoded);
    EXPECT_LE(e.trace_distance, kTolerance);
    got.push_back(e.set);
  }
  std::sort(expected.begin(), expected.end());
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, expected);
}

TEST(VerifyScheme, WorkedExample) {
  const auto g = structure({"ABC", "BD", "EFG"});
  const PartialLinkClassification classes({{0, 1}, {2}});
  const auto r = verify_scheme(g, classes, build_scheme(g, classes));
  expect_sound(r, g);
  EXPECT_EQ(r.lambda, 2u);
  EXPECT_EQ(r.resident_shares, 1u);
  EXPECT_EQ(r.qudits, 12u);
  EXPECT_EQ(r.environment_qudits, 5u);
  EXPECT_EQ(r.p, 3);
  EXPECT_TRUE(r.full_state);
  EXPECT_EQ(r.stored_amplitudes, 19683u);
  ASSERT_EQ(r.importance.size(), 1u);
  EXPECT_TRUE(r.importance[0].pass);
  EXPECT_EQ(r.importance[0].witness, letters("ABC"));
  ASSERT_EQ(r.no_cloning.size(), 2u);
  for (const auto& e : r.no_cloning) {
    EXPECT_TRUE(e.pass);
    EXPECT_EQ(e.second, letters("EFG"));
  }
  EXPECT_THROW(verify_scheme(g, PartialLinkClassification({{0}, {1, 2}}), build_scheme(g, classes)), InputError);
}

TEST(VerifyScheme, ConventionalAndPair) {
  const auto conventional = make({"ABC", "ADE", "BDF"});
  const auto a = verify_scheme(conventional.g, conventional.classes, conventional.tree);
  expect_sound(a, conventional.g);
  EXPECT_EQ(a.lambda, 1u);
  EXPECT_EQ(a.resident_shares, 0u);
  EXPECT_EQ(a.p, 5);
  EXPECT_FALSE(a.full_state);
  EXPECT_TRUE(a.importance.empty());
  EXPECT_TRUE(a.no_cloning.empty());

  const auto pair = make({"AB", "CD"});
  const auto b = verify_scheme(pair.g, pair.classes, pair.tree);
  expect_sound(b, pair.g);
  EXPECT_EQ(b.resident_shares, 1u);
  ASSERT_EQ(b.no_cloning.size(), 1u);
  EXPECT_TRUE(b.no_cloning[0].first_alone_fails);
  EXPECT_TRUE(b.no_cloning[0].second_with_residents);
}

TEST(VerifyScheme, SeveralClassesNeedEveryResidentSomewhere) {
  const auto c = make({"ABC", "DE", "FGH"});
  const auto r = verify_scheme(c.g, c.classes, c.tree);
  expect_sound(r, c.g);
  EXPECT_EQ(r.resident_shares, 2u);
  ASSERT_EQ(r.importance.size(), 2u);
  for (const auto& e : r.importance) EXPECT_TRUE(e.pass);
  EXPECT_EQ(r.no_cloning.size(), 3u);
}

TEST(Simulator, ExactDichotomyOnEveryCoalition) {
  const auto g = structure({"ABC", "BD", "EFG"});
  const PartialLinkClassification classes({{0, 1}, {2}});
  SchemeSimulator sim(g, build_scheme(g, classes));
  const auto c1 = structure({"ABC", "BD"});
  const auto c2 = structure({"EFG"});
  for (std::uint32_t m = 0; m < 128; ++m) {
    const auto players = testing::from_mask(g.universe(), m);
    for (char resident : {0, 1}) {
      const int votes = testing::authorized_oracle(c1, players) + testing::authorized_oracle(c2, players) + resident;
      const auto r = sim.evaluate(players, {resident});
      EXPECT_EQ(r.decoded, votes >= 2) << players.to_string();
      if (votes >= 2) {
        EXPECT_LE(r.complement_distance, kTolerance);
        EXPECT_NEAR(r.held_distance, 1 - 1.0 / 9, 1e-9);
        ASSERT_TRUE(r.fidelity);
        EXPECT_GE(*r.fidelity, 1 - kTolerance);
      } else {
        EXPECT_LE(r.held_distance, kTolerance);
        EXPECT_NEAR(r.complement_distance, 1 - 1.0 / 9, 1e-9);
        EXPECT_FALSE(r.fidelity);
      }
      // The direct route stays under the dense cap only for a few held qudits.
      if (std::popcount(m) <= 1) {
        const auto direct = sim.direct_distances(players, {resident});
        EXPECT_NEAR(direct.held, r.held_distance, 1e-9);
        EXPECT_NEAR(direct.complement, r.complement_distance, 1e-9);
      }
    }
  }
  EXPECT_THROW(sim.evaluate(letters("AZ"), {0}), InputError);
}

TEST(Simulator, PrunedQueriesMatchFullState) {
  const auto g = structure({"ABC", "BD", "EFG"});
  const PartialLinkClassification classes({{0, 1}, {2}});
  const auto tree = build_scheme(g, classes);
  VerifyOptions small;
  small.limits.max_amplitudes = 4096;
  const auto full = verify_scheme(g, classes, tree);
  const auto pruned = verify_scheme(g, classes, tree, small);
  EXPECT_FALSE(pruned.full_state);
  EXPECT_EQ(pruned.stored_amplitudes, full.stored_amplitudes);
  EXPECT_EQ(pruned.overall, full.overall);
  ASSERT_EQ(pruned.recoverability.size(), full.recoverability.size());
  for (std::size_t i = 0; i < full.recoverability.size(); ++i) {
    EXPECT_NEAR(*pruned.recoverability[i].fidelity, *full.recoverability[i].fidelity, 1e-9);
  }
  SchemeSimulator a(g, tree);
  SchemeSimulator b(g, tree, small);
  for (const auto& s : {letters("A"), letters("B"), letters("EG")}) {
    const auto x = a.direct_distances(s, {1});
    const auto y = b.direct_distances(s, {1});
    EXPECT_NEAR(x.held, y.held, 1e-9);
    EXPECT_NEAR(x.complement, y.complement, 1e-9);
  }
}

TEST(Simulator, AdditiveAndGatesLeakToSingleShares) {
  const auto c = make({"AB"});
  VerifyOptions additive;
  additive.and_gates = AndRealization::kAdditive;
  const auto r = verify_scheme(c.g, c.classes, c.tree, additive);
  EXPECT_FALSE(r.overall);
  ASSERT_EQ(r.privacy.size(), 2u);
  for (const auto& e : r.privacy) {
    EXPECT_FALSE(e.pass);
    EXPECT_GT(e.trace_distance, 0.1);
  }
  for (const auto& e : r.recoverability) EXPECT_TRUE(e.pass);
  expect_sound(verify_scheme(c.g, c.classes, c.tree), c.g);
}

TEST(ReportJson, DeterministicAndComplete) {
  const auto g = structure({"ABC", "BD", "EFG"});
  const PartialLinkClassification classes({{0, 1}, {2}});
  const auto tree = build_scheme(g, classes);
  const std::string first = to_json(verify_scheme(g, classes, tree)).dump(2);
  const std::string second = to_json(verify_scheme(g, classes, tree)).dump(2);
  EXPECT_EQ(first, second);
  const auto j = nlohmann::json::parse(first);
  for (const char* key : {"lambda", "resident_shares", "qudits", "environment_qudits", "p", "full_state",
                          "stored_amplitudes", "resident_count_matches", "recoverability", "privacy", "importance",
                          "no_cloning", "verdicts_agree", "overall"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["recoverability"].size(), 3u);
  EXPECT_TRUE(j["overall"].get<bool>());
}

}  // namespace
}  // namespace aqss
