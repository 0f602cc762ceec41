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

#include "aqss/scheme.hpp"

#include <algorithm>
#include <functional>

#include "aqss/error.hpp"

namespace aqss {

ThresholdParams::ThresholdParams(int k, int n) : k_(k), n_(n) {
  if (k < 1 || n < k) {
    throw InputError("threshold parameters need 1 <= k <= n, got " + to_string());
  }
  if (n >= 2 * k) {
    throw InputError("quantum threshold scheme " + to_string() + " violates n < 2k (no-cloning)");
  }
}

std::string ThresholdParams::to_string() const {
  return "((" + std::to_string(k_) + "," + std::to_string(n_) + "))";
}

SchemeTree SchemeTree::threshold(ThresholdParams params, std::vector<SchemeTree> children) {
  if (children.size() != static_cast<std::size_t>(params.n())) {
    throw InputError("threshold node " + params.to_string() + " needs " + std::to_string(params.n()) +
                     " children, got " + std::to_string(children.size()));
  }
  SchemeTree node(Kind::kThreshold, params);
  node.children_ = std::move(children);
  return node;
}

SchemeTree SchemeTree::player(PlayerId owner) {
  SchemeTree leaf(Kind::kPlayer, ThresholdParams(1, 1));
  leaf.owner_ = std::move(owner);
  return leaf;
}

SchemeTree SchemeTree::resident(std::size_t index) {
  SchemeTree leaf(Kind::kResident, ThresholdParams(1, 1));
  leaf.resident_ = index;
  return leaf;
}

const ThresholdParams& SchemeTree::params() const {
  if (kind_ != Kind::kThreshold) throw InputError("leaf has no threshold parameters");
  return params_;
}

const PlayerId& SchemeTree::owner() const {
  if (kind_ != Kind::kPlayer) throw InputError("node is not a player leaf");
  return *owner_;
}

std::size_t SchemeTree::resident_index() const {
  if (kind_ != Kind::kResident) throw InputError("node is not a resident leaf");
  return resident_;
}

std::optional<ThresholdShape> detect_threshold_structure(const AccessStructure& structure) {
  const auto& sets = structure.minimal_sets();
  const std::size_t k = sets.front().size();
  if (std::any_of(sets.begin(), sets.end(), [k](const PlayerSet& s) { return s.size() != k; })) {
    return std::nullopt;
  }
  PlayerSet support;
  for (const auto& s : sets) support = support.united(s);
  const std::size_t n = support.size();
  if (n >= 2 * k) return std::nullopt;
  // Distinct k-subsets of an n-set: all of them are present iff there are C(n,k).
  std::size_t binomial = 1;
  for (std::size_t i = 0; i < k; ++i) binomial = binomial * (n - i) / (i + 1);
  if (sets.size() != binomial) return std::nullopt;
  return ThresholdShape{ThresholdParams(static_cast<int>(k), static_cast<int>(n)), support};
}

std::optional<ThresholdShape> threshold_completion(const AccessStructure& class_structure) {
  if (auto shape = detect_threshold_structure(maximal_structure(class_structure)); shape && shape->params.is_polynomial()) {
    return shape;
  }
  const auto& players = class_structure.universe().members();
  const auto& sets = class_structure.minimal_sets();
  std::optional<ThresholdShape> found;
  std::vector<PlayerId> chosen;
  // Lexicographic enumeration of `size`-subsets of the players.
  std::function<bool(std::size_t, std::size_t)> search = [&](std::size_t start, std::size_t size) {
    if (chosen.size() == size) {
      PlayerSet support(chosen);
      const std::size_t k = (size + 1) / 2;
      bool covers = std::all_of(sets.begin(), sets.end(), [&](const PlayerSet& s) {
        return s.size() >= k && s.minus(s.minus(support)).size() >= k;
      });
      if (covers) found = ThresholdShape{ThresholdParams(static_cast<int>(k), static_cast<int>(size)), support};
      return covers;
    }
    for (std::size_t i = start; i + (size - chosen.size()) <= players.size(); ++i) {
      chosen.push_back(players[i]);
      if (search(i + 1, size)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (std::size_t size = 1; size <= players.size(); size += 2) {
    chosen.clear();
    if (search(0, size)) return found;
  }
  return std::nullopt;
}

AccessStructure class_structure(const AccessStructure& structure, const std::vector<std::size_t>& members) {
  std::vector<PlayerSet> sets;
  for (std::size_t j : members) {
    if (j >= structure.size()) throw InputError("class member index out of range");
    sets.push_back(structure.minimal_sets()[j]);
  }
  return reduce_to_minimal(std::move(sets));
}

namespace {

SchemeTree over_players(const PlayerSet& players, int k) {
  std::vector<SchemeTree> leaves;
  for (const auto& p : players) leaves.push_back(SchemeTree::player(p));
  return SchemeTree::threshold(ThresholdParams(k, static_cast<int>(players.size())), std::move(leaves));
}

SchemeTree and_layer(const PlayerSet& set) { return over_players(set, static_cast<int>(set.size())); }

}  // namespace

SchemeTree build_class_scheme(const AccessStructure& class_structure) {
  const auto& sets = class_structure.minimal_sets();
  if (sets.size() == 1) return and_layer(sets.front());
  if (!check_pairwise_overlap(class_structure).empty()) {
    throw InputError("class " + class_structure.to_string() + " is not partially linked");
  }
  auto completion = threshold_completion(class_structure);
  if (!completion) {
    throw UnsupportedStructure("class " + class_structure.to_string() +
                               " has no threshold-expressible maximal completion");
  }
  const int r = static_cast<int>(sets.size());
  std::vector<SchemeTree> children;
  for (const auto& s : sets) children.push_back(and_layer(s));
  for (int i = 0; i < r - 1; ++i) children.push_back(over_players(completion->support, completion->params.k()));
  return SchemeTree::threshold(ThresholdParams(r, 2 * r - 1), std::move(children));
}

SchemeTree build_scheme(const AccessStructure& structure, const PartialLinkClassification& classification) {
  if (!is_clique_partition(build_as_graph(structure), classification)) {
    throw InputError("classification is not a clique partition of the AS graph of " + structure.to_string());
  }
  const auto& classes = classification.classes();
  if (classes.size() == 1) return build_class_scheme(structure);
  const int lambda = static_cast<int>(classes.size());
  std::vector<SchemeTree> children;
  for (const auto& members : classes) children.push_back(build_class_scheme(class_structure(structure, members)));
  for (int i = 0; i < lambda - 1; ++i) children.push_back(SchemeTree::resident(static_cast<std::size_t>(i)));
  return SchemeTree::threshold(ThresholdParams(lambda, 2 * lambda - 1), std::move(children));
}

std::vector<const SchemeTree*> leaves(const SchemeTree& tree) {
  std::vector<const SchemeTree*> out;
  std::function<void(const SchemeTree&)> walk = [&](const SchemeTree& node) {
    if (!node.is_threshold()) {
      out.push_back(&node);
      return;
    }
    for (const auto& child : node.children()) walk(child);
  };
  walk(tree);
  return out;
}

std::size_t resident_share_count(const SchemeTree& tree) {
  auto all = leaves(tree);
  return static_cast<std::size_t>(
      std::count_if(all.begin(), all.end(), [](const SchemeTree* l) { return l->kind() == SchemeTree::Kind::kResident; }));
}

std::size_t player_share_count(const SchemeTree& tree) {
  auto all = leaves(tree);
  return static_cast<std::size_t>(
      std::count_if(all.begin(), all.end(), [](const SchemeTree* l) { return l->kind() == SchemeTree::Kind::kPlayer; }));
}

TrivialEmbeddingAnalysis analyze_trivial_embedding(const AccessStructure& structure) {
  std::string label = "X";
  for (int i = 1; structure.universe().contains(PlayerId(label)); ++i) label = "X" + std::to_string(i);
  PlayerId dealer(label);

  std::vector<PlayerSet> sets;
  for (const auto& s : structure.minimal_sets()) sets.push_back(s.with(dealer));
  AccessStructure augmented(structure.universe().with(dealer), std::move(sets));
  AccessStructure completion = maximal_structure(augmented);

  const std::size_t r = structure.size();
  const auto& completed = completion.minimal_sets();
  const auto x = static_cast<std::size_t>(
      std::count_if(completed.begin(), completed.end(), [&](const PlayerSet& s) { return s.contains(dealer); }));
  return TrivialEmbeddingAnalysis{
      .r = r,
      .x = x,
      .naive_count = r + (r - 1) * x,
      .better_count = r,
      .theorem_count = lambda(structure) - 1,
      .dealer_player = dealer,
      .augmented = std::move(augmented),
      .completion = std::move(completion),
  };
}

nlohmann::json to_json(const SchemeTree& tree) {
  switch (tree.kind()) {
    case SchemeTree::Kind::kPlayer:
      return {{"kind", "player"}, {"owner", tree.owner().label()}};
    case SchemeTree::Kind::kResident:
      return {{"kind", "resident"}, {"index", tree.resident_index()}};
    case SchemeTree::Kind::kThreshold:
      break;
  }
  nlohmann::json children = nlohmann::json::array();
  for (const auto& child : tree.children()) children.push_back(to_json(child));
  return {{"kind", "threshold"}, {"k", tree.params().k()}, {"n", tree.params().n()}, {"children", children}};
}

SchemeTree scheme_from_json(const nlohmann::json& json) {
  try {
    const std::string kind = json.at("kind").get<std::string>();
    if (kind == "player") return SchemeTree::player(PlayerId(json.at("owner").get<std::string>()));
    if (kind == "resident") return SchemeTree::resident(json.at("index").get<std::size_t>());
    if (kind == "threshold") {
      std::vector<SchemeTree> children;
      for (const auto& child : json.at("children")) children.push_back(scheme_from_json(child));
      return SchemeTree::threshold(ThresholdParams(json.at("k").get<int>(), json.at("n").get<int>()),
                                   std::move(children));
    }
    throw InputError("unknown scheme node kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed scheme JSON: ") + e.what());
  }
}

}  // namespace aqss
