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

#include "aqss/verifier.hpp"

#include <algorithm>
#include <memory>

#include "aqss/error.hpp"

namespace aqss {

namespace {

std::vector<char> none(std::size_t n) { return std::vector<char>(n, 0); }
std::vector<char> all(std::size_t n) { return std::vector<char>(n, 1); }

bool recovered(const SubsetResult& r, double tolerance) {
  return r.decoded && r.fidelity && *r.fidelity >= 1.0 - tolerance;
}

bool agree(const SubsetResult& r, double tolerance) {
  return (r.complement_distance <= tolerance) == recovered(r, tolerance);
}

bool recoverable(SchemeSimulator& sim, const PlayerSet& set, const std::vector<char>& residents) {
  const SubsetResult r = sim.evaluate(set, residents);
  return r.complement_distance <= sim.options().tolerance && recovered(r, sim.options().tolerance);
}

nlohmann::json set_json(const PlayerSet& set) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : set) out.push_back(p.label());
  return out;
}

}  // namespace

SchemeSimulator::SchemeSimulator(const AccessStructure& structure, const SchemeTree& tree, VerifyOptions options)
    : universe_(structure.universe()),
      options_(options),
      code_(compile_scheme(tree, options.and_gates)),
      field_(choose_field(tree, options.secret_dim, options.and_gates)),
      residents_(resident_share_count(tree)),
      contractor_(code_, field_, options.tolerance) {
  for (const auto& owner : code_.leaf_owners) {
    if (owner.kind == ShareOwner::Kind::kPlayer && !universe_.contains(PlayerId(owner.player))) {
      throw InputError("scheme leaf owned by '" + owner.player + "', who is not a player of the structure");
    }
    if (owner.kind == ShareOwner::Kind::kResident && owner.index >= residents_) {
      throw InputError("resident share indices must be 0.." + std::to_string(residents_ - 1));
    }
  }
  full_terms_ = estimate_terms(code_, field_, {}, static_cast<std::uint64_t>(field_.p()));
  if (full_terms_ <= options_.limits.max_amplitudes) {
    full_ = encode_tree(entangle_with_reference(field_), code_, field_, {}, options_.limits);
  }
}

std::vector<char> SchemeSimulator::held_leaves(const PlayerSet& players, const std::vector<char>& residents) const {
  if (!players.is_subset_of(universe_)) {
    throw InputError("coalition " + players.to_string() + " mentions players outside " + universe_.to_string());
  }
  if (residents.size() != residents_) throw InputError("resident flags need one entry per resident share");
  std::vector<char> held;
  for (const auto& owner : code_.leaf_owners) {
    held.push_back(owner.kind == ShareOwner::Kind::kPlayer ? players.contains(PlayerId(owner.player))
                                                           : residents[owner.index]);
  }
  return held;
}

EncodedScheme SchemeSimulator::state_for(const std::vector<char>& held, bool for_decoding) const {
  auto expanded = for_decoding ? expansion_for_decoding(code_, held) : expansion_for(code_, held);
  // The pruned encoding answers the query the same way; use it when it is smaller.
  if (full_ && estimate_terms(code_, field_, expanded, static_cast<std::uint64_t>(field_.p())) >= full_terms_) {
    return *full_;
  }
  return encode_tree(entangle_with_reference(field_), code_, field_, std::move(expanded), options_.limits);
}

namespace {

// Which subsystems of an encoded state the coalition holds. A packed subtree
// counts as held exactly when the coalition could decode it.
std::function<bool(const std::string&)> holder(const EncodedScheme& encoded, const CodeTree& code,
                                               const std::vector<char>& held) {
  auto decodable = std::make_shared<std::vector<char>>(decodable_nodes(code, held));
  return [&encoded, &held, decodable](const std::string& label) {
    const ShareOwner& owner = encoded.shares.owner(label);
    switch (owner.kind) {
      case ShareOwner::Kind::kPlayer:
      case ShareOwner::Kind::kResident:
        return held[std::stoul(label.substr(1))] != 0;
      case ShareOwner::Kind::kUnexpanded:
        return (*decodable)[owner.index] != 0;
      case ShareOwner::Kind::kEnvironment:
      case ShareOwner::Kind::kReference:
        return false;
    }
    return false;
  };
}

}  // namespace

DecouplingPair SchemeSimulator::direct_distances(const PlayerSet& players, const std::vector<char>& residents) {
  const auto held = held_leaves(players, residents);
  const EncodedScheme encoded = state_for(held, false);
  const auto holds = holder(encoded, code_, held);
  std::vector<std::string> mine;
  std::vector<std::string> rest;
  for (const auto& label : encoded.state.labels()) {
    if (label == kReferenceLabel) continue;
    (holds(label) ? mine : rest).push_back(label);
  }
  return DecouplingPair{decoupling_distance(encoded.state, mine, kReferenceLabel, options_.limits),
                        decoupling_distance(encoded.state, rest, kReferenceLabel, options_.limits)};
}

SubsetResult SchemeSimulator::evaluate(const PlayerSet& players, const std::vector<char>& residents) {
  const auto held = held_leaves(players, residents);
  SubsetResult result;
  if (auto pair = contractor_.evaluate(held)) {
    result.held_distance = pair->held;
    result.complement_distance = pair->complement;
  } else {
    const DecouplingPair direct = direct_distances(players, residents);
    result.held_distance = direct.held;
    result.complement_distance = direct.complement;
  }
  const EncodedScheme encoded = state_for(held, true);
  try {
    Reconstruction r = reconstruct_tree(encoded.state, code_, encoded.shares, holder(encoded, code_, held));
    result.decoded = true;
    result.fidelity = entanglement_fidelity(r.state, r.designated, kReferenceLabel);
  } catch (const InsufficientShares&) {
    result.decoded = false;
  }
  return result;
}

RecoverabilityEntry verify_recoverability(SchemeSimulator& sim, const PlayerSet& set, bool include_resident) {
  const double tol = sim.options().tolerance;
  const auto residents = include_resident ? all(sim.resident_count()) : none(sim.resident_count());
  const SubsetResult r = sim.evaluate(set, residents);
  RecoverabilityEntry entry;
  entry.set = set;
  entry.with_resident = include_resident;
  entry.fidelity = r.fidelity;
  entry.decoupling_distance = r.complement_distance;
  entry.decoded = r.decoded;
  entry.verdicts_agree = agree(r, tol);
  entry.pass = r.complement_distance <= tol && recovered(r, tol);
  return entry;
}

PrivacyEntry verify_privacy(SchemeSimulator& sim, const PlayerSet& set) {
  const double tol = sim.options().tolerance;
  const SubsetResult r = sim.evaluate(set, none(sim.resident_count()));
  PrivacyEntry entry;
  entry.set = set;
  entry.trace_distance = r.held_distance;
  entry.decoded = r.decoded;
  entry.verdicts_agree = agree(r, tol);
  entry.pass = r.held_distance <= tol;
  return entry;
}

ImportanceEntry check_importance(SchemeSimulator& sim, const AccessStructure& structure, std::size_t resident) {
  if (resident >= sim.resident_count()) throw InputError("no resident share #" + std::to_string(resident));
  ImportanceEntry entry;
  entry.resident = resident;
  auto without = all(sim.resident_count());
  without[resident] = 0;
  const auto with = all(sim.resident_count());
  for (const auto& set : structure.minimal_sets()) {
    if (!recoverable(sim, set, without) && recoverable(sim, set, with)) {
      entry.witness = set;
      entry.pass = true;
      break;
    }
  }
  return entry;
}

std::vector<NoCloningEntry> check_no_cloning(SchemeSimulator& sim, const AccessStructure& structure) {
  std::vector<NoCloningEntry> out;
  const auto without = none(sim.resident_count());
  const auto with = all(sim.resident_count());
  for (const auto& [j, k] : check_pairwise_overlap(structure)) {
    NoCloningEntry entry;
    entry.first = structure.minimal_sets()[j];
    entry.second = structure.minimal_sets()[k];
    entry.first_alone_fails = !recoverable(sim, entry.first, without);
    entry.second_alone_fails = !recoverable(sim, entry.second, without);
    entry.first_with_residents = recoverable(sim, entry.first, with);
    entry.second_with_residents = recoverable(sim, entry.second, with);
    entry.pass = entry.first_alone_fails && entry.second_alone_fails && entry.first_with_residents &&
                 entry.second_with_residents;
    out.push_back(std::move(entry));
  }
  return out;
}

VerificationReport verify_scheme(const AccessStructure& structure, const PartialLinkClassification& classification,
                                 const SchemeTree& tree, const VerifyOptions& options) {
  if (!is_clique_partition(build_as_graph(structure), classification)) {
    throw InputError("classification is not a clique partition of the AS graph");
  }
  SchemeSimulator sim(structure, tree, options);
  VerificationReport report;
  report.lambda = classification.size();
  report.resident_shares = sim.resident_count();
  report.qudits = sim.share_count();
  report.environment_qudits = sim.code().environment_count;
  report.p = sim.field().p();
  report.full_state = sim.full_state();
  report.stored_amplitudes = sim.full_state_terms();
  report.resident_count_matches = report.resident_shares + 1 == report.lambda;

  for (const auto& set : structure.minimal_sets()) report.recoverability.push_back(verify_recoverability(sim, set, true));
  for (const auto& set : maximal_unauthorized_sets(structure)) report.privacy.push_back(verify_privacy(sim, set));
  for (std::size_t i = 0; i < sim.resident_count(); ++i) report.importance.push_back(check_importance(sim, structure, i));
  report.no_cloning = check_no_cloning(sim, structure);

  bool pass = report.resident_count_matches;
  bool agree_all = true;
  for (const auto& e : report.recoverability) {
    pass = pass && e.pass;
    agree_all = agree_all && e.verdicts_agree;
  }
  for (const auto& e : report.privacy) {
    pass = pass && e.pass;
    agree_all = agree_all && e.verdicts_agree;
  }
  for (const auto& e : report.importance) pass = pass && e.pass;
  for (const auto& e : report.no_cloning) pass = pass && e.pass;
  report.verdicts_agree = agree_all;
  report.overall = pass && agree_all;
  return report;
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json out;
  out["lambda"] = report.lambda;
  out["resident_shares"] = report.resident_shares;
  out["qudits"] = report.qudits;
  out["environment_qudits"] = report.environment_qudits;
  out["p"] = report.p;
  out["full_state"] = report.full_state;
  out["stored_amplitudes"] = report.stored_amplitudes;
  out["resident_count_matches"] = report.resident_count_matches;
  out["recoverability"] = nlohmann::json::array();
  for (const auto& e : report.recoverability) {
    out["recoverability"].push_back({{"set", set_json(e.set)},
                                     {"with_resident", e.with_resident},
                                     {"fidelity", e.fidelity ? nlohmann::json(*e.fidelity) : nlohmann::json()},
                                     {"decoupling_distance", e.decoupling_distance},
                                     {"decoded", e.decoded},
                                     {"verdicts_agree", e.verdicts_agree},
                                     {"pass", e.pass}});
  }
  out["privacy"] = nlohmann::json::array();
  for (const auto& e : report.privacy) {
    out["privacy"].push_back({{"set", set_json(e.set)},
                              {"trace_distance", e.trace_distance},
                              {"decoded", e.decoded},
                              {"verdicts_agree", e.verdicts_agree},
                              {"pass", e.pass}});
  }
  out["importance"] = nlohmann::json::array();
  for (const auto& e : report.importance) {
    out["importance"].push_back({{"resident", e.resident},
                                 {"witness", e.witness ? set_json(*e.witness) : nlohmann::json()},
                                 {"pass", e.pass}});
  }
  out["no_cloning"] = nlohmann::json::array();
  for (const auto& e : report.no_cloning) {
    out["no_cloning"].push_back({{"sets", {set_json(e.first), set_json(e.second)}},
                                 {"alone_fail", {e.first_alone_fails, e.second_alone_fails}},
                                 {"with_residents_pass", {e.first_with_residents, e.second_with_residents}},
                                 {"pass", e.pass}});
  }
  out["verdicts_agree"] = report.verdicts_agree;
  out["overall"] = report.overall;
  return out;
}

}  // namespace aqss
