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

#ifndef AQSS_VERIFIER_HPP_
#define AQSS_VERIFIER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "aqss/access_structure.hpp"
#include "aqss/encoding.hpp"
#include "aqss/link_cover.hpp"
#include "aqss/qudit.hpp"
#include "aqss/scheme.hpp"
#include "json.hpp"

namespace aqss {

struct VerifyOptions {
  double tolerance = kTolerance;
  Limits limits;
  AndRealization and_gates = AndRealization::kCascade;
  int secret_dim = 2;
};

// Both routes for one coalition: decoupling distances from the code-tree
// contraction (or the state when contraction does not apply) and an explicit
// decoding attempt on the encoded state.
struct SubsetResult {
  double held_distance = 0.0;        // coalition vs reference
  double complement_distance = 0.0;  // everything else (environment included) vs reference
  bool decoded = false;
  std::optional<double> fidelity;  // of the decoded output with the reference
};

// Encodes a scheme with a reference-entangled secret and answers coalition
// queries. Holds the full encoded state when it fits the amplitude cap and
// otherwise encodes per query, expanding only subtrees whose leaves are split
// between the coalition and the rest.
class SchemeSimulator {
 public:
  SchemeSimulator(const AccessStructure& structure, const SchemeTree& tree, VerifyOptions options = {});
  SchemeSimulator(const SchemeSimulator&) = delete;
  SchemeSimulator& operator=(const SchemeSimulator&) = delete;

  // residents[i] tells whether resident share i joins the coalition. Throws
  // InputError for players outside the universe.
  SubsetResult evaluate(const PlayerSet& players, const std::vector<char>& residents);
  // Decoupling distances computed directly on the encoded state.
  DecouplingPair direct_distances(const PlayerSet& players, const std::vector<char>& residents);

  const FieldSpec& field() const noexcept { return field_; }
  const CodeTree& code() const noexcept { return code_; }
  const VerifyOptions& options() const noexcept { return options_; }
  std::size_t resident_count() const noexcept { return residents_; }
  std::size_t share_count() const noexcept { return code_.leaf_owners.size(); }
  bool full_state() const noexcept { return full_.has_value(); }
  // Stored amplitudes of the full encoding (whether or not it was built).
  std::uint64_t full_state_terms() const noexcept { return full_terms_; }
  const EncodedScheme* encoded() const noexcept { return full_ ? &*full_ : nullptr; }

 private:
  std::vector<char> held_leaves(const PlayerSet& players, const std::vector<char>& residents) const;
  EncodedScheme state_for(const std::vector<char>& held, bool for_decoding) const;

  PlayerSet universe_;
  VerifyOptions options_;
  CodeTree code_;
  FieldSpec field_;
  std::size_t residents_ = 0;
  std::uint64_t full_terms_ = 0;
  std::optional<EncodedScheme> full_;
  DecouplingContractor contractor_;
};

struct RecoverabilityEntry {
  PlayerSet set;
  bool with_resident = false;
  std::optional<double> fidelity;
  double decoupling_distance = 0.0;
  bool decoded = false;
  bool verdicts_agree = false;
  bool pass = false;
};

struct PrivacyEntry {
  PlayerSet set;
  double trace_distance = 0.0;
  bool decoded = false;
  bool verdicts_agree = false;
  bool pass = false;
};

struct ImportanceEntry {
  std::size_t resident = 0;
  std::optional<PlayerSet> witness;
  bool pass = false;
};

// Two disjoint minimal sets: each alone must fail without resident shares and
// succeed with them.
struct NoCloningEntry {
  PlayerSet first;
  PlayerSet second;
  bool first_alone_fails = false;
  bool second_alone_fails = false;
  bool first_with_residents = false;
  bool second_with_residents = false;
  bool pass = false;
};

struct VerificationReport {
  std::size_t lambda = 0;
  std::size_t resident_shares = 0;
  std::size_t qudits = 0;  // share qudits: player and resident leaves
  std::size_t environment_qudits = 0;
  int p = 0;
  bool full_state = false;
  std::uint64_t stored_amplitudes = 0;
  bool resident_count_matches = false;  // resident shares == lambda - 1
  std::vector<RecoverabilityEntry> recoverability;
  std::vector<PrivacyEntry> privacy;
  std::vector<ImportanceEntry> importance;
  std::vector<NoCloningEntry> no_cloning;
  bool verdicts_agree = false;
  bool overall = false;
};

RecoverabilityEntry verify_recoverability(SchemeSimulator& sim, const PlayerSet& set, bool include_resident);
PrivacyEntry verify_privacy(SchemeSimulator& sim, const PlayerSet& set);
// Witness search over the minimal sets of the structure, in order.
ImportanceEntry check_importance(SchemeSimulator& sim, const AccessStructure& structure, std::size_t resident);
std::vector<NoCloningEntry> check_no_cloning(SchemeSimulator& sim, const AccessStructure& structure);

VerificationReport verify_scheme(const AccessStructure& structure, const PartialLinkClassification& classification,
                                 const SchemeTree& tree, const VerifyOptions& options = {});

nlohmann::json to_json(const VerificationReport& report);

}  // namespace aqss

#endif  // AQSS_VERIFIER_HPP_
