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

#ifndef AQSS_ENCODING_HPP_
#define AQSS_ENCODING_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aqss/qudit.hpp"
#include "aqss/scheme.hpp"

namespace aqss {

// How ((m,m)) nodes with m >= 2 become codes.
enum class AndRealization {
  // Chain of m-1 ((2,3)) codes; each link sends one share to an environment
  // qudit nobody holds. A proper threshold scheme.
  kCascade,
  // Single additive ((m,m)) code. Hides basis secrets but leaks phases.
  kAdditive,
};

struct ShareOwner {
  enum class Kind { kPlayer, kResident, kEnvironment, kReference, kUnexpanded };
  Kind kind;
  std::string player;     // kPlayer
  std::size_t index = 0;  // resident, environment or code-node index

  std::string to_string() const;
};

// One code applied during encoding.
struct CodeNode {
  enum class Kind { kPolynomial, kAdditive };
  struct Output {
    enum class Kind { kLeaf, kEnvironment, kChild };
    Kind kind;
    std::size_t index;  // leaf, environment or code-node index
  };

  Kind kind = Kind::kPolynomial;
  int k = 1;  // shares needed: k for polynomial codes, all n for additive
  std::vector<Output> outputs;
  std::string path;  // scheme-tree node this code realizes, e.g. "root/0"
  std::optional<std::size_t> parent;

  int n() const { return static_cast<int>(outputs.size()); }
};

// Codes realizing a scheme tree. Node 0 is the root. Leaves are numbered in the
// depth-first order of the scheme tree's leaves.
struct CodeTree {
  std::vector<CodeNode> nodes;
  std::vector<ShareOwner> leaf_owners;  // player or resident
  std::size_t environment_count = 0;

  // Leaf indices below a node.
  std::vector<std::size_t> subtree_leaves(std::size_t node) const;
  int largest_length() const;
};

// Throws UnsupportedStructure for ((k,n)) with k < n < 2k-1.
CodeTree compile_scheme(const SchemeTree& tree, AndRealization and_gates = AndRealization::kCascade);

// Smallest prime >= max(secret_dim, longest code). Every node shares it.
FieldSpec choose_field(const SchemeTree& tree, int secret_dim, AndRealization and_gates = AndRealization::kCascade);

// Owner of every subsystem of an encoded state.
class ShareMap {
 public:
  void assign(const std::string& label, ShareOwner owner);
  const ShareOwner& owner(const std::string& label) const;
  bool contains(const std::string& label) const { return owners_.count(label) != 0; }
  const std::map<std::string, ShareOwner>& entries() const noexcept { return owners_; }

 private:
  std::map<std::string, ShareOwner> owners_;
};

std::string leaf_label(std::size_t leaf);
std::string environment_label(std::size_t index);
std::string unexpanded_label(std::size_t node);
inline const std::string kReferenceLabel = "ref";
inline const std::string kSecretLabel = "secret";

struct EncodedScheme {
  QuditRegister state;
  ShareMap shares;
  std::vector<char> expanded;  // per code node
};

// Stored amplitudes of the encoding of a `secret_terms`-term input when only
// the nodes flagged in `expanded` are applied. Saturates at UINT64_MAX.
std::uint64_t estimate_terms(const CodeTree& code, const FieldSpec& field, const std::vector<char>& expanded,
                             std::uint64_t secret_terms);

// Encodes subsystem "secret" of `secret` depth-first. Nodes with
// expanded[node] == 0 (and everything below them) stay as a single subsystem
// u<node>. An empty `expanded` expands everything. Output order: leaves q0...,
// unexpanded subsystems, environment env0..., then the remaining input
// subsystems (such as the reference).
EncodedScheme encode_tree(const QuditRegister& secret, const CodeTree& code, const FieldSpec& field,
                          std::vector<char> expanded = {}, const Limits& limits = {});

// Expansion flags for a query that holds `held_leaves`: a node is expanded
// iff its subtree has both held and unheld leaves.
std::vector<char> expansion_for(const CodeTree& code, const std::vector<char>& held_leaves);

// Per node: whether reconstruct_tree can decode it from `held_leaves`
// (enough decodable outputs, counted bottom-up).
std::vector<char> decodable_nodes(const CodeTree& code, const std::vector<char>& held_leaves);

// Like expansion_for, but also leaves undecodable subtrees packed. The decoder
// never touches their qudits, so the decoded output's state is unchanged.
std::vector<char> expansion_for_decoding(const CodeTree& code, const std::vector<char>& held_leaves);

struct Reconstruction {
  QuditRegister state;
  std::string designated;
};

// Decodes bottom-up using the subsystems for which `available` is true.
// Throws InsufficientShares naming the root when it cannot be decoded.
Reconstruction reconstruct_tree(const QuditRegister& state, const CodeTree& code, const ShareMap& shares,
                                const std::function<bool(const std::string&)>& available);

// Decoupling distances for one coalition, obtained by contracting the code
// tree: `held` is the distance between (held side, reference) and the
// product of its marginals; `complement` is the same for everything else,
// environment included.
struct DecouplingPair {
  double held;
  double complement;
};

class DecouplingContractor {
 public:
  DecouplingContractor(const CodeTree& code, FieldSpec field, double tolerance = kTolerance);

  // Empty when some node's held side neither recovers nor is decoupled from
  // its input (only possible with the additive AND realization).
  std::optional<DecouplingPair> evaluate(const std::vector<char>& held_leaves);

 private:
  struct Local {
    double held;
    double complement;
  };
  const Local& local(const CodeNode& node, const std::vector<char>& held_outputs);

  CodeTree code_;
  FieldSpec field_;
  double tolerance_;
  std::map<std::vector<int>, Local> cache_;
};

}  // namespace aqss

#endif  // AQSS_ENCODING_HPP_
