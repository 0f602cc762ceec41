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

#include "aqss/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aqss/error.hpp"

namespace aqss {

namespace {

class Compiler {
 public:
  Compiler(CodeTree& code, AndRealization and_gates) : code_(code), and_gates_(and_gates) {}

  std::size_t compile(const SchemeTree& node, const std::string& path, std::optional<std::size_t> parent) {
    const auto& params = node.params();
    if (params.is_polynomial()) {
      const std::size_t id = add(CodeNode::Kind::kPolynomial, params.k(), path, parent);
      for (std::size_t i = 0; i < node.children().size(); ++i) {
        auto out = output_for(node.children()[i], path + "/" + std::to_string(i), id);
        code_.nodes[id].outputs.push_back(out);
      }
      return id;
    }
    if (params.is_and()) {
      if (and_gates_ == AndRealization::kAdditive) {
        const std::size_t id = add(CodeNode::Kind::kAdditive, params.n(), path, parent);
        for (std::size_t i = 0; i < node.children().size(); ++i) {
          auto out = output_for(node.children()[i], path + "/" + std::to_string(i), id);
          code_.nodes[id].outputs.push_back(out);
        }
        return id;
      }
      return chain(node, 0, path, parent);
    }
    throw UnsupportedStructure("threshold node " + params.to_string() + " at " + path +
                               " has k < n < 2k-1, which is not realized");
  }

  // Wraps a bare leaf as an identity code.
  std::size_t compile_leaf_root(const SchemeTree& leaf) {
    const std::size_t id = add(CodeNode::Kind::kPolynomial, 1, "root", std::nullopt);
    auto out = output_for(leaf, "root/0", id);
    code_.nodes[id].outputs.push_back(out);
    return id;
  }

 private:
  std::size_t add(CodeNode::Kind kind, int k, const std::string& path, std::optional<std::size_t> parent) {
    CodeNode node;
    node.kind = kind;
    node.k = k;
    node.path = path;
    node.parent = parent;
    code_.nodes.push_back(std::move(node));
    return code_.nodes.size() - 1;
  }

  CodeNode::Output output_for(const SchemeTree& child, const std::string& path, std::size_t parent) {
    switch (child.kind()) {
      case SchemeTree::Kind::kPlayer:
        code_.leaf_owners.push_back({ShareOwner::Kind::kPlayer, child.owner().label(), 0});
        return {CodeNode::Output::Kind::kLeaf, code_.leaf_owners.size() - 1};
      case SchemeTree::Kind::kResident:
        code_.leaf_owners.push_back({ShareOwner::Kind::kResident, "", child.resident_index()});
        return {CodeNode::Output::Kind::kLeaf, code_.leaf_owners.size() - 1};
      case SchemeTree::Kind::kThreshold:
        break;
    }
    return {CodeNode::Output::Kind::kChild, compile(child, path, parent)};
  }

  // Link i of the ((2,3)) cascade for an AND node: outputs child i, the rest
  // of the chain, and an environment qudit.
  std::size_t chain(const SchemeTree& node, std::size_t i, const std::string& path,
                    std::optional<std::size_t> parent) {
    const auto& children = node.children();
    const std::size_t id = add(CodeNode::Kind::kPolynomial, 2, path, parent);
    auto first = output_for(children[i], path + "/" + std::to_string(i), id);
    code_.nodes[id].outputs.push_back(first);
    CodeNode::Output rest{};
    if (i + 2 == children.size()) {
      rest = output_for(children[i + 1], path + "/" + std::to_string(i + 1), id);
    } else {
      rest = {CodeNode::Output::Kind::kChild, chain(node, i + 1, path, id)};
    }
    code_.nodes[id].outputs.push_back(rest);
    code_.nodes[id].outputs.push_back({CodeNode::Output::Kind::kEnvironment, code_.environment_count++});
    return id;
  }

  CodeTree& code_;
  AndRealization and_gates_;
};

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

int spread_exponent(const CodeNode& node) {
  return node.kind == CodeNode::Kind::kPolynomial ? node.k - 1 : node.n() - 1;
}

}  // namespace

std::vector<std::size_t> CodeTree::subtree_leaves(std::size_t node) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{node};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    const auto& outputs = nodes.at(id).outputs;
    for (auto it = outputs.rbegin(); it != outputs.rend(); ++it) {
      if (it->kind == CodeNode::Output::Kind::kLeaf) out.push_back(it->index);
      if (it->kind == CodeNode::Output::Kind::kChild) stack.push_back(it->index);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int CodeTree::largest_length() const {
  int n = 1;
  for (const auto& node : nodes) n = std::max(n, node.n());
  return n;
}

CodeTree compile_scheme(const SchemeTree& tree, AndRealization and_gates) {
  CodeTree code;
  Compiler compiler(code, and_gates);
  if (tree.is_threshold()) {
    compiler.compile(tree, "root", std::nullopt);
  } else {
    compiler.compile_leaf_root(tree);
  }
  return code;
}

FieldSpec choose_field(const SchemeTree& tree, int secret_dim, AndRealization and_gates) {
  if (secret_dim < 2) throw InputError("secret dimension must be at least 2");
  return FieldSpec(next_prime(std::max(secret_dim, compile_scheme(tree, and_gates).largest_length())));
}

std::string ShareOwner::to_string() const {
  switch (kind) {
    case Kind::kPlayer:
      return player;
    case Kind::kResident:
      return "dealer#" + std::to_string(index);
    case Kind::kEnvironment:
      return "environment#" + std::to_string(index);
    case Kind::kReference:
      return "reference";
    case Kind::kUnexpanded:
      return "unexpanded#" + std::to_string(index);
  }
  return "";
}

void ShareMap::assign(const std::string& label, ShareOwner owner) {
  if (!owners_.emplace(label, std::move(owner)).second) {
    throw InputError("subsystem '" + label + "' already has an owner");
  }
}

const ShareOwner& ShareMap::owner(const std::string& label) const {
  auto it = owners_.find(label);
  if (it == owners_.end()) throw InputError("subsystem '" + label + "' has no owner");
  return it->second;
}

std::string leaf_label(std::size_t leaf) { return "q" + std::to_string(leaf); }
std::string environment_label(std::size_t index) { return "env" + std::to_string(index); }
std::string unexpanded_label(std::size_t node) { return "u" + std::to_string(node); }

std::uint64_t estimate_terms(const CodeTree& code, const FieldSpec& field, const std::vector<char>& expanded,
                             std::uint64_t secret_terms) {
  std::uint64_t total = secret_terms;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    if (!expanded.empty() && !expanded[id]) continue;
    const auto& node = code.nodes[id];
    for (int i = 0; i < spread_exponent(node); ++i) total = saturating_mul(total, static_cast<std::uint64_t>(field.p()));
    for (const auto& out : node.outputs) {
      if (out.kind == CodeNode::Output::Kind::kChild) stack.push_back(out.index);
    }
  }
  return total;
}

EncodedScheme encode_tree(const QuditRegister& secret, const CodeTree& code, const FieldSpec& field,
                          std::vector<char> expanded, const Limits& limits) {
  if (!(secret.field() == field)) throw InputError("secret register dimension differs from the field");
  if (expanded.empty()) expanded.assign(code.nodes.size(), 1);
  if (expanded.size() != code.nodes.size()) throw InputError("expansion flags need one entry per code node");
  if (code.largest_length() > field.p()) {
    throw InputError("field GF(" + std::to_string(field.p()) + ") is too small for a code of length " +
                     std::to_string(code.largest_length()));
  }
  const std::uint64_t estimate = estimate_terms(code, field, expanded, secret.terms().size());
  if (estimate > limits.max_amplitudes) {
    throw ResourceLimit("encoding needs " + std::to_string(estimate) + " stored amplitudes, above the cap of " +
                        std::to_string(limits.max_amplitudes));
  }

  QuditRegister state = secret;
  std::vector<std::string> unexpanded;
  std::vector<std::pair<std::string, std::size_t>> pending{{kSecretLabel, 0}};
  while (!pending.empty()) {
    auto [input, id] = pending.back();
    pending.pop_back();
    const auto& node = code.nodes[id];
    if (!expanded[id]) {
      const std::string label = unexpanded_label(id);
      Codebook identity(static_cast<std::size_t>(field.p()));
      for (int s = 0; s < field.p(); ++s) identity[s].push_back({{s}, 1.0});
      state = apply_isometry(state, input, {label}, identity, limits);
      unexpanded.push_back(label);
      continue;
    }
    std::vector<std::string> outputs;
    for (const auto& out : node.outputs) {
      switch (out.kind) {
        case CodeNode::Output::Kind::kLeaf:
          outputs.push_back(leaf_label(out.index));
          break;
        case CodeNode::Output::Kind::kEnvironment:
          outputs.push_back(environment_label(out.index));
          break;
        case CodeNode::Output::Kind::kChild:
          outputs.push_back("t" + std::to_string(out.index));
          pending.emplace_back(outputs.back(), out.index);
          break;
      }
    }
    const Codebook book = node.kind == CodeNode::Kind::kPolynomial ? polynomial_codebook(node.k, field)
                                                                    : additive_codebook(node.n(), field);
    state = apply_isometry(state, input, outputs, book, limits);
  }

  ShareMap shares;
  std::vector<std::string> order;
  for (std::size_t leaf = 0; leaf < code.leaf_owners.size(); ++leaf) {
    const std::string label = leaf_label(leaf);
    if (!state.has(label)) continue;
    order.push_back(label);
    shares.assign(label, code.leaf_owners[leaf]);
  }
  std::sort(unexpanded.begin(), unexpanded.end(), [](const std::string& a, const std::string& b) {
    return std::stoul(a.substr(1)) < std::stoul(b.substr(1));
  });
  for (const auto& label : unexpanded) {
    order.push_back(label);
    shares.assign(label, {ShareOwner::Kind::kUnexpanded, "", std::stoul(label.substr(1))});
  }
  for (std::size_t e = 0; e < code.environment_count; ++e) {
    const std::string label = environment_label(e);
    if (!state.has(label)) continue;
    order.push_back(label);
    shares.assign(label, {ShareOwner::Kind::kEnvironment, "", e});
  }
  for (const auto& label : state.labels()) {
    if (std::find(order.begin(), order.end(), label) != order.end()) continue;
    order.push_back(label);
    if (label == kReferenceLabel) shares.assign(label, {ShareOwner::Kind::kReference, "", 0});
  }
  return EncodedScheme{state.reordered(order), std::move(shares), std::move(expanded)};
}

std::vector<char> expansion_for(const CodeTree& code, const std::vector<char>& held_leaves) {
  if (held_leaves.size() != code.leaf_owners.size()) throw InputError("held flags need one entry per leaf");
  std::vector<char> expanded(code.nodes.size(), 0);
  for (std::size_t id = 0; id < code.nodes.size(); ++id) {
    bool any_held = false;
    bool any_free = false;
    for (std::size_t leaf : code.subtree_leaves(id)) (held_leaves[leaf] ? any_held : any_free) = true;
    expanded[id] = any_held && any_free;
  }
  return expanded;
}

std::vector<char> decodable_nodes(const CodeTree& code, const std::vector<char>& held_leaves) {
  if (held_leaves.size() != code.leaf_owners.size()) throw InputError("held flags need one entry per leaf");
  std::vector<char> decodable(code.nodes.size(), 0);
  for (std::size_t id = code.nodes.size(); id-- > 0;) {
    const auto& node = code.nodes[id];
    std::size_t count = 0;
    for (const auto& out : node.outputs) {
      if (out.kind == CodeNode::Output::Kind::kLeaf && held_leaves[out.index]) ++count;
      if (out.kind == CodeNode::Output::Kind::kChild && decodable[out.index]) ++count;
    }
    const std::size_t need =
        node.kind == CodeNode::Kind::kPolynomial ? static_cast<std::size_t>(node.k) : node.outputs.size();
    decodable[id] = count >= need;
  }
  return decodable;
}

std::vector<char> expansion_for_decoding(const CodeTree& code, const std::vector<char>& held_leaves) {
  std::vector<char> expanded = expansion_for(code, held_leaves);
  const std::vector<char> decodable = decodable_nodes(code, held_leaves);
  for (std::size_t id = 0; id < expanded.size(); ++id) expanded[id] = expanded[id] && decodable[id];
  return expanded;
}

namespace {

class Decoder {
 public:
  Decoder(QuditRegister state, const CodeTree& code, const std::function<bool(const std::string&)>& available)
      : state_(std::move(state)), code_(code), available_(available) {}

  // Label now carrying the input of `id`, or empty when it cannot be decoded.
  std::optional<std::string> decode(std::size_t id, std::size_t* decodable = nullptr) {
    const std::string packed = unexpanded_label(id);
    if (state_.has(packed)) {
      if (available_(packed)) return packed;
      return std::nullopt;
    }
    const auto& node = code_.nodes[id];
    const std::size_t need =
        node.kind == CodeNode::Kind::kPolynomial ? static_cast<std::size_t>(node.k) : node.outputs.size();
    std::vector<std::string> labels;
    std::vector<int> points;
    for (std::size_t i = 0; i < node.outputs.size() && labels.size() < need; ++i) {
      const auto& out = node.outputs[i];
      std::optional<std::string> got;
      if (out.kind == CodeNode::Output::Kind::kLeaf) {
        const std::string label = leaf_label(out.index);
        if (state_.has(label) && available_(label)) got = label;
      } else if (out.kind == CodeNode::Output::Kind::kChild) {
        got = decode(out.index);
      }
      if (got) {
        labels.push_back(*got);
        points.push_back(static_cast<int>(i));
      }
    }
    if (decodable) *decodable = labels.size();
    if (labels.size() < need) return std::nullopt;
    if (node.kind == CodeNode::Kind::kPolynomial) {
      state_ = decode_threshold(state_, labels, points, node.k);
      return labels.front();
    }
    state_ = decode_additive(state_, labels);
    return labels.back();
  }

  QuditRegister& state() { return state_; }

 private:
  QuditRegister state_;
  const CodeTree& code_;
  const std::function<bool(const std::string&)>& available_;
};

}  // namespace

Reconstruction reconstruct_tree(const QuditRegister& state, const CodeTree& code, const ShareMap& shares,
                                const std::function<bool(const std::string&)>& available) {
  for (const auto& label : state.labels()) shares.owner(label);
  Decoder decoder(state, code, available);
  std::size_t decodable = 0;
  auto designated = decoder.decode(0, &decodable);
  if (!designated) {
    const auto& root = code.nodes[0];
    const std::size_t need =
        root.kind == CodeNode::Kind::kPolynomial ? static_cast<std::size_t>(root.k) : root.outputs.size();
    throw InsufficientShares(root.path, "insufficient shares at " + root.path + ": " + std::to_string(decodable) +
                                            " of " + std::to_string(need) + " needed shares can be decoded");
  }
  return Reconstruction{std::move(decoder.state()), *designated};
}

DecouplingContractor::DecouplingContractor(const CodeTree& code, FieldSpec field, double tolerance)
    : code_(code), field_(field), tolerance_(tolerance) {}

const DecouplingContractor::Local& DecouplingContractor::local(const CodeNode& node,
                                                               const std::vector<char>& held_outputs) {
  std::vector<int> key{static_cast<int>(node.kind), node.k};
  key.insert(key.end(), held_outputs.begin(), held_outputs.end());
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  std::vector<std::string> outputs;
  std::vector<std::string> held;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < held_outputs.size(); ++i) {
    outputs.push_back("o" + std::to_string(i));
    (held_outputs[i] ? held : rest).push_back(outputs.back());
  }
  Local value{};
  try {
    QuditRegister start = entangle_with_reference(field_, "in", "r");
    QuditRegister encoded = node.kind == CodeNode::Kind::kPolynomial ? encode_polynomial(start, "in", node.k, outputs)
                                                                     : encode_additive(start, "in", outputs);
    value = {decoupling_distance(encoded, held, "r"), decoupling_distance(encoded, rest, "r")};
  } catch (const ResourceLimit&) {
    if (node.kind != CodeNode::Kind::kPolynomial) throw;
    // Too large to simulate locally: any k shares of a ((k,2k-1)) code
    // recover the input and any k-1 carry nothing.
    const double full = 1.0 - 1.0 / (static_cast<double>(field_.p()) * field_.p());
    const bool recovers = held.size() >= static_cast<std::size_t>(node.k);
    value = recovers ? Local{full, 0.0} : Local{0.0, full};
  }
  return cache_.emplace(std::move(key), value).first->second;
}

std::optional<DecouplingPair> DecouplingContractor::evaluate(const std::vector<char>& held_leaves) {
  if (held_leaves.size() != code_.leaf_owners.size()) throw InputError("held flags need one entry per leaf");
  // Children always have larger indices than their parents.
  std::vector<std::optional<Local>> result(code_.nodes.size());
  for (std::size_t id = code_.nodes.size(); id-- > 0;) {
    const auto& node = code_.nodes[id];
    std::vector<char> held_outputs;
    bool ok = true;
    for (const auto& out : node.outputs) {
      switch (out.kind) {
        case CodeNode::Output::Kind::kLeaf:
          held_outputs.push_back(held_leaves[out.index]);
          break;
        case CodeNode::Output::Kind::kEnvironment:
          held_outputs.push_back(0);
          break;
        case CodeNode::Output::Kind::kChild: {
          const auto& child = result[out.index];
          if (!child) {
            ok = false;
          } else if (child->complement <= tolerance_) {
            held_outputs.push_back(1);
          } else if (child->held <= tolerance_) {
            held_outputs.push_back(0);
          } else {
            ok = false;
          }
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) result[id] = local(node, held_outputs);
  }
  if (!result[0]) return std::nullopt;
  return DecouplingPair{result[0]->held, result[0]->complement};
}

}  // namespace aqss
