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

#include "aqss/render.hpp"

#include <functional>
#include <sstream>

namespace aqss {

namespace {

std::string quoted(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string render_dot(const ASGraph& graph, const std::vector<std::string>& labels) {
  std::ostringstream out;
  out << "graph as_graph {\n";
  out << "  node [shape=ellipse];\n";
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    std::string label = v < labels.size() ? labels[v] : std::to_string(v);
    out << "  n" << v << " [label=" << quoted(label) << "];\n";
  }
  for (const auto& [a, b] : graph.edges()) out << "  n" << a << " -- n" << b << ";\n";
  out << "}\n";
  return out.str();
}

std::vector<std::string> as_graph_labels(const AccessStructure& structure) {
  std::vector<std::string> labels;
  for (const auto& s : structure.minimal_sets()) labels.push_back(s.to_string());
  return labels;
}

std::string render_dot(const SchemeTree& tree) {
  std::ostringstream nodes;
  std::ostringstream edges;
  std::size_t next = 0;
  std::function<std::size_t(const SchemeTree&)> walk = [&](const SchemeTree& node) {
    const std::size_t id = next++;
    switch (node.kind()) {
      case SchemeTree::Kind::kThreshold:
        nodes << "  t" << id << " [shape=box, label=" << quoted(node.params().to_string()) << "];\n";
        for (const auto& child : node.children()) {
          const std::size_t c = walk(child);
          edges << "  t" << id << " -> t" << c << ";\n";
        }
        break;
      case SchemeTree::Kind::kPlayer:
        nodes << "  t" << id << " [shape=ellipse, label=" << quoted(node.owner().label()) << "];\n";
        break;
      case SchemeTree::Kind::kResident:
        nodes << "  t" << id << " [shape=ellipse, style=dashed, label="
              << quoted("dealer resident#" + std::to_string(node.resident_index())) << "];\n";
        break;
    }
    return id;
  };
  walk(tree);
  return "digraph scheme {\n" + nodes.str() + edges.str() + "}\n";
}

}  // namespace aqss
