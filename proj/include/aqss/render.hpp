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

#ifndef AQSS_RENDER_HPP_
#define AQSS_RENDER_HPP_

#include <string>
#include <vector>

#include "aqss/link_cover.hpp"
#include "aqss/scheme.hpp"

namespace aqss {

// Undirected DOT graph. labels[v] names vertex v; missing labels default to
// the vertex index.
std::string render_dot(const ASGraph& graph, const std::vector<std::string>& labels = {});

// Vertex labels for an AS graph: the minimal sets as strings.
std::vector<std::string> as_graph_labels(const AccessStructure& structure);

// DOT digraph of the scheme tree. Threshold nodes are labeled "((k,n))",
// player leaves by owner, resident leaves "dealer resident#i".
std::string render_dot(const SchemeTree& tree);

}  // namespace aqss

#endif  // AQSS_RENDER_HPP_
