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

#include "aqss/link_cover.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>

#include "aqss/error.hpp"

namespace aqss {

ASGraph::ASGraph(std::size_t vertex_count, std::vector<IndexPair> edges)
    : n_(vertex_count), adjacency_(vertex_count * vertex_count, 0) {
  for (auto [j, k] : edges) {
    if (j >= n_ || k >= n_) throw InputError("edge endpoint out of range");
    if (j == k) throw InputError("AS graph has no self-loops");
    if (j > k) std::swap(j, k);
    edges_.emplace_back(j, k);
    adjacency_[j * n_ + k] = adjacency_[k * n_ + j] = 1;
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

std::size_t ASGraph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (std::size_t u = 0; u < n_; ++u) d += adjacency_[v * n_ + u];
  return d;
}

PartialLinkClassification::PartialLinkClassification(std::vector<std::vector<std::size_t>> classes)
    : classes_(std::move(classes)) {
  for (auto& c : classes_) {
    if (c.empty()) throw InputError("partially linked classes must be nonempty");
    std::sort(c.begin(), c.end());
  }
  std::sort(classes_.begin(), classes_.end());
}

std::vector<std::size_t> PartialLinkClassification::assignment() const {
  std::size_t n = 0;
  for (const auto& c : classes_) n += c.size();
  std::vector<std::size_t> out(n, 0);
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    for (std::size_t v : classes_[i]) {
      if (v < n) out[v] = i;
    }
  }
  return out;
}

ASGraph build_as_graph(const AccessStructure& structure) {
  const auto& sets = structure.minimal_sets();
  std::vector<IndexPair> edges;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    for (std::size_t k = j + 1; k < sets.size(); ++k) {
      if (sets[j].intersects(sets[k])) edges.emplace_back(j, k);
    }
  }
  return ASGraph(sets.size(), std::move(edges));
}

bool is_clique_partition(const ASGraph& graph, const PartialLinkClassification& classification) {
  std::vector<int> seen(graph.vertex_count(), 0);
  for (const auto& c : classification.classes()) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] >= graph.vertex_count() || seen[c[i]]++) return false;
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        if (!graph.adjacent(c[i], c[j])) return false;
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

namespace {

bool union_is_clique(const ASGraph& graph, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  for (std::size_t u : a) {
    for (std::size_t v : b) {
      if (!graph.adjacent(u, v)) return false;
    }
  }
  return true;
}

using Mask = std::uint64_t;

// Backtracking search for partitions of the vertex set into at most k cliques.
// Vertices are assigned in `order`; a vertex joins an existing class or opens
// the next one, so every partition is produced once.
class CoverSearch {
 public:
  CoverSearch(const ASGraph& graph, std::vector<std::size_t> order, std::size_t k)
      : order_(std::move(order)), k_(k), neighbors_(graph.vertex_count(), 0), assignment_(graph.vertex_count(), 0) {
    for (auto [u, v] : graph.edges()) {
      neighbors_[u] |= Mask{1} << v;
      neighbors_[v] |= Mask{1} << u;
    }
  }

  // Calls on_solution(assignment) for each partition; stops when it returns false.
  void run(const std::function<bool(const std::vector<std::size_t>&)>& on_solution) {
    classes_.assign(k_, 0);
    used_ = 0;
    stopped_ = false;
    dfs(0, on_solution);
  }

 private:
  bool fits(std::size_t v, std::size_t c) const { return (classes_[c] & ~neighbors_[v]) == 0; }

  // Vertices that join no open class need new ones; pairwise non-adjacent
  // orphans need distinct ones.
  bool hopeless(std::size_t idx) const {
    Mask orphans_independent = 0;
    std::size_t needed = 0;
    for (std::size_t i = idx; i < order_.size(); ++i) {
      std::size_t u = order_[i];
      bool placeable = false;
      for (std::size_t c = 0; c < used_ && !placeable; ++c) placeable = fits(u, c);
      if (placeable) continue;
      if (used_ == k_) return true;
      if ((orphans_independent & neighbors_[u]) == 0) {
        orphans_independent |= Mask{1} << u;
        if (used_ + ++needed > k_) return true;
      }
    }
    return false;
  }

  void dfs(std::size_t idx, const std::function<bool(const std::vector<std::size_t>&)>& on_solution) {
    if (stopped_) return;
    if (idx == order_.size()) {
      if (!on_solution(assignment_)) stopped_ = true;
      return;
    }
    if (hopeless(idx)) return;
    std::size_t v = order_[idx];
    Mask bit = Mask{1} << v;
    for (std::size_t c = 0; c < used_ && !stopped_; ++c) {
      if (!fits(v, c)) continue;
      classes_[c] |= bit;
      assignment_[v] = c;
      dfs(idx + 1, on_solution);
      classes_[c] &= ~bit;
    }
    if (used_ < k_ && !stopped_) {
      classes_[used_] = bit;
      assignment_[v] = used_;
      ++used_;
      dfs(idx + 1, on_solution);
      --used_;
      classes_[used_] = 0;
    }
  }

  std::vector<std::size_t> order_;
  std::size_t k_;
  std::vector<Mask> neighbors_;
  std::vector<Mask> classes_;
  std::vector<std::size_t> assignment_;
  std::size_t used_ = 0;
  bool stopped_ = false;
};

PartialLinkClassification from_assignment(const std::vector<std::size_t>& assignment) {
  std::size_t k = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<std::vector<std::size_t>> classes(k);
  for (std::size_t v = 0; v < assignment.size(); ++v) classes[assignment[v]].push_back(v);
  return PartialLinkClassification(std::move(classes));
}

void check_cap(const ASGraph& graph, std::size_t vertex_cap) {
  std::size_t cap = std::min<std::size_t>(vertex_cap, 64);
  if (graph.vertex_count() > cap) {
    throw ResourceLimit("AS graph has " + std::to_string(graph.vertex_count()) +
                        " vertices; the exact clique cover is capped at " + std::to_string(cap) +
                        " (use the greedy method)");
  }
}

std::vector<std::size_t> index_order(const ASGraph& graph) {
  std::vector<std::size_t> order(graph.vertex_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

// Lower bound: a set of pairwise non-adjacent vertices needs that many classes.
std::size_t independent_lower_bound(const ASGraph& graph) {
  std::vector<std::size_t> order = index_order(graph);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return graph.degree(a) < graph.degree(b); });
  std::vector<std::size_t> chosen;
  for (std::size_t v : order) {
    if (std::none_of(chosen.begin(), chosen.end(), [&](std::size_t u) { return graph.adjacent(u, v); })) {
      chosen.push_back(v);
    }
  }
  return std::max<std::size_t>(chosen.size(), graph.vertex_count() ? 1 : 0);
}

std::size_t minimum_cover_size(const ASGraph& graph) {
  if (graph.vertex_count() == 0) return 0;
  // Descending degree in the complement graph is ascending degree here.
  std::vector<std::size_t> order = index_order(graph);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return graph.degree(a) < graph.degree(b); });
  std::size_t upper = greedy_clique_cover(graph).size();
  for (std::size_t k = independent_lower_bound(graph); k < upper; ++k) {
    bool found = false;
    CoverSearch(graph, order, k).run([&](const std::vector<std::size_t>&) {
      found = true;
      return false;
    });
    if (found) return k;
  }
  return upper;
}

}  // namespace

bool classes_pairwise_separated(const ASGraph& graph, const PartialLinkClassification& classification) {
  const auto& classes = classification.classes();
  for (std::size_t a = 0; a < classes.size(); ++a) {
    for (std::size_t b = a + 1; b < classes.size(); ++b) {
      if (union_is_clique(graph, classes[a], classes[b])) return false;
    }
  }
  return true;
}

PartialLinkClassification merge_normalize(const ASGraph& graph, PartialLinkClassification classification) {
  std::vector<std::vector<std::size_t>> classes = classification.classes();
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t a = 0; a < classes.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < classes.size() && !merged; ++b) {
        if (union_is_clique(graph, classes[a], classes[b])) {
          classes[a].insert(classes[a].end(), classes[b].begin(), classes[b].end());
          classes.erase(classes.begin() + static_cast<std::ptrdiff_t>(b));
          merged = true;
        }
      }
    }
  }
  return PartialLinkClassification(std::move(classes));
}

PartialLinkClassification exact_min_clique_cover(const ASGraph& graph, std::size_t vertex_cap) {
  bool truncated = false;
  auto covers = all_min_clique_covers(graph, 1, truncated, vertex_cap);
  if (covers.empty()) return PartialLinkClassification({});
  return merge_normalize(graph, covers.front());
}

std::vector<PartialLinkClassification> all_min_clique_covers(const ASGraph& graph, std::size_t limit, bool& truncated,
                                                             std::size_t vertex_cap) {
  check_cap(graph, vertex_cap);
  truncated = false;
  std::vector<PartialLinkClassification> out;
  if (graph.vertex_count() == 0 || limit == 0) return out;
  std::size_t k = minimum_cover_size(graph);
  CoverSearch(graph, index_order(graph), k).run([&](const std::vector<std::size_t>& assignment) {
    if (out.size() == limit) {
      truncated = true;
      return false;
    }
    out.push_back(from_assignment(assignment));
    return true;
  });
  return out;
}

PartialLinkClassification greedy_clique_cover(const ASGraph& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<char> covered(n, 0);
  auto live_degree = [&](std::size_t v) {
    std::size_t d = 0;
    for (std::size_t u = 0; u < n; ++u) d += !covered[u] && graph.adjacent(u, v);
    return d;
  };
  // Highest live degree among candidates, lowest index on ties.
  auto pick = [&](const std::vector<std::size_t>& candidates) {
    std::size_t best = candidates.front();
    std::size_t best_degree = live_degree(best);
    for (std::size_t v : candidates) {
      std::size_t d = live_degree(v);
      if (d > best_degree) {
        best = v;
        best_degree = d;
      }
    }
    return best;
  };

  std::vector<std::vector<std::size_t>> classes;
  for (;;) {
    std::vector<std::size_t> uncovered;
    for (std::size_t v = 0; v < n; ++v) {
      if (!covered[v]) uncovered.push_back(v);
    }
    if (uncovered.empty()) break;
    std::vector<std::size_t> clique{pick(uncovered)};
    covered[clique.back()] = 1;
    for (;;) {
      std::vector<std::size_t> candidates;
      for (std::size_t v = 0; v < n; ++v) {
        if (covered[v]) continue;
        if (std::all_of(clique.begin(), clique.end(), [&](std::size_t u) { return graph.adjacent(u, v); })) {
          candidates.push_back(v);
        }
      }
      if (candidates.empty()) break;
      clique.push_back(pick(candidates));
      covered[clique.back()] = 1;
    }
    classes.push_back(std::move(clique));
  }
  return merge_normalize(graph, PartialLinkClassification(std::move(classes)));
}

std::size_t lambda(const AccessStructure& structure, std::size_t vertex_cap) {
  return exact_min_clique_cover(build_as_graph(structure), vertex_cap).size();
}

std::size_t component_count(const ASGraph& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<char> seen(n, 0);
  std::size_t components = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++components;
    std::vector<std::size_t> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u = 0; u < n; ++u) {
        if (!seen[u] && graph.adjacent(u, v)) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
  }
  return components;
}

}  // namespace aqss
