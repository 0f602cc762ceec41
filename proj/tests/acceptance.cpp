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

// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <sys/resource.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "aqss/encoding.hpp"
#include "aqss/error.hpp"
#include "aqss/verifier.hpp"
#include "test_util.hpp"

namespace {

using namespace aqss;
using aqss::testing::letters;
using aqss::testing::structure;

constexpr double kFidelityFloor = 1 - 1e-9;
constexpr double kDistanceCeiling = 1e-9;
constexpr double kStateTolerance = 1e-9;
constexpr double kRuntimeLimitSeconds = 60.0;
constexpr long kMemoryLimitKiB = 512L * 1024;
constexpr int kRandomGraphs = 150;
constexpr int kRandomStructures = 10;
constexpr int kMinimumSubsets = 50;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Outcome worked_example() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto g = structure({"ABC", "BD", "EFG"});
  const auto classes = exact_min_clique_cover(build_as_graph(g));
  const auto tree = build_scheme(g, classes);
  const auto r = verify_scheme(g, classes, tree);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);

  o.require(classes.size() == 2, "lambda == 2");
  o.require(r.resident_shares == 1, "one resident share");
  o.require(r.p == 3, "p == 3");
  o.require(r.stored_amplitudes <= 177147, "amplitudes <= 3^11");
  o.require(r.recoverability.size() == 3, "three minimal sets");
  double worst_fidelity = 1, worst_distance = 0;
  for (const auto& e : r.recoverability) {
    o.require(e.with_resident && e.fidelity.has_value(), e.set.to_string() + " decoded with resident");
    worst_fidelity = std::min(worst_fidelity, e.fidelity.value_or(0));
  }
  o.require(!r.privacy.empty(), "privacy sets present");
  for (const auto& e : r.privacy) worst_distance = std::max(worst_distance, e.trace_distance);
  o.require(worst_fidelity >= kFidelityFloor, "fidelity");
  o.require(worst_distance <= kDistanceCeiling, "privacy distance");
  o.require(seconds < kRuntimeLimitSeconds, "runtime");
  o.require(usage.ru_maxrss < kMemoryLimitKiB, "memory");
  o.detail << " lambda=" << classes.size() << " residents=" << r.resident_shares << " p=" << r.p
           << " amplitudes=" << r.stored_amplitudes << " min_fidelity=" << worst_fidelity
           << " max_privacy_distance=" << worst_distance << " privacy_sets=" << r.privacy.size() << " time=" << seconds
           << "s peak_rss=" << usage.ru_maxrss / 1024 << "MiB";
  return o;
}

Outcome conventional_reduction() {
  Outcome o;
  const auto g = structure({"ABC", "ADE", "BDF"});
  const auto classes = exact_min_clique_cover(build_as_graph(g));
  const auto r = verify_scheme(g, classes, build_scheme(g, classes));
  o.require(classes.size() == 1, "lambda == 1");
  o.require(r.resident_shares == 0, "no resident shares");
  o.require(r.overall, "overall verification");
  o.detail << " lambda=" << classes.size() << " residents=" << r.resident_shares << " p=" << r.p
           << " overall=" << (r.overall ? "pass" : "fail");
  return o;
}

Outcome threshold_code() {
  Outcome o;
  const FieldSpec f(3);
  const auto book = polynomial_codebook(2, f);
  // Independent image: f(x) = c + s x at x = 0, 1, 2.
  double image_error = 0;
  for (int s = 0; s < 3; ++s) {
    std::map<std::vector<int>, Amplitude> got;
    for (const auto& [d, a] : book[static_cast<std::size_t>(s)]) got[d] += a;
    o.require(got.size() == 3, "three terms per image");
    for (int c = 0; c < 3; ++c) {
      const std::vector<int> word{c, (c + s) % 3, (c + 2 * s) % 3};
      image_error = std::max(image_error, std::abs(got[word] - 1 / std::sqrt(3.0)));
    }
  }
  o.require(image_error <= kStateTolerance, "basis images");

  const std::vector<std::string> out{"q0", "q1", "q2"};
  const auto enc = encode_polynomial(entangle_with_reference(f), kSecretLabel, 2, out);
  double worst_fidelity = 1;
  for (auto [a, b] : std::array<std::pair<int, int>, 6>{{{0, 1}, {0, 2}, {1, 2}, {1, 0}, {2, 0}, {2, 1}}}) {
    const auto dec = decode_threshold(enc, {out[static_cast<std::size_t>(a)], out[static_cast<std::size_t>(b)]}, {a, b}, 2);
    worst_fidelity = std::min(worst_fidelity, entanglement_fidelity(dec, out[static_cast<std::size_t>(a)], kReferenceLabel));
  }
  o.require(worst_fidelity >= kFidelityFloor, "2-subset fidelity");

  double worst_single = 0;
  std::vector<QuditRegister> inputs{enc};
  for (int s = 0; s < 3; ++s) {
    inputs.push_back(encode_polynomial(QuditRegister::basis_state(f, {kSecretLabel}, {s}), kSecretLabel, 2, out));
  }
  for (const auto& state : inputs) {
    for (const auto& q : out) {
      const Eigen::MatrixXcd diff = partial_trace(state, {q}).matrix() - Eigen::MatrixXcd::Identity(3, 3) / 3.0;
      worst_single = std::max(worst_single, diff.cwiseAbs().maxCoeff());
    }
  }
  o.require(worst_single <= kStateTolerance, "1-subset reduced state is I/3");
  o.detail << " image_error=" << image_error << " min_fidelity=" << worst_fidelity
           << " max_single_share_deviation=" << worst_single;
  return o;
}

// Minimum number of cliques over all set partitions (restricted growth strings).
std::size_t brute_force_cover(const ASGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return 0;
  std::size_t best = n;
  std::vector<std::size_t> block(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t v, std::size_t used) {
    if (used >= best) return;
    if (v == n) {
      best = used;
      return;
    }
    for (std::size_t b = 0; b <= used && b < n; ++b) {
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u) ok = block[u] != b || g.adjacent(u, v);
      if (!ok) continue;
      block[v] = b;
      rec(v + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
  return best;
}

Outcome clique_cover() {
  Outcome o;
  std::mt19937 rng(2024);
  int mismatches = 0, bound_failures = 0, completeness_failures = 0;
  for (int t = 0; t < kRandomGraphs; ++t) {
    const std::size_t n = 1 + rng() % 8;
    std::bernoulli_distribution coin(0.1 + 0.8 * (t % 10) / 10.0);
    std::vector<IndexPair> edges;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (coin(rng)) edges.push_back({a, b});
      }
    }
    const bool complete = edges.size() == n * (n - 1) / 2;
    const ASGraph g(n, edges);
    const std::size_t exact = exact_min_clique_cover(g).size();
    mismatches += exact != brute_force_cover(g);
    bound_failures += exact < component_count(g);
    completeness_failures += (exact == 1) != complete;
  }
  const ASGraph bridged(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}});
  const std::size_t bridged_lambda = exact_min_clique_cover(bridged).size();
  o.require(mismatches == 0, "exact == brute force");
  o.require(bound_failures == 0, "lambda >= components");
  o.require(completeness_failures == 0, "lambda == 1 iff complete");
  o.require(bridged_lambda == 2, "two-triangle graph lambda == 2");
  o.detail << " graphs=" << kRandomGraphs << " mismatches=" << mismatches << " bound_failures=" << bound_failures
           << " completeness_failures=" << completeness_failures << " two_triangle_lambda=" << bridged_lambda;
  return o;
}

Outcome resident_accounting() {
  Outcome o;
  const auto g = structure({"ABC", "DE", "FGH"});
  const std::size_t l = exact_min_clique_cover(build_as_graph(g)).size();
  const auto a = analyze_trivial_embedding(g);
  o.require(l == 3, "lambda == 3");
  o.require(a.theorem_count == 2, "theorem count 2");
  o.require(a.better_count == 3, "better count 3");
  o.require(a.x >= 1 && a.naive_count == 3 + 2 * a.x && a.naive_count > 3, "naive count 3+2x > 3");
  o.require(a.theorem_count < a.better_count && a.better_count <= a.naive_count, "ordering");
  o.detail << " lambda=" << l << " theorem=" << a.theorem_count << " better=" << a.better_count
           << " naive=" << a.naive_count << " x=" << a.x;
  return o;
}

std::vector<char> flags(std::size_t n, bool value) { return std::vector<char>(n, value ? 1 : 0); }

std::vector<AccessStructure> random_supported(std::mt19937& rng, int count, bool need_several_classes) {
  std::vector<AccessStructure> out;
  while (static_cast<int>(out.size()) < count) {
    const auto g = aqss::testing::random_structure(rng, 6, 4, 3);
    const auto classes = exact_min_clique_cover(build_as_graph(g));
    if (need_several_classes && classes.size() < 2) continue;
    try {
      const auto tree = build_scheme(g, classes);
      const auto code = compile_scheme(tree);
      const FieldSpec f = choose_field(tree, 2);
      if (estimate_terms(code, f, std::vector<char>(code.nodes.size(), 1), f.p()) > (1u << 20)) continue;
      out.push_back(g);
    } catch (const UnsupportedStructure&) {
    }
  }
  return out;
}

Outcome no_cloning() {
  Outcome o;
  std::mt19937 rng(7);
  std::vector<AccessStructure> cases{structure({"ABC", "BD", "EFG"}), structure({"AB", "CD"}),
                                     structure({"ABC", "DE", "FGH"})};
  for (const auto& g : random_supported(rng, 5, true)) cases.push_back(g);
  std::size_t pairs = 0, importance = 0, coalitions = 0;
  for (const auto& g : cases) {
    const auto classes = exact_min_clique_cover(build_as_graph(g));
    SchemeSimulator sim(g, build_scheme(g, classes));
    const std::size_t res = sim.resident_count();
    // Every authorized coalition that has a disjoint authorized partner.
    const auto& u = g.universe();
    const std::uint32_t full = (1u << u.size()) - 1;
    std::vector<std::uint32_t> authorized;
    for (std::uint32_t m = 1; m <= full; ++m) {
      if (aqss::testing::authorized_oracle(g, aqss::testing::from_mask(u, m))) authorized.push_back(m);
    }
    std::map<std::uint32_t, bool> alone, assisted;
    for (std::uint32_t a : authorized) {
      for (std::uint32_t b : authorized) {
        if (a >= b || (a & b) != 0) continue;
        ++pairs;
        for (std::uint32_t m : {a, b}) {
          if (alone.count(m)) continue;
          const auto set = aqss::testing::from_mask(u, m);
          const auto without = sim.evaluate(set, flags(res, false));
          const auto with = sim.evaluate(set, flags(res, true));
          alone[m] = without.decoded || without.complement_distance <= kDistanceCeiling;
          assisted[m] = with.decoded && with.complement_distance <= kDistanceCeiling &&
                        with.fidelity.value_or(0) >= kFidelityFloor;
          o.require(!alone[m], set.to_string() + " recovers without residents in " + g.to_string());
          o.require(assisted[m], set.to_string() + " fails with residents in " + g.to_string());
        }
      }
    }
    coalitions += alone.size();
    for (std::size_t i = 0; i < res; ++i) {
      ++importance;
      o.require(check_importance(sim, g, i).pass, "resident " + std::to_string(i) + " important in " + g.to_string());
    }
  }
  o.require(pairs > 0, "some disjoint pairs");
  o.detail << " schemes=" << cases.size() << " disjoint_pairs=" << pairs << " coalitions=" << coalitions
           << " residents_checked=" << importance;
  return o;
}

Outcome verdict_agreement() {
  Outcome o;
  std::mt19937 rng(99);
  std::vector<AccessStructure> cases{structure({"ABC", "BD", "EFG"})};
  for (const auto& g : random_supported(rng, kRandomStructures, false)) cases.push_back(g);
  std::size_t subsets = 0, disagreements = 0, wrong = 0;
  for (const auto& g : cases) {
    const auto classes = exact_min_clique_cover(build_as_graph(g));
    const auto tree = build_scheme(g, classes);
    SchemeSimulator sim(g, tree);
    const auto& u = g.universe();
    for (std::uint32_t m = 0; m < (1u << u.size()); ++m) {
      const auto set = aqss::testing::from_mask(u, m);
      for (bool residents : {false, true}) {
        if (residents && sim.resident_count() == 0) continue;
        const auto r = sim.evaluate(set, flags(sim.resident_count(), residents));
        ++subsets;
        disagreements += (r.complement_distance <= kDistanceCeiling) != r.decoded;
        // Decoding needs a vote from at least as many classes as the top threshold.
        std::size_t votes = residents ? sim.resident_count() : 0;
        for (const auto& c : classes.classes()) votes += aqss::testing::authorized_oracle(class_structure(g, c), set);
        wrong += r.decoded != (votes >= classes.size());
      }
    }
  }
  o.require(subsets >= static_cast<std::size_t>(kMinimumSubsets), "at least 50 subsets");
  o.require(disagreements == 0, "decoupling and decoder agree");
  o.require(wrong == 0, "decoder matches vote oracle");
  o.detail << " structures=" << cases.size() << " subsets=" << subsets << " disagreements=" << disagreements
           << " oracle_mismatches=" << wrong;
  return o;
}

std::string run_capture(const std::string& command, int& status) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buffer{};
  std::size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) out.append(buffer.data(), n);
  status = pclose(pipe);
  return out;
}

Outcome determinism() {
  Outcome o;
  const std::string command = std::string("'") + AQSS_CLI + "' verify --expr 'structure: ABC, BD, EFG' --json -";
  int first_status = 0, second_status = 0;
  const std::string first = run_capture(command, first_status);
  const std::string second = run_capture(command, second_status);
  o.require(first_status == 0 && second_status == 0, "verify exits 0");
  o.require(!first.empty() && first.find("\"overall\"") != std::string::npos, "JSON report produced");
  o.require(first == second, "byte-identical");
  o.detail << " bytes=" << first.size() << " identical=" << (first == second ? "yes" : "no");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"worked example {ABC,BD,EFG} end to end", worked_example},
      {"conventional reduction {ABC,ADE,BDF}", conventional_reduction},
      {"((2,3)) code over GF(3)", threshold_code},
      {"exact clique cover", clique_cover},
      {"resident-share accounting {ABC,DE,FGH}", resident_accounting},
      {"no-cloning consistency", no_cloning},
      {"decoupling vs decoder agreement", verdict_agreement},
      {"deterministic verify JSON", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << i + 1 << ": " << criteria[i].first << " |"
              << o.detail.str() << " ("
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s)" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}
