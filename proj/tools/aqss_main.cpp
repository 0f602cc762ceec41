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

// aqss: analyze, build, simulate and verify assisted quantum secret sharing
// schemes for monotone access structures.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "aqss/access_structure.hpp"
#include "aqss/encoding.hpp"
#include "aqss/error.hpp"
#include "aqss/link_cover.hpp"
#include "aqss/parser.hpp"
#include "aqss/render.hpp"
#include "aqss/scheme.hpp"
#include "aqss/verifier.hpp"
#include "json.hpp"

namespace {

using namespace aqss;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitResource = 4;

struct RunConfig {
  std::string input;
  std::string expr;
  std::string method = "exact";
  std::string format = "human";
  std::string what = "as-graph";
  std::string dot_format = "dot";
  std::string out;
  std::string json_out;
  std::string and_gates = "cascade";
  double tolerance = kTolerance;
  std::uint64_t max_amplitudes = 0;  // 0: environment or default
  std::size_t vertex_cap = kDefaultVertexCap;
  bool all = false;
};

std::string read_input(const RunConfig& config) {
  if (!config.expr.empty()) return config.expr;
  if (config.input.empty()) throw InputError("no input: pass a file, '-' for stdin, or --expr");
  if (config.input == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(config.input);
  if (!in) throw InputError("cannot read '" + config.input + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

AccessStructure load(const RunConfig& config) { return parse_access_structure(read_input(config)); }

Limits limits_for(const RunConfig& config) {
  Limits limits;
  if (const char* env = std::getenv("AQSS_MAX_AMPLITUDES"); env && *env) {
    try {
      limits.max_amplitudes = std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("AQSS_MAX_AMPLITUDES is not a number: ") + env);
    }
  }
  if (config.max_amplitudes != 0) limits.max_amplitudes = config.max_amplitudes;
  if (limits.max_amplitudes < (1u << 10)) throw InputError("the amplitude cap must be at least 1024");
  return limits;
}

VerifyOptions verify_options(const RunConfig& config) {
  if (!(config.tolerance > 0.0 && config.tolerance <= 1e-3)) throw InputError("tolerance must lie in (0, 1e-3]");
  VerifyOptions options;
  options.tolerance = config.tolerance;
  options.limits = limits_for(config);
  options.and_gates = config.and_gates == "additive" ? AndRealization::kAdditive : AndRealization::kCascade;
  return options;
}

PartialLinkClassification classify(const AccessStructure& structure, const RunConfig& config) {
  const ASGraph graph = build_as_graph(structure);
  if (config.method == "greedy") return greedy_clique_cover(graph);
  return exact_min_clique_cover(graph, config.vertex_cap);
}

nlohmann::json set_json(const PlayerSet& set) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : set) out.push_back(p.label());
  return out;
}

nlohmann::json classes_json(const AccessStructure& structure, const PartialLinkClassification& c) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& members : c.classes()) {
    nlohmann::json cls = nlohmann::json::array();
    for (std::size_t j : members) cls.push_back(set_json(structure.minimal_sets()[j]));
    out.push_back(cls);
  }
  return out;
}

std::string classes_text(const AccessStructure& structure, const PartialLinkClassification& c) {
  std::string out;
  for (const auto& members : c.classes()) {
    out += out.empty() ? "{" : " {";
    for (std::size_t i = 0; i < members.size(); ++i) {
      out += (i ? ", " : "") + structure.minimal_sets()[members[i]].to_string();
    }
    out += "}";
  }
  return out;
}

void row(const std::string& key, const std::string& value) {
  std::cout << std::left << std::setw(21) << key << ' ' << value << "\n";
}

std::string fixed(double value) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << value;
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

int cmd_check(const RunConfig& config) {
  const AccessStructure structure = load(config);
  const auto violations = check_pairwise_overlap(structure);
  if (config.format == "json") {
    nlohmann::json out;
    out["players"] = set_json(structure.universe());
    out["structure"] = nlohmann::json::array();
    for (const auto& s : structure.minimal_sets()) out["structure"].push_back(set_json(s));
    out["violations"] = nlohmann::json::array();
    for (const auto& [j, k] : violations) {
      out["violations"].push_back({set_json(structure.minimal_sets()[j]), set_json(structure.minimal_sets()[k])});
    }
    out["conventional_qss_ok"] = violations.empty();
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }
  row("players", structure.universe().to_string());
  row("normal form", structure.to_string());
  std::string pairs;
  for (const auto& [j, k] : violations) {
    pairs += (pairs.empty() ? "" : " ") + std::string("(") + structure.minimal_sets()[j].to_string() + ", " +
             structure.minimal_sets()[k].to_string() + ")";
  }
  row("disjoint pairs", pairs.empty() ? "none" : pairs);
  row("conventional_qss_ok", violations.empty() ? "true" : "false");
  return kExitOk;
}

int cmd_lambda(const RunConfig& config) {
  const AccessStructure structure = load(config);
  const ASGraph graph = build_as_graph(structure);
  PartialLinkClassification best({});
  try {
    best = classify(structure, config);
  } catch (const ResourceLimit& e) {
    std::cerr << "aqss: " << e.what() << "; use --method greedy for an upper bound\n";
    return kExitInput;
  }
  std::vector<PartialLinkClassification> every;
  bool truncated = false;
  if (config.all && config.method == "exact") every = all_min_clique_covers(graph, 1000, truncated, config.vertex_cap);

  if (config.format == "json") {
    nlohmann::json out;
    out["method"] = config.method;
    out["lambda"] = best.size();
    out["components"] = component_count(graph);
    out["classes"] = classes_json(structure, best);
    if (config.all && config.method == "exact") {
      out["all"] = nlohmann::json::array();
      for (const auto& c : every) out["all"].push_back(classes_json(structure, c));
      out["truncated"] = truncated;
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }
  row(config.method == "exact" ? "lambda" : "classes (greedy)", std::to_string(best.size()));
  row("components", std::to_string(component_count(graph)));
  row("classification", classes_text(structure, best));
  if (config.all && config.method == "exact") {
    row("minimum covers", std::to_string(every.size()) + (truncated ? " (truncated)" : ""));
    for (std::size_t i = 0; i < every.size(); ++i) row("  #" + std::to_string(i + 1), classes_text(structure, every[i]));
  }
  return kExitOk;
}

int cmd_build(const RunConfig& config) {
  const AccessStructure structure = load(config);
  const SchemeTree tree = build_scheme(structure, classify(structure, config));
  write_text(config.out, to_json(tree).dump(2) + "\n");
  return kExitOk;
}

std::string power_text(int p, std::size_t exponent) { return std::to_string(p) + "^" + std::to_string(exponent); }

int cmd_simulate(const RunConfig& config) {
  const AccessStructure structure = load(config);
  const VerifyOptions options = verify_options(config);
  const auto classification = classify(structure, config);
  const SchemeTree tree = build_scheme(structure, classification);
  const CodeTree code = compile_scheme(tree, options.and_gates);
  const FieldSpec field = choose_field(tree, options.secret_dim, options.and_gates);
  const auto start = std::chrono::steady_clock::now();
  const EncodedScheme encoded = encode_tree(entangle_with_reference(field), code, field, {}, options.limits);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double norm_error = std::abs(encoded.state.norm() - 1.0);
  const bool ok = norm_error <= options.tolerance;

  if (config.format == "json") {
    nlohmann::json out;
    out["lambda"] = classification.size();
    out["p"] = field.p();
    out["share_qudits"] = code.leaf_owners.size();
    out["environment_qudits"] = code.environment_count;
    out["total_qudits"] = encoded.state.qudit_count();
    out["stored_amplitudes"] = encoded.state.terms().size();
    out["norm_error"] = norm_error;
    out["ok"] = ok;
    nlohmann::json owners = nlohmann::json::object();
    for (const auto& label : encoded.state.labels()) owners[label] = encoded.shares.owner(label).to_string();
    out["owners"] = owners;
    std::cout << out.dump(2) << "\n";
  } else {
    row("lambda", std::to_string(classification.size()));
    row("field", "GF(" + std::to_string(field.p()) + ")");
    row("share qudits", std::to_string(code.leaf_owners.size()));
    row("environment qudits", std::to_string(code.environment_count));
    row("reference qudits", "1");
    row("hilbert dimension", power_text(field.p(), encoded.state.qudit_count()));
    row("stored amplitudes", std::to_string(encoded.state.terms().size()));
    row("norm error", fixed(norm_error));
    std::ostringstream t;
    t << std::fixed << std::setprecision(3) << seconds << " s";
    row("encode time", t.str());
    std::string shares;
    for (const auto& label : encoded.state.labels()) {
      shares += (shares.empty() ? "" : " ") + label + "=" + encoded.shares.owner(label).to_string();
    }
    row("subsystems", shares);
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_verify(const RunConfig& config) {
  const AccessStructure structure = load(config);
  const VerifyOptions options = verify_options(config);
  const auto classification = classify(structure, config);
  const SchemeTree tree = build_scheme(structure, classification);
  const VerificationReport report = verify_scheme(structure, classification, tree, options);
  const std::string json = to_json(report).dump(2) + "\n";
  if (!config.json_out.empty()) write_text(config.json_out, json);
  if (config.format == "json") {
    if (config.json_out != "-") std::cout << json;
  } else if (config.json_out != "-") {
    row("lambda", std::to_string(report.lambda));
    row("resident shares", std::to_string(report.resident_shares));
    row("share qudits", std::to_string(report.qudits));
    row("environment qudits", std::to_string(report.environment_qudits));
    row("field", "GF(" + std::to_string(report.p) + ")");
    row("state", report.full_state ? "full (" + std::to_string(report.stored_amplitudes) + " amplitudes)"
                                   : "pruned per query");
    std::cout << "\nrecoverability (with resident shares)\n";
    for (const auto& e : report.recoverability) {
      row("  " + e.set.to_string(), (e.pass ? "pass" : "FAIL") + std::string("  fidelity ") +
                                        (e.fidelity ? fixed(*e.fidelity) : std::string("-")) + "  distance " +
                                        fixed(e.decoupling_distance));
    }
    std::cout << "privacy (maximal unauthorized sets)\n";
    for (const auto& e : report.privacy) {
      row("  " + e.set.to_string(), (e.pass ? "pass" : "FAIL") + std::string("  distance ") + fixed(e.trace_distance));
    }
    if (!report.importance.empty()) std::cout << "importance\n";
    for (const auto& e : report.importance) {
      row("  resident#" + std::to_string(e.resident),
          (e.pass ? "pass" : "FAIL") + std::string("  witness ") + (e.witness ? e.witness->to_string() : "-"));
    }
    if (!report.no_cloning.empty()) std::cout << "no-cloning pairs\n";
    for (const auto& e : report.no_cloning) {
      row("  " + e.first.to_string() + " / " + e.second.to_string(), e.pass ? "pass" : "FAIL");
    }
    std::cout << "\n";
    row("verdicts agree", report.verdicts_agree ? "true" : "false");
    row("overall", report.overall ? "pass" : "FAIL");
  }
  return report.overall ? kExitOk : kExitVerifyFailed;
}

int cmd_render(const RunConfig& config) {
  if (config.dot_format != "dot") throw InputError("only --format dot is supported");
  const AccessStructure structure = load(config);
  if (config.what == "as-graph") {
    std::cout << render_dot(build_as_graph(structure), as_graph_labels(structure));
  } else {
    std::cout << render_dot(build_scheme(structure, classify(structure, config)));
  }
  return kExitOk;
}

int cmd_embedding(const RunConfig& config) {
  const TrivialEmbeddingAnalysis a = analyze_trivial_embedding(load(config));
  if (config.format == "json") {
    nlohmann::json out;
    out["r"] = a.r;
    out["x"] = a.x;
    out["naive_count"] = a.naive_count;
    out["better_count"] = a.better_count;
    out["theorem_count"] = a.theorem_count;
    out["dealer_player"] = a.dealer_player.label();
    out["augmented"] = a.augmented.to_string();
    out["completion"] = a.completion.to_string();
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }
  row("augmented", a.augmented.to_string());
  row("completion", a.completion.to_string());
  row("r", std::to_string(a.r));
  row("x", std::to_string(a.x));
  row("naive r+(r-1)x", std::to_string(a.naive_count));
  row("one per set", std::to_string(a.better_count));
  row("lambda-1", std::to_string(a.theorem_count));
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kUnsupported:
      return kExitUnsupported;
    case ErrorKind::kResource:
      return kExitResource;
    case ErrorKind::kInput:
    case ErrorKind::kInsufficientShares:
      return kExitInput;
  }
  return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Assisted quantum secret sharing: analyze, build, simulate and verify"};
  app.require_subcommand(1);
  RunConfig config;

  auto add_input = [&config](CLI::App* cmd) {
    cmd->add_option("input", config.input, "Access structure file (DSL or JSON), '-' for stdin");
    cmd->add_option("--expr", config.expr, "Inline access structure, e.g. 'structure: ABC, BD, EFG'");
  };
  auto add_method = [&config](CLI::App* cmd) {
    cmd->add_option("--method", config.method, "Clique cover method")->check(CLI::IsMember({"exact", "greedy"}));
    cmd->add_option("--vertex-cap", config.vertex_cap, "Largest AS graph the exact solver accepts");
  };
  auto add_format = [&config](CLI::App* cmd) {
    cmd->add_option("--format", config.format, "Output format")->check(CLI::IsMember({"human", "json"}));
  };
  auto add_simulation = [&config](CLI::App* cmd) {
    cmd->add_option("--tolerance", config.tolerance, "Pass/fail tolerance, in (0, 1e-3]");
    cmd->add_option("--max-amplitudes", config.max_amplitudes,
                    "Cap on stored amplitudes (overrides AQSS_MAX_AMPLITUDES; default 2^24)");
    cmd->add_option("--and-gates", config.and_gates, "Realization of ((m,m)) layers")
        ->check(CLI::IsMember({"cascade", "additive"}));
  };

  auto* check = app.add_subcommand("check", "Normal form and no-cloning overlap check");
  add_input(check);
  add_format(check);

  auto* lambda_cmd = app.add_subcommand("lambda", "Minimum partial link classification");
  add_input(lambda_cmd);
  add_method(lambda_cmd);
  add_format(lambda_cmd);
  lambda_cmd->add_flag("--all", config.all, "List every minimum classification (up to 1000)");

  auto* build = app.add_subcommand("build", "Emit the scheme tree as JSON");
  add_input(build);
  add_method(build);
  build->add_option("--out", config.out, "Output file (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Encode a reference-entangled secret and summarize the state");
  add_input(simulate);
  add_method(simulate);
  add_format(simulate);
  add_simulation(simulate);

  auto* verify = app.add_subcommand("verify", "Verify recoverability, privacy and resident-share importance");
  add_input(verify);
  add_format(verify);
  add_simulation(verify);
  verify->add_option("--json", config.json_out, "Write the report JSON to this file ('-' for stdout)");

  auto* render = app.add_subcommand("render", "Emit DOT for the AS graph or the scheme tree");
  add_input(render);
  add_method(render);
  render->add_option("--what", config.what, "What to draw")->check(CLI::IsMember({"as-graph", "scheme"}));
  render->add_option("--format", config.dot_format, "Output format")->check(CLI::IsMember({"dot"}));

  auto* embedding = app.add_subcommand("embedding", "Resident-share counts of the common-player embedding");
  add_input(embedding);
  add_format(embedding);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*check) return cmd_check(config);
    if (*lambda_cmd) return cmd_lambda(config);
    if (*build) return cmd_build(config);
    if (*simulate) return cmd_simulate(config);
    if (*verify) return cmd_verify(config);
    if (*render) return cmd_render(config);
    if (*embedding) return cmd_embedding(config);
  } catch (const Error& e) {
    std::cerr << "aqss: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "aqss: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
