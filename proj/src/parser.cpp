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

#include "aqss/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <vector>

#include "aqss/error.hpp"
#include "json.hpp"

namespace aqss {
namespace {

struct Token {
  std::string text;
  std::size_t line;
  std::size_t column;
};

// One comma-separated group of tokens on the structure line.
struct RawSet {
  std::vector<Token> tokens;
  std::size_t line;
  std::size_t column;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

bool is_compact_token(const std::string& t) {
  return std::all_of(t.begin(), t.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

class DslParser {
 public:
  explicit DslParser(std::string_view text) : text_(text) {}

  AccessStructure parse() {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text_.size()) {
      std::size_t end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      ++line_no;
      parse_line(text_.substr(start, end - start), line_no);
      start = end + 1;
    }
    if (!structure_) {
      throw ParseError(line_no, 1, "missing 'structure:' line");
    }
    return build();
  }

 private:
  void parse_line(std::string_view line, std::size_t line_no) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t pos = 0;
    while (pos < line.size() && is_space(line[pos])) ++pos;
    if (pos == line.size()) return;

    auto keyword = [&](std::string_view kw) { return line.substr(pos, kw.size()) == kw; };
    if (keyword("players:")) {
      if (players_) throw ParseError(line_no, pos + 1, "duplicate 'players:' line");
      if (structure_) throw ParseError(line_no, pos + 1, "'players:' must precede 'structure:'");
      players_ = tokens(line, pos + 8, line_no);
      if (players_->empty()) throw ParseError(line_no, pos + 9, "'players:' declares no players");
      return;
    }
    if (keyword("structure:")) {
      if (structure_) throw ParseError(line_no, pos + 1, "duplicate 'structure:' line");
      structure_ = sets(line, pos + 10, line_no);
      return;
    }
    throw ParseError(line_no, pos + 1, "expected 'players:' or 'structure:'");
  }

  static std::vector<Token> tokens(std::string_view line, std::size_t pos, std::size_t line_no) {
    std::vector<Token> out;
    while (pos < line.size()) {
      if (is_space(line[pos])) {
        ++pos;
        continue;
      }
      std::size_t begin = pos;
      while (pos < line.size() && !is_space(line[pos])) {
        char c = line[pos];
        if (c == ',' || c == '{' || c == '}' || c == ';' || c == ':') {
          throw ParseError(line_no, pos + 1, std::string("unexpected '") + c + "'");
        }
        ++pos;
      }
      out.push_back({std::string(line.substr(begin, pos - begin)), line_no, begin + 1});
    }
    return out;
  }

  static std::vector<RawSet> sets(std::string_view line, std::size_t pos, std::size_t line_no) {
    std::vector<RawSet> out;
    std::size_t begin = pos;
    for (std::size_t i = pos; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        RawSet raw{tokens(line.substr(0, i), begin, line_no), line_no, begin + 1};
        if (raw.tokens.empty()) {
          bool lone = out.empty() && i == line.size();
          throw ParseError(line_no, std::min(i, line.size()) + 1,
                           lone ? "empty structure" : "empty authorized set");
        }
        out.push_back(std::move(raw));
        begin = i + 1;
      }
    }
    return out;
  }

  AccessStructure build() const {
    std::vector<PlayerSet> sets;
    if (players_) {
      std::vector<PlayerId> declared;
      for (const auto& t : *players_) declared.emplace_back(t.text);
      PlayerSet universe(std::move(declared));
      for (const auto& raw : *structure_) {
        std::vector<PlayerId> members;
        for (const auto& t : raw.tokens) {
          PlayerId id(t.text);
          if (!universe.contains(id)) {
            throw ParseError(t.line, t.column, "undeclared player '" + t.text + "'");
          }
          members.push_back(std::move(id));
        }
        sets.emplace_back(std::move(members));
      }
      return AccessStructure(std::move(universe), std::move(sets));
    }

    bool compact = std::all_of(structure_->begin(), structure_->end(), [](const RawSet& raw) {
      return std::all_of(raw.tokens.begin(), raw.tokens.end(), [](const Token& t) { return is_compact_token(t.text); });
    });
    for (const auto& raw : *structure_) {
      std::vector<PlayerId> members;
      for (const auto& t : raw.tokens) {
        if (compact) {
          for (char c : t.text) members.emplace_back(std::string(1, c));
        } else {
          members.emplace_back(t.text);
        }
      }
      sets.emplace_back(std::move(members));
    }
    return reduce_to_minimal(std::move(sets));
  }

  std::string_view text_;
  std::optional<std::vector<Token>> players_;
  std::optional<std::vector<RawSet>> structure_;
};

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

AccessStructure parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(line, column, "invalid JSON");
  }
  if (!doc.is_object() || !doc.contains("structure") || !doc["structure"].is_array()) {
    throw InputError("JSON access structure needs a \"structure\" array");
  }
  auto player_list = [](const nlohmann::json& arr, const char* what) {
    if (!arr.is_array()) throw InputError(std::string(what) + " must be an array of strings");
    std::vector<PlayerId> out;
    for (const auto& v : arr) {
      if (!v.is_string()) throw InputError(std::string(what) + " must be an array of strings");
      out.emplace_back(v.get<std::string>());
    }
    return out;
  };
  std::vector<PlayerSet> sets;
  for (const auto& s : doc["structure"]) sets.emplace_back(player_list(s, "each authorized set"));
  if (sets.empty()) throw InputError("empty structure");
  if (doc.contains("players")) {
    PlayerSet universe(player_list(doc["players"], "\"players\""));
    for (const auto& s : sets) {
      for (const auto& p : s) {
        if (!universe.contains(p)) throw InputError("undeclared player '" + p.label() + "'");
      }
    }
    return AccessStructure(std::move(universe), std::move(sets));
  }
  return reduce_to_minimal(std::move(sets));
}

}  // namespace

AccessStructure parse_access_structure(std::string_view text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json(text);
  return DslParser(text).parse();
}

std::string format_access_structure(const AccessStructure& structure) {
  auto single_upper = [](const PlayerId& p) { return p.label().size() == 1 && is_compact_token(p.label()); };
  const auto& universe = structure.universe().members();
  bool compact = std::all_of(universe.begin(), universe.end(), single_upper);
  std::string out;
  if (!compact || reduce_to_minimal(structure.minimal_sets()).universe() != structure.universe()) {
    out += "players:";
    for (const auto& p : universe) out += " " + p.label();
    out += "\n";
    compact = false;
  }
  out += "structure:";
  const auto& sets = structure.minimal_sets();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    out += i ? ", " : " ";
    if (compact) {
      out += sets[i].to_string();
    } else {
      for (std::size_t j = 0; j < sets[i].size(); ++j) {
        if (j) out += " ";
        out += sets[i].members()[j].label();
      }
    }
  }
  return out + "\n";
}

}  // namespace aqss
