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

#ifndef AQSS_PARSER_HPP_
#define AQSS_PARSER_HPP_

#include <string>
#include <string_view>

#include "aqss/access_structure.hpp"

namespace aqss {

// Parses an access structure document. A document whose first significant
// character is '{' is read as JSON:
//
//   {"players": ["A", ...], "structure": [["A", "B"], ...]}
//
// and anything else as the line-oriented DSL:
//
//   # comment
//   players: alice bob carol        (optional)
//   structure: alice bob, bob carol
//
// Without a players line, a structure whose tokens are all uppercase letters is
// read in compact mode ("ABC" is {A,B,C}). Throws ParseError (with line and
// column) on malformed text and InputError on semantic problems.
AccessStructure parse_access_structure(std::string_view text);

// DSL text that parses back to `structure` (declared mode unless every label
// is a single uppercase letter).
std::string format_access_structure(const AccessStructure& structure);

}  // namespace aqss

#endif  // AQSS_PARSER_HPP_
