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

#ifndef AQSS_ERROR_HPP_
#define AQSS_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace aqss {

// Failure categories. The CLI maps each one to a process exit code.
enum class ErrorKind {
  kInput,               // malformed or inconsistent input (exit 1)
  kUnsupported,         // structure outside what the builder can realize (exit 3)
  kResource,            // amplitude / vertex / universe caps (exit 4)
  kInsufficientShares,  // reconstruction attempted without enough shares
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::kInput, what) {}
};

// Syntax error in the access-structure DSL; line and column are 1-based.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : InputError(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnsupportedStructure : public Error {
 public:
  explicit UnsupportedStructure(const std::string& what) : Error(ErrorKind::kUnsupported, what) {}
};

class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what) : Error(ErrorKind::kResource, what) {}
};

class InsufficientShares : public Error {
 public:
  InsufficientShares(std::string node_path, const std::string& what)
      : Error(ErrorKind::kInsufficientShares, what), node_path_(std::move(node_path)) {}
  // Tree path ("root", "root/0/2", ...) of the first node that could not be decoded.
  const std::string& node_path() const noexcept { return node_path_; }

 private:
  std::string node_path_;
};

}  // namespace aqss

#endif  // AQSS_ERROR_HPP_
