// Copyright 2026 The stochmatch Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STOCHMATCH_ERRORS_H_
#define STOCHMATCH_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace stochmatch {

// Malformed input file. `where` names the field path or line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// Structurally readable input that violates model invariants. Carries every
// violation found, not just the first.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> errors)
      : std::runtime_error(Join(errors)), errors_(std::move(errors)) {}
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  static std::string Join(const std::vector<std::string>& errors) {
    std::string out = "invalid instance";
    for (const std::string& e : errors) out += "; " + e;
    return out;
  }
  std::vector<std::string> errors_;
};

}  // namespace stochmatch

#endif  // STOCHMATCH_ERRORS_H_
