// Copyright 2026 The rorep Authors
//
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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rorep {

struct PreferenceStatement;

// Invalid input data: ragged tables, duplicate ids, non-finite scores.
class ProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownAlternative : public ProblemError {
 public:
  explicit UnknownAlternative(const std::string& id)
      : ProblemError("unknown alternative '" + id + "'"), id_(id) {}
  [[nodiscard]] const std::string& id() const { return id_; }

 private:
  std::string id_;
};

// No compatible value function strictly satisfies the statements.
class IncompatiblePreferences : public std::runtime_error {
 public:
  explicit IncompatiblePreferences(std::vector<PreferenceStatement> statements);
  [[nodiscard]] const std::vector<PreferenceStatement>& statements() const {
    return statements_;
  }

 private:
  std::vector<PreferenceStatement> statements_;
};

// explain_pair found no representative function ranking a above b.
class NoCoveringFunction : public std::runtime_error {
 public:
  NoCoveringFunction(const std::string& a, const std::string& b)
      : std::runtime_error("no covering function ranks '" + a + "' above '" + b + "'") {}
};

// A solver outcome that the surrounding theory rules out.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Parse failure with a 1-based source position (column 0 when the whole
// line is at fault).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error(format(message, line, column)), line_(line), column_(column) {}
  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] int column() const { return column_; }

 private:
  static std::string format(const std::string& message, int line, int column) {
    std::string where = "line " + std::to_string(line);
    if (column > 0) where += ", column " + std::to_string(column);
    return where + ": " + message;
  }
  int line_;
  int column_;
};

}  // namespace rorep
