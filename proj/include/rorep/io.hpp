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

#include <string>
#include <string_view>
#include <vector>

#include "rorep/problem.hpp"

namespace rorep::io {

// Performance table in CSV:
//
//   alternative,g1,g2,...
//   direction,gain,cost,...      (optional; every criterion cell gain|cost)
//   a1,6.92,7.14,...
//
// Lines starting with '#' before the header are comments. Fields may be
// quoted RFC-4180 style. Scores are dot-decimal only. Errors
// are ParseError with 1-based line and field positions.
RawTable parse_performance_csv(std::string_view text);

// The same table as JSON:
//   {"alternatives": [...], "criteria": [{"id": "g1", "direction": "gain"}, ...],
//    "scores": [[...], ...]}
// "direction" is optional per criterion.
RawTable parse_table_json(std::string_view text);
std::string table_to_json(const RawTable& table);

// CSV or JSON, chosen by the first non-blank character.
RawTable parse_table(std::string_view text);

// One statement per line, `a > b` or `a = b`; `#` starts a comment. Ids are
// not checked here (see validate_statements).
std::vector<PreferenceStatement> parse_preferences(std::string_view text);

// A single statement, e.g. "a4 > a5".
PreferenceStatement parse_statement(std::string_view text);

// Reads a whole file; throws std::runtime_error naming the path on failure.
std::string read_file(const std::string& path);

}  // namespace rorep::io
