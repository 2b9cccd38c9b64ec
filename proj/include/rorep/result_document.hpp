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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rorep/representative.hpp"

namespace rorep {

inline constexpr std::string_view kToolName = "rorep";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Everything a run produced, in plain data: ids instead of indices and
// scores in the orientation of the input table (cost criteria un-negated).
// The JSON field names are a fixed contract, documented in the README.
struct ResultDocument {
  struct CriterionEcho {
    std::string id;
    Direction direction = Direction::kGain;
    double alpha = 0.0;            // worst considered value
    double beta = 0.0;             // best considered value
    std::vector<double> points;    // worst to best
    friend bool operator==(const CriterionEcho&, const CriterionEcho&) = default;
  };

  using IdPair = std::pair<std::string, std::string>;

  struct Relations {
    // Cell codes: necessary "N"/"", strict "S"/"", incomparable "I"/"".
    std::vector<std::vector<std::string>> necessary;
    std::vector<std::vector<std::string>> strict;
    std::vector<std::vector<std::string>> incomparable;
    std::vector<IdPair> d_pairs;
    friend bool operator==(const Relations&, const Relations&) = default;
  };

  struct Sufficient {
    int r = 0;
    std::vector<int> iteration_log;  // |D| before each step, then 0
    std::vector<std::string> labels;
    std::vector<std::vector<IdPair>> covered;
    friend bool operator==(const Sufficient&, const Sufficient&) = default;
  };

  struct Minimality {
    int r = 0;
    int t = 0;
    int z_star = 0;
    std::vector<std::string> witness_labels;
    friend bool operator==(const Minimality&, const Minimality&) = default;
  };

  struct FunctionTable {
    std::string label;
    // [criterion] -> (characteristic value, marginal value), worst to best.
    std::vector<std::vector<std::pair<double, double>>> marginals;
    std::vector<double> values;  // U per alternative
    friend bool operator==(const FunctionTable&, const FunctionTable&) = default;
  };

  struct CoverageEntry {
    std::string a;
    std::string b;
    std::string kind;  // "strict" or "incomparable"
    std::vector<std::string> functions;
    friend bool operator==(const CoverageEntry&, const CoverageEntry&) = default;
  };

  struct Discriminant {
    double epsilon_star = 0.0;
    std::vector<FunctionTable> functions;
    std::vector<CoverageEntry> coverage;
    friend bool operator==(const Discriminant&, const Discriminant&) = default;
  };

  struct Provenance {
    std::string tool{kToolName};
    std::string version{kToolVersion};
    double eps_fixed = 1e-4;
    double big_m = 10.0;
    friend bool operator==(const Provenance&, const Provenance&) = default;
  };

  std::vector<std::string> alternatives;
  std::vector<CriterionEcho> criteria;
  std::vector<std::vector<double>> scores;
  std::vector<std::string> statements;
  std::optional<Relations> relations;
  std::optional<Sufficient> sufficient;
  std::optional<Minimality> minimality;
  std::optional<Discriminant> discriminant;
  Provenance provenance;

  friend bool operator==(const ResultDocument&, const ResultDocument&) = default;
};

ResultDocument make_document(const Problem& p, const std::vector<PreferenceStatement>& statements,
                             const RepresentativeParams& params);
void add_relations(ResultDocument& doc, const Problem& p, const RelationBundle& relations);
void add_analysis(ResultDocument& doc, const Problem& p, const Analysis& analysis);

// Marginal table of one function, raw orientation.
ResultDocument::FunctionTable function_table(const ValueFunction& f, const Problem& p);

enum class Format : std::uint8_t { kJson, kMarkdown };

// Throws ProblemError for an unknown name.
Format parse_format(std::string_view name);

std::string serialize_results(const ResultDocument& doc, Format format);

// Inverse of the JSON encoding. Throws ParseError.
ResultDocument parse_result_json(std::string_view text);

std::string serialize_explanation(const Explanation& e, Format format);

}  // namespace rorep
