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

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rorep/errors.hpp"

namespace rorep {

enum class Direction : std::uint8_t { kGain, kCost };

std::string_view to_string(Direction d);

// One evaluation criterion in gain orientation. Cost criteria are negated at
// ingestion; `direction` only records that for display.
struct Criterion {
  std::string id;
  Direction direction = Direction::kGain;
  double alpha = 0.0;           // worst considered value
  double beta = 0.0;            // best considered value
  std::vector<double> points;   // strictly ascending characteristic values

  // Index of `value` in points, or nullopt when it is not a characteristic
  // point. Exact comparison: points are copied from the table verbatim.
  [[nodiscard]] std::optional<int> point_index(double value) const;

  friend bool operator==(const Criterion&, const Criterion&) = default;
};

// Alternative-by-criterion table as read from a file, before orientation.
struct RawTable {
  std::vector<std::string> alternatives;
  std::vector<std::string> criteria;
  std::vector<Direction> directions;  // empty means all gain
  Eigen::MatrixXd scores;             // row per alternative
};

// Optional per-criterion widening of the considered scale, in the units of
// the raw table. Values must not lie inside the observed range.
struct ScaleOverride {
  std::optional<double> worst;
  std::optional<double> best;
};

class Problem {
 public:
  Problem() = default;

  [[nodiscard]] int num_alternatives() const { return static_cast<int>(alternatives_.size()); }
  [[nodiscard]] int num_criteria() const { return static_cast<int>(criteria_.size()); }
  [[nodiscard]] const std::vector<std::string>& alternatives() const { return alternatives_; }
  [[nodiscard]] const std::vector<Criterion>& criteria() const { return criteria_; }
  [[nodiscard]] const Criterion& criterion(int i) const {
    return criteria_[static_cast<std::size_t>(i)];
  }

  // Gain-oriented performance matrix, row per alternative.
  [[nodiscard]] const Eigen::MatrixXd& performance() const { return performance_; }
  [[nodiscard]] double score(int alternative, int criterion) const {
    return performance_(alternative, criterion);
  }
  // Characteristic-point index of g_i(a).
  [[nodiscard]] int level(int alternative, int criterion) const {
    return levels_(alternative, criterion);
  }

  // Throws UnknownAlternative.
  [[nodiscard]] int index_of(std::string_view id) const;
  [[nodiscard]] bool contains(std::string_view id) const;

  friend bool operator==(const Problem& a, const Problem& b) {
    return a.alternatives_ == b.alternatives_ && a.criteria_ == b.criteria_ &&
           a.performance_ == b.performance_;
  }

 private:
  friend Problem build_problem(const RawTable&, const std::map<std::string, ScaleOverride>&);

  std::vector<std::string> alternatives_;
  std::vector<Criterion> criteria_;
  Eigen::MatrixXd performance_;
  Eigen::MatrixXi levels_;
  std::unordered_map<std::string, int> index_;
};

// Validates the table, orients cost criteria and derives characteristic
// points (the distinct observed values, plus alpha/beta when overridden).
// Throws ProblemError.
Problem build_problem(const RawTable& table,
                      const std::map<std::string, ScaleOverride>& overrides = {});

// Weak dominance in gain orientation: g_i(a) >= g_i(b) for every criterion.
bool dominates(const Problem& p, std::string_view a, std::string_view b);
bool dominates(const Problem& p, int a, int b);

struct PreferenceStatement {
  enum class Kind : std::uint8_t { kStrict, kIndifference };
  Kind kind = Kind::kStrict;
  std::string a;
  std::string b;

  friend bool operator==(const PreferenceStatement&, const PreferenceStatement&) = default;
};

std::string to_string(const PreferenceStatement& s);

// Throws ProblemError / UnknownAlternative when a statement is malformed for
// `p` (unknown id, strict self-preference).
void validate_statements(const Problem& p, const std::vector<PreferenceStatement>& statements);

}  // namespace rorep
