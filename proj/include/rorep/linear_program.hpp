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
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rorep::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Thrown for structurally invalid models: undeclared variables, non-finite
// coefficients, inverted bounds. Never used to signal infeasibility.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Relation : std::uint8_t { kLessEqual, kEqual, kGreaterEqual };
enum class Sense : std::uint8_t { kMinimize, kMaximize };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
};

struct Term {
  int var = -1;
  double coef = 0.0;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

struct Objective {
  std::vector<Term> terms;
  Sense sense = Sense::kMinimize;
  double offset = 0.0;
};

// A linear program over named, bounded variables. Variables are addressed by
// the dense index returned from add_variable; names are kept for diagnostics
// and the textual dump.
class LinearProgram {
 public:
  int add_variable(std::string name, double lower, double upper);
  int add_constraint(std::vector<Term> terms, Relation relation, double rhs,
                     std::string name = {});
  void set_objective(std::vector<Term> terms, Sense sense, double offset = 0.0);

  // Name lookup; throws ModelError for undeclared names.
  [[nodiscard]] int variable_index(std::string_view name) const;

  [[nodiscard]] int num_variables() const { return static_cast<int>(variables_.size()); }
  [[nodiscard]] int num_constraints() const { return static_cast<int>(constraints_.size()); }
  [[nodiscard]] const std::vector<Variable>& variables() const { return variables_; }
  [[nodiscard]] const std::vector<Constraint>& constraints() const { return constraints_; }
  [[nodiscard]] const Objective& objective() const { return objective_; }

  void set_bounds(int var, double lower, double upper);

  // Throws ModelError when a term references an undeclared variable, a
  // coefficient or rhs is not finite, or a bound pair is inverted.
  void validate() const;

  // Objective value of an assignment (offset included).
  [[nodiscard]] double objective_value(const std::vector<double>& values) const;

  // Largest violation of any constraint or bound by the assignment.
  [[nodiscard]] double max_violation(const std::vector<double>& values) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  Objective objective_;
  std::unordered_map<std::string, int> index_by_name_;
};

struct MixedIntegerProgram {
  LinearProgram base;
  std::vector<int> binaries;

  // Declares a [0,1] variable and records it as binary.
  int add_binary(std::string name);

  void validate() const;
};

enum class SolveStatus : std::uint8_t { kOptimal, kInfeasible, kUnbounded };

std::string_view to_string(SolveStatus status);

struct SolveStats {
  std::int64_t simplex_iterations = 0;
  std::int64_t nodes = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> values;
  SolveStats stats;

  [[nodiscard]] bool optimal() const { return status == SolveStatus::kOptimal; }
};

// Writes the model in CPLEX LP text format. Layout:
//   \ <comment>
//   Maximize|Minimize
//    obj: <terms>
//   Subject To
//    <name>: <terms> <=|=|>= <rhs>
//   Bounds
//    <lower> <= <var> <= <upper>   (or "<var> free")
//   Binaries
//    <var> ...
//   End
std::string to_lp_format(const LinearProgram& lp, std::string_view comment = {});
std::string to_lp_format(const MixedIntegerProgram& mip, std::string_view comment = {});

}  // namespace rorep::lp
