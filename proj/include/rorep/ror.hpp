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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rorep/linear_program.hpp"
#include "rorep/problem.hpp"
#include "rorep/value_function.hpp"

namespace rorep {

// Margins at or below this value count as "no strict improvement".
inline constexpr double kNecessityThreshold = 1e-9;

// Ordered pair of alternative indices.
using AlternativePair = std::pair<int, int>;

// Marginal-value variables of one value function embedded in an LP.
class MarginalBlock {
 public:
  MarginalBlock() = default;

  // Declares one nonnegative variable per (criterion, characteristic point),
  // named "<prefix>u<i>_<k>".
  MarginalBlock(lp::LinearProgram& lp, const Problem& p, const std::string& prefix);

  [[nodiscard]] int var(int criterion, int level) const {
    return vars_[static_cast<std::size_t>(criterion)][static_cast<std::size_t>(level)];
  }

  // Terms of U(a) - U(b); identical marginals cancel.
  [[nodiscard]] std::vector<lp::Term> difference(const Problem& p, int a, int b) const;

  [[nodiscard]] ValueFunction extract(const std::vector<double>& values, std::string label) const;

 private:
  std::vector<std::vector<int>> vars_;
};

// Right-hand side of a strict comparison: either the margin variable or a
// fixed constant.
struct Margin {
  int var = -1;
  double constant = 0.0;

  static Margin variable(int v) { return Margin{v, 0.0}; }
  static Margin fixed(double c) { return Margin{-1, c}; }
};

struct StructuralCounts {
  int monotonicity = 0;
  int zero_at_alpha = 0;
  int normalization = 0;
};

// Monotonicity between adjacent points, u_i(alpha_i) = 0 and
// sum_i u_i(beta_i) = 1.
StructuralCounts add_structural_constraints(lp::LinearProgram& lp, const Problem& p,
                                            const MarginalBlock& block, const std::string& prefix);

// U(a) - U(b) >= margin  (+ optional extra terms, e.g. big-M relaxations).
int add_strict_constraint(lp::LinearProgram& lp, const Problem& p, const MarginalBlock& block,
                          int a, int b, const Margin& margin, const std::string& name,
                          const std::vector<lp::Term>& extra = {});

// One constraint per statement: strict ones through add_strict_constraint,
// indifference as U(a) - U(b) = 0.
int add_statement_constraints(lp::LinearProgram& lp, const Problem& p, const MarginalBlock& block,
                              const std::vector<PreferenceStatement>& statements,
                              const Margin& margin, const std::string& prefix);

// Constraints every compatible value function satisfies, with the strict
// margin left as the variable `epsilon` (bounded above by 1, the largest
// possible difference of two evaluations).
struct ConstraintSystem {
  Problem problem;
  std::vector<PreferenceStatement> statements;
  lp::LinearProgram lp;
  MarginalBlock block;
  int epsilon = -1;
  StructuralCounts structural;
  int num_preference = 0;
};

// Throws UnknownAlternative / ProblemError for invalid statements.
ConstraintSystem base_system(const Problem& p, const std::vector<PreferenceStatement>& statements);

// Largest epsilon for which the system is feasible, with a maximising
// function. Throws IncompatiblePreferences when the system is infeasible or
// the largest margin does not exceed kNecessityThreshold.
struct CompatibilityResult {
  double margin = 0.0;
  ValueFunction witness;
};
CompatibilityResult check_compatibility(const ConstraintSystem& sys);

// No compatible function gives b a strictly larger value than a.
bool is_necessarily_preferred(const ConstraintSystem& sys, int a, int b);
bool is_necessarily_preferred(const ConstraintSystem& sys, std::string_view a, std::string_view b);

// Some compatible function gives a at least the value of b.
bool is_possibly_preferred(const ConstraintSystem& sys, int a, int b);
bool is_possibly_preferred(const ConstraintSystem& sys, std::string_view a, std::string_view b);

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct RelationBundle {
  BoolMatrix necessary;
  BoolMatrix strict;
  BoolMatrix incomparable;
  std::vector<AlternativePair> d_pairs;  // row-major order

  [[nodiscard]] std::vector<AlternativePair> strict_pairs() const;
  [[nodiscard]] int size() const { return static_cast<int>(necessary.rows()); }

  friend bool operator==(const RelationBundle& a, const RelationBundle& b) {
    return (a.necessary == b.necessary).all() && (a.strict == b.strict).all() &&
           (a.incomparable == b.incomparable).all() && a.d_pairs == b.d_pairs;
  }
};

// Derives strict, incomparable and D from a necessary-preference matrix.
RelationBundle derive_relations(BoolMatrix necessary);

// Runs the compatibility check, then one necessity LP per ordered pair of
// distinct alternatives, fanned out over `jobs` threads. Results do not
// depend on `jobs`.
RelationBundle compute_relations(const ConstraintSystem& sys, int jobs = 1);
RelationBundle compute_relations(const Problem& p,
                                 const std::vector<PreferenceStatement>& statements,
                                 int jobs = 1);

}  // namespace rorep
