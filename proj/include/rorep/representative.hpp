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

#include <map>
#include <string>
#include <vector>

#include "rorep/ror.hpp"
#include "rorep/solver.hpp"

namespace rorep {

// eps_fixed is the fixed strict margin of the covering problems; big_m
// deactivates a relaxed comparison. Evaluations live in [0,1], so any
// big_m > 1 + eps_fixed is a valid big-M.
struct RepresentativeParams {
  double eps_fixed = 1e-4;
  double big_m = 10.0;
  lp::MilpOptions milp;

  // Throws ProblemError unless eps_fixed > 0 and big_m > 1 + eps_fixed.
  void validate() const;
};

// One covering step: a compatible function that reproduces every strict
// necessary pair and ranks as many pairs of `d` as possible.
struct CoveringStep {
  ValueFunction function;
  std::vector<AlternativePair> covered;  // subset of d, in d's order
};

// The covering MILP: one compatible copy, a binary per pair of `d` that
// relaxes its comparison by big_m, minimising the number of relaxed pairs.
lp::MixedIntegerProgram build_pd(const ConstraintSystem& sys,
                                 const std::vector<AlternativePair>& strict,
                                 const std::vector<AlternativePair>& d,
                                 const RepresentativeParams& params);

CoveringStep solve_pd(const ConstraintSystem& sys, const std::vector<AlternativePair>& strict,
                      const std::vector<AlternativePair>& d, const RepresentativeParams& params,
                      std::string label = "U1");

struct SufficientSet {
  std::vector<ValueFunction> functions;
  std::vector<std::vector<AlternativePair>> covered;  // per function
  std::vector<int> remaining;  // |D| before each step, then 0

  [[nodiscard]] int r() const { return static_cast<int>(functions.size()); }
};

// Repeats solve_pd on the still-uncovered part of D until it is empty. With
// D empty it returns the single max-margin compatible function.
SufficientSet procedure1(const ConstraintSystem& sys, const RelationBundle& relations,
                         const RepresentativeParams& params);

struct MinimalityResult {
  int r = 0;
  int z_star = 0;
  int t = 0;
  std::vector<ValueFunction> witnesses;  // the t functions kept by the optimum
};

// The minimality MILP over r copies: binaries rho_s (copy removed) and
// gamma^s_ab (pair relaxed in copy s), maximising sum rho_s.
lp::MixedIntegerProgram build_p1(const ConstraintSystem& sys, const RelationBundle& relations,
                                 int r, const RepresentativeParams& params);

// The discriminant MILP over t copies sharing the margin eps in [0, 1].
lp::MixedIntegerProgram build_p2(const ConstraintSystem& sys, const RelationBundle& relations,
                                 int t, const RepresentativeParams& params);

// Optimum of build_p1. Copies only interact through D, so the optimum is
// found by assigning every pair of D to one copy and checking each copy with
// its own LP, for 1, 2, ... copies. `start` (empty or r functions known to
// cover D, e.g. the output of procedure1) stands in for the r-copy search.
MinimalityResult solve_p1(const ConstraintSystem& sys, const RelationBundle& relations, int r,
                          const RepresentativeParams& params,
                          const std::vector<ValueFunction>& start = {});

struct DiscriminantSet {
  std::vector<ValueFunction> functions;
  double epsilon_star = 0.0;
  // Every pair of D and of the strict necessary relation, mapped to the
  // indices of the functions ranking it with margin >= epsilon_star.
  std::map<AlternativePair, std::vector<int>> coverage;
};

// Optimum of build_p2, by branch and bound over the same pair assignments
// with per-copy LP bounds. Each returned function ranks its pairs with margin
// at least epsilon_star.
DiscriminantSet solve_p2(const ConstraintSystem& sys, const RelationBundle& relations, int t,
                         const RepresentativeParams& params);

// Margin slack used when deciding coverage from solver output.
inline constexpr double kCoverageTolerance = 1e-7;

// Builds the coverage map of `functions` at margin `epsilon`.
std::map<AlternativePair, std::vector<int>> coverage_map(
    const Problem& p, const RelationBundle& relations,
    const std::vector<ValueFunction>& functions, double epsilon);

struct CriterionContribution {
  std::string criterion;
  double score_a = 0.0;  // raw orientation (cost criteria shown un-negated)
  double score_b = 0.0;
  double value_a = 0.0;
  double value_b = 0.0;
  [[nodiscard]] double gap() const { return value_a - value_b; }
};

struct Explanation {
  std::string a;
  std::string b;
  int function_index = 0;
  std::string function_label;
  double margin = 0.0;
  std::vector<CriterionContribution> criteria;
  std::vector<CriterionContribution> differing;  // |gap| > 1e-9
};

// Picks the function with the largest U(a) - U(b) (lowest index on ties).
// Throws NoCoveringFunction when no function has U(a) > U(b) + 1e-9.
Explanation explain_pair(const std::vector<ValueFunction>& functions, const Problem& p,
                         std::string_view a, std::string_view b);
Explanation explain_pair(const DiscriminantSet& ds, const Problem& p, std::string_view a,
                         std::string_view b);

// Full pipeline: relations, Procedure 1, minimal count, most discriminant set.
struct Analysis {
  RelationBundle relations;
  SufficientSet sufficient;
  MinimalityResult minimality;
  DiscriminantSet discriminant;
};

Analysis analyze(const ConstraintSystem& sys, const RepresentativeParams& params, int jobs = 1);
Analysis analyze(const ConstraintSystem& sys, const RelationBundle& relations,
                 const RepresentativeParams& params);

}  // namespace rorep
