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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rorep/problem.hpp"

namespace rorep {

inline constexpr double kValueFunctionTolerance = 1e-7;

// Additive value function U(a) = sum_i u_i(g_i(a)) given by its marginal
// values at the characteristic points of each criterion.
struct ValueFunction {
  std::string label;
  std::vector<Eigen::VectorXd> marginals;  // [criterion](point index)

  [[nodiscard]] double marginal(int criterion, int level) const {
    return marginals[static_cast<std::size_t>(criterion)](level);
  }

  friend bool operator==(const ValueFunction& a, const ValueFunction& b) {
    if (a.label != b.label || a.marginals.size() != b.marginals.size()) return false;
    for (std::size_t i = 0; i < a.marginals.size(); ++i) {
      if (a.marginals[i].size() != b.marginals[i].size() || a.marginals[i] != b.marginals[i]) {
        return false;
      }
    }
    return true;
  }
};

// U(a). Throws UnknownAlternative.
double evaluate(const ValueFunction& f, const Problem& p, std::string_view alternative);
double evaluate(const ValueFunction& f, const Problem& p, int alternative);

// U evaluated at an arbitrary gain-oriented score vector. Throws ProblemError
// when a score is not a characteristic point of its criterion.
double evaluate_scores(const ValueFunction& f, const Problem& p,
                       const Eigen::Ref<const Eigen::VectorXd>& scores);

// U for every alternative.
Eigen::VectorXd evaluate_all(const ValueFunction& f, const Problem& p);

// Describes the first violated invariant (shape, monotonicity, zero at alpha,
// unit normalisation), or nullopt when `f` is a well-formed value function.
std::optional<std::string> check_value_function(const ValueFunction& f, const Problem& p,
                                                double tol = kValueFunctionTolerance);

}  // namespace rorep
