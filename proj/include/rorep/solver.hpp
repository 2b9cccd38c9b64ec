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
#include <vector>

#include "rorep/linear_program.hpp"

namespace rorep::lp {

// Tolerances shared by the LP and MILP layers.
inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kIntegralityTolerance = 1e-6;
inline constexpr double kObjectiveTolerance = 1e-8;

// Raised when a model exceeds the binary-count guard of solve_milp.
class GuardError : public ModelError {
 public:
  using ModelError::ModelError;
};

// Bounded-variable primal simplex (Dantzig pricing, Bland's rule once a run
// of degenerate pivots is detected) over a dense tableau.
SolveResult solve_lp(const LinearProgram& lp);

struct MilpOptions {
  // Upper limit on the number of binaries accepted by solve_milp.
  int max_binaries = 64;
  // Abort with std::runtime_error after this many branch-and-bound nodes.
  std::int64_t node_limit = 5'000'000;
};

// LP-based branch and bound over the binaries of `mip`: best-bound node
// selection, branching on the most fractional binary (lowest index on ties),
// child LPs re-optimised with the dual simplex from the parent basis.
// Incumbents are polished by re-solving the LP with every binary fixed to
// its rounded value, so returned assignments are exactly integral.
SolveResult solve_milp(const MixedIntegerProgram& mip, const MilpOptions& options = {});

}  // namespace rorep::lp
