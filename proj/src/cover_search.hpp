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
#include <vector>

#include "rorep/ror.hpp"

namespace rorep::detail {

// Search over assignments of the pairs of D to `copies` value functions.
// Every copy satisfies the compatible system with the strict necessary
// pairs and its assigned pairs at its own margin eps_s (its LP maximum);
// the value of an assignment is min_s eps_s. This is the block structure
// shared by the P1 and P2 models: a copy relaxed on a pair by its binary
// is simply a copy the pair is not assigned to.
struct CoverSearchOptions {
  int copies = 1;
  // Assignments must reach min_s eps_s >= target (up to 1e-9).
  double target = 0.0;
  // false: stop at the first assignment reaching target.
  bool maximize = true;
  std::int64_t node_limit = 5'000'000;
};

struct CoverSearchResult {
  bool found = false;
  double epsilon = 0.0;
  std::vector<ValueFunction> functions;  // one per copy, labels empty
  std::vector<double> margins;           // eps_s per copy
  std::vector<int> owner;                // per pair of d: its copy
  std::int64_t nodes = 0;
};

CoverSearchResult cover_search(const ConstraintSystem& sys,
                               const std::vector<AlternativePair>& strict,
                               const std::vector<AlternativePair>& d,
                               const CoverSearchOptions& options);

}  // namespace rorep::detail
