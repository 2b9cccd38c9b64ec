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


#include <doctest.h>

#include <random>

#include "rorep/ror.hpp"
#include "support/fixtures.hpp"

using namespace rorep;
using rorep::testing::democracy_necessary;
using rorep::testing::democracy_problem;
using rorep::testing::democracy_statements;
using rorep::testing::indifferent;
using rorep::testing::strict;

TEST_CASE("base system constraint counts") {
  const Problem p = democracy_problem();
  const ConstraintSystem sys = base_system(p, democracy_statements());
  int monotone = 0;
  for (const Criterion& c : p.criteria()) monotone += static_cast<int>(c.points.size()) - 1;
  CHECK(sys.structural.monotonicity == monotone);
  CHECK(sys.structural.zero_at_alpha == 5);
  CHECK(sys.structural.normalization == 1);
  CHECK(sys.num_preference == 3);
  CHECK(sys.lp.num_constraints() == monotone + 5 + 1 + 3);

  const ConstraintSystem bare = base_system(p, {});
  CHECK(bare.num_preference == 0);
  CHECK(base_system(p, {indifferent("a1", "a1")}).num_preference == 1);
  CHECK_THROWS_AS(base_system(p, {strict("a1", "q")}), UnknownAlternative);
}

TEST_CASE("compatibility") {
  const Problem p = democracy_problem();
  CHECK(check_compatibility(base_system(p, democracy_statements())).margin > 0);
  CHECK(check_compatibility(base_system(p, {})).margin > 0);
  CHECK_THROWS_AS(check_compatibility(base_system(p, {strict("a1", "a4"), strict("a4", "a1")})),
                  IncompatiblePreferences);
  // a2 dominates a3 on every criterion.
  CHECK_THROWS_AS(check_compatibility(base_system(p, {strict("a3", "a2")})),
                  IncompatiblePreferences);
}

TEST_CASE("pairwise tests on the democracy instance") {
  const ConstraintSystem sys = base_system(democracy_problem(), democracy_statements());
  CHECK(is_necessarily_preferred(sys, "a2", "a4"));
  CHECK_FALSE(is_necessarily_preferred(sys, "a1", "a4"));
  CHECK(is_necessarily_preferred(sys, "a5", "a5"));
  CHECK(is_possibly_preferred(sys, "a4", "a8"));
  CHECK_FALSE(is_possibly_preferred(sys, "a3", "a2"));
  CHECK(is_possibly_preferred(sys, "a6", "a6"));
  CHECK_THROWS_AS(is_necessarily_preferred(sys, "a1", "zz"), UnknownAlternative);
}

TEST_CASE("democracy relations match the reference matrix") {
  const RelationBundle rel = compute_relations(democracy_problem(), democracy_statements());
  CHECK((rel.necessary == democracy_necessary()).all());
  CHECK(rel.necessary.count() == 32);
  CHECK(rel.strict.count() == 22);
  CHECK_FALSE(rel.strict.matrix().diagonal().any());
  CHECK(rel.d_pairs.size() == 46);
  CHECK(rel.incomparable.count() == 46);
  // The relation does not depend on the number of worker threads.
  CHECK(compute_relations(democracy_problem(), democracy_statements(), 4) == rel);
}

TEST_CASE("single alternative") {
  RawTable t;
  t.alternatives = {"only"};
  t.criteria = {"g"};
  t.scores.resize(1, 1);
  t.scores << 1.0;
  const RelationBundle rel = compute_relations(build_problem(t), {});
  CHECK(rel.necessary.size() == 1);
  CHECK(rel.necessary(0, 0));
  CHECK(rel.strict.count() == 0);
  CHECK(rel.d_pairs.empty());
}

TEST_CASE("without statements the necessary relation is weak dominance") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 40; ++k) {
    const Problem p = rorep::testing::random_instance(rng).problem;
    const RelationBundle rel = compute_relations(p, {});
    for (int a = 0; a < p.num_alternatives(); ++a) {
      for (int b = 0; b < p.num_alternatives(); ++b) {
        CHECK(rel.necessary(a, b) == dominates(p, a, b));
      }
    }
  }
  const Problem p = democracy_problem();
  const RelationBundle rel = compute_relations(p, {});
  for (int a = 0; a < 10; ++a) {
    for (int b = 0; b < 10; ++b) CHECK(rel.necessary(a, b) == dominates(p, a, b));
  }
}

TEST_CASE("relation properties on random instances") {
  std::mt19937_64 rng(20261016);
  for (int k = 0; k < 60; ++k) {
    const auto inst = rorep::testing::random_instance(rng);
    const Problem& p = inst.problem;
    const RelationBundle rel = compute_relations(p, inst.statements);
    const int n = p.num_alternatives();
    int d = 0;
    for (int a = 0; a < n; ++a) {
      CHECK(rel.necessary(a, a));
      for (int b = 0; b < n; ++b) {
        if (dominates(p, a, b)) CHECK(rel.necessary(a, b));
        for (int c = 0; c < n; ++c) {
          if (rel.necessary(a, b) && rel.necessary(b, c)) CHECK(rel.necessary(a, c));
        }
        if (a == b) continue;
        const bool both = rel.necessary(a, b) && rel.necessary(b, a);
        const int holds = int(rel.strict(a, b)) + int(rel.strict(b, a)) + int(both) +
                          int(rel.incomparable(a, b));
        CHECK(holds == 1);
        CHECK(rel.incomparable(a, b) == rel.incomparable(b, a));
        d += rel.incomparable(a, b);
      }
    }
    CHECK(static_cast<int>(rel.d_pairs.size()) == d);
  }
}
