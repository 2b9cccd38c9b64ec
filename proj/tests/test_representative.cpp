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
#include <set>

#include "rorep/representative.hpp"
#include "support/fixtures.hpp"

using namespace rorep;
using rorep::testing::democracy_problem;
using rorep::testing::democracy_statements;
using rorep::testing::strict;

namespace {

double margin(const ValueFunction& f, const Problem& p, const AlternativePair& pr) {
  return evaluate(f, p, pr.first) - evaluate(f, p, pr.second);
}

// Compatible: well formed, DM statements and strict necessary pairs at
// `eps`, indifference statements exact.
void check_compatible(const ValueFunction& f, const ConstraintSystem& sys,
                      const RelationBundle& rel, double eps) {
  const Problem& p = sys.problem;
  const auto problem = check_value_function(f, p);
  CHECK_MESSAGE(!problem.has_value(), f.label << ": " << problem.value_or(""));
  for (const auto& s : sys.statements) {
    const AlternativePair pr{p.index_of(s.a), p.index_of(s.b)};
    if (s.kind == PreferenceStatement::Kind::kStrict) {
      CHECK(margin(f, p, pr) >= eps - 1e-7);
    } else {
      CHECK(std::abs(margin(f, p, pr)) <= 1e-7);
    }
  }
  for (const auto& pr : rel.strict_pairs()) CHECK(margin(f, p, pr) >= eps - 1e-7);
}

struct Small {
  ConstraintSystem sys;
  RelationBundle rel;
};

Small small_instance(std::mt19937_64& rng, int max_alternatives, int max_criteria) {
  const auto inst = rorep::testing::random_instance(rng, max_alternatives, max_criteria, 2, 2);
  ConstraintSystem sys = base_system(inst.problem, inst.statements);
  RelationBundle rel = compute_relations(sys);
  return {std::move(sys), std::move(rel)};
}

}  // namespace

TEST_CASE("P(D) on the full democracy pair set") {
  const ConstraintSystem sys = base_system(democracy_problem(), democracy_statements());
  const RelationBundle rel = compute_relations(sys);
  const CoveringStep step = solve_pd(sys, rel.strict_pairs(), rel.d_pairs, {});
  // U(a) > U(b) and U(b) > U(a) exclude each other.
  CHECK(step.covered.size() <= rel.d_pairs.size() / 2);
  CHECK_FALSE(step.covered.empty());
  check_compatible(step.function, sys, rel, 1e-4);
  for (const auto& pr : step.covered) CHECK(margin(step.function, sys.problem, pr) >= 1e-4 - 1e-7);
}

TEST_CASE("P(D) on a single pair covers it") {
  const ConstraintSystem sys = base_system(democracy_problem(), democracy_statements());
  const RelationBundle rel = compute_relations(sys);
  for (const auto& pr : rel.d_pairs) {
    const CoveringStep step = solve_pd(sys, rel.strict_pairs(), {pr}, {});
    REQUIRE(step.covered.size() == 1);
    CHECK(step.covered[0] == pr);
  }
  CHECK_THROWS_AS(solve_pd(sys, rel.strict_pairs(), {}, {}), ProblemError);
}

TEST_CASE("parameters are validated") {
  RepresentativeParams params;
  params.eps_fixed = 0.0;
  CHECK_THROWS_AS(params.validate(), ProblemError);
  params.eps_fixed = 1e-4;
  params.big_m = 1.0;
  CHECK_THROWS_AS(params.validate(), ProblemError);
  params.big_m = 1e4;
  CHECK_NOTHROW(params.validate());
}

TEST_CASE("democracy pipeline") {
  const ConstraintSystem sys = base_system(democracy_problem(), democracy_statements());
  const Analysis a = analyze(sys, {});
  const SufficientSet& suf = a.sufficient;
  CHECK(suf.r() >= 3);
  CHECK(suf.r() <= 5);
  std::set<AlternativePair> covered;
  for (int s = 0; s < suf.r(); ++s) {
    check_compatible(suf.functions[static_cast<std::size_t>(s)], sys, a.relations, 1e-4);
    for (const auto& pr : suf.covered[static_cast<std::size_t>(s)]) {
      CHECK(margin(suf.functions[static_cast<std::size_t>(s)], sys.problem, pr) >= 1e-4 - 1e-7);
      covered.insert(pr);
    }
  }
  CHECK(covered.size() == 46);
  CHECK(suf.remaining.front() == 46);
  CHECK(suf.remaining.back() == 0);

  CHECK(a.minimality.t == 3);
  CHECK(a.minimality.z_star == suf.r() - 3);
  CHECK(a.discriminant.epsilon_star == doctest::Approx(1.0 / 11.0).epsilon(1e-9));
  REQUIRE(a.discriminant.functions.size() == 3);
  CHECK(a.discriminant.functions[0].label == "U" + std::to_string(suf.r() + 4));

  // Strict pairs are represented by all three functions, D pairs by at least one.
  for (const auto& pr : a.relations.strict_pairs()) {
    CHECK(a.discriminant.coverage.at(pr).size() == 3);
  }
  for (const auto& pr : a.relations.d_pairs) CHECK_FALSE(a.discriminant.coverage.at(pr).empty());
}

TEST_CASE("big-M does not change the democracy optima") {
  const ConstraintSystem sys = base_system(democracy_problem(), democracy_statements());
  RepresentativeParams large;
  large.big_m = 1e4;
  const Analysis a = analyze(sys, large);
  CHECK(a.minimality.t == 3);
  CHECK(a.discriminant.epsilon_star == doctest::Approx(1.0 / 11.0).epsilon(1e-9));
}

TEST_CASE("explanations") {
  const Problem p = democracy_problem();
  const ConstraintSystem sys = base_system(p, democracy_statements());
  const Analysis a = analyze(sys, {});
  const Explanation e = explain_pair(a.discriminant, p, "a4", "a8");
  CHECK(e.margin > 0);
  CHECK_FALSE(e.differing.empty());
  double total = 0.0;
  for (const auto& c : e.criteria) total += c.gap();
  CHECK(total == doctest::Approx(e.margin));
  for (const auto& c : e.differing) CHECK(std::abs(c.gap()) > 1e-9);
  // The chosen function has the largest margin.
  for (const auto& f : a.discriminant.functions) {
    CHECK(evaluate(f, p, "a4") - evaluate(f, p, "a8") <= e.margin + 1e-12);
  }
  CHECK(explain_pair(a.discriminant, p, "a2", "a3").margin > 0);
  CHECK_THROWS_AS(explain_pair(a.discriminant, p, "a3", "a2"), NoCoveringFunction);
  CHECK_THROWS_AS(explain_pair(a.discriminant, p, "a5", "a5"), NoCoveringFunction);
  CHECK_FALSE(is_possibly_preferred(sys, "a3", "a2"));
}

TEST_CASE("empty D") {
  // b dominates a, so the necessary relation is complete.
  RawTable t;
  t.alternatives = {"a", "b"};
  t.criteria = {"g1", "g2"};
  t.scores.resize(2, 2);
  t.scores << 1, 1, 2, 2;
  const ConstraintSystem sys = base_system(build_problem(t), {});
  const Analysis a = analyze(sys, {});
  CHECK(a.relations.d_pairs.empty());
  CHECK(a.sufficient.r() == 1);
  CHECK(a.minimality.t == 1);
  CHECK(a.discriminant.epsilon_star > 0);

  const ConstraintSystem one = base_system(build_problem(t), {strict("b", "a")});
  const Analysis b = analyze(one, {});
  CHECK(b.minimality.t == 1);
  CHECK(b.discriminant.epsilon_star > 0);
}

TEST_CASE("one symmetric incomparable pair needs two functions") {
  RawTable t;
  t.alternatives = {"a", "b"};
  t.criteria = {"g1", "g2"};
  t.scores.resize(2, 2);
  t.scores << 2, 1, 1, 2;
  const ConstraintSystem sys = base_system(build_problem(t), {});
  const Analysis a = analyze(sys, {});
  CHECK(a.relations.d_pairs.size() == 2);
  CHECK(a.minimality.t == 2);
  // Brute force: one copy cannot rank both directions.
  const lp::SolveResult one = lp::solve_milp(build_p1(sys, a.relations, 1, {}));
  CHECK(one.status == lp::SolveStatus::kInfeasible);
  // Each function puts all weight on one criterion: eps* = 1.
  CHECK(a.discriminant.epsilon_star == doctest::Approx(1.0));
}

TEST_CASE("procedure 1 on random instances") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 100; ++k) {
    const auto inst = rorep::testing::random_instance(rng, 4, 2);
    const ConstraintSystem sys = base_system(inst.problem, inst.statements);
    const RelationBundle rel = compute_relations(sys);
    const SufficientSet suf = procedure1(sys, rel, {});
    CHECK(suf.r() >= 1);
    CHECK(suf.r() <= std::max<int>(1, static_cast<int>(rel.d_pairs.size())));
    std::set<AlternativePair> covered;
    for (int s = 0; s < suf.r(); ++s) {
      check_compatible(suf.functions[static_cast<std::size_t>(s)], sys, rel, 1e-4);
      const auto& mine = suf.covered[static_cast<std::size_t>(s)];
      CHECK((rel.d_pairs.empty() || !mine.empty()));
      covered.insert(mine.begin(), mine.end());
    }
    CHECK(covered.size() == rel.d_pairs.size());
  }
}

TEST_CASE("minimality and discrimination agree with the MILP models") {
  std::mt19937_64 rng(1234);
  int checked = 0;
  for (int k = 0; k < 400 && checked < 40; ++k) {
    const Small inst = small_instance(rng, 4, 2);
    const auto& d = inst.rel.d_pairs;
    if (d.empty()) continue;
    const RepresentativeParams params;
    const SufficientSet suf = procedure1(inst.sys, inst.rel, params);
    const int r = suf.r();
    if (r + r * static_cast<int>(d.size()) > 40) continue;
    ++checked;
    INFO("instance " << k << ", |D| = " << d.size() << ", r = " << r);

    const MinimalityResult mine = solve_p1(inst.sys, inst.rel, r, params, suf.functions);
    const lp::SolveResult p1 = lp::solve_milp(build_p1(inst.sys, inst.rel, r, params));
    REQUIRE(p1.optimal());
    CHECK(mine.z_star == static_cast<int>(std::lround(p1.objective)));
    CHECK(mine.t == r - mine.z_star);
    for (const auto& f : mine.witnesses) check_compatible(f, inst.sys, inst.rel, 1e-4);

    // No t - 1 functions cover D: P1 with t - 1 copies that all stay.
    if (mine.t > 1) {
      lp::MixedIntegerProgram fewer = build_p1(inst.sys, inst.rel, mine.t - 1, params);
      for (int s = 0; s < mine.t - 1; ++s) {
        fewer.base.add_constraint({{fewer.base.variable_index("rho" + std::to_string(s + 1)), 1.0}},
                                  lp::Relation::kEqual, 0.0);
      }
      CHECK(lp::solve_milp(fewer).status == lp::SolveStatus::kInfeasible);
    }

    if (mine.t * static_cast<int>(d.size()) > 40) continue;
    const DiscriminantSet ds = solve_p2(inst.sys, inst.rel, mine.t, params);
    lp::MixedIntegerProgram p2_model = build_p2(inst.sys, inst.rel, mine.t, params);
    const lp::SolveResult p2 = lp::solve_milp(p2_model);
    REQUIRE(p2.optimal());
    CHECK(ds.epsilon_star == doctest::Approx(p2.objective).epsilon(1e-6));

    // eps* is optimal: a slightly larger common margin is infeasible.
    const int eps = p2_model.base.variable_index("eps");
    p2_model.base.set_bounds(eps, ds.epsilon_star + 1e-3, 1.0);
    if (ds.epsilon_star + 1e-3 <= 1.0) {
      CHECK(lp::solve_milp(p2_model).status == lp::SolveStatus::kInfeasible);
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("abstract conditions on random instances") {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 60; ++k) {
    const auto inst = rorep::testing::random_instance(rng);
    const ConstraintSystem sys = base_system(inst.problem, inst.statements);
    const Analysis a = analyze(sys, {});
    const DiscriminantSet& ds = a.discriminant;
    const Problem& p = inst.problem;
    CHECK(ds.epsilon_star > 0);
    for (const auto& f : ds.functions) {
      CHECK_FALSE(check_value_function(f, p).has_value());
      for (const auto& pr : a.relations.strict_pairs()) {
        CHECK(margin(f, p, pr) >= ds.epsilon_star - 1e-7);
      }
    }
    for (const auto& pr : a.relations.d_pairs) {
      bool some = false;
      for (const auto& f : ds.functions) some = some || margin(f, p, pr) >= ds.epsilon_star - 1e-7;
      CHECK(some);
    }
  }
}

TEST_CASE("results are reproducible") {
  const ConstraintSystem sys = base_system(democracy_problem(), democracy_statements());
  const Analysis a = analyze(sys, {});
  const Analysis b = analyze(sys, {}, 3);
  CHECK(a.sufficient.functions == b.sufficient.functions);
  CHECK(a.discriminant.functions == b.discriminant.functions);
  CHECK(a.discriminant.epsilon_star == b.discriminant.epsilon_star);
}
