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

#include "rorep/representative.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cover_search.hpp"

namespace rorep {

using lp::MixedIntegerProgram;
using lp::Relation;
using lp::Term;

namespace {

std::string pair_name(const Problem& p, const AlternativePair& pr) {
  return p.alternatives()[static_cast<std::size_t>(pr.first)] + "_" +
         p.alternatives()[static_cast<std::size_t>(pr.second)];
}

std::string copy_prefix(int s) { return "s" + std::to_string(s + 1) + "_"; }

// Value-function copy with its structural, statement and strict-necessary
// constraints.
MarginalBlock add_compatible_copy(lp::LinearProgram& lp, const ConstraintSystem& sys,
                                  const std::vector<AlternativePair>& strict, const Margin& margin,
                                  const std::string& prefix) {
  const Problem& p = sys.problem;
  MarginalBlock block(lp, p, prefix);
  add_structural_constraints(lp, p, block, prefix);
  add_statement_constraints(lp, p, block, sys.statements, margin, prefix);
  for (const auto& pr : strict) {
    add_strict_constraint(lp, p, block, pr.first, pr.second, margin,
                          prefix + "sn_" + pair_name(p, pr));
  }
  return block;
}

lp::SolveResult solve_or_throw(const MixedIntegerProgram& mip, const RepresentativeParams& params,
                               const char* what) {
  lp::SolveResult r = lp::solve_milp(mip, params.milp);
  if (!r.optimal()) {
    throw InternalError(std::string(what) + " is " + std::string(lp::to_string(r.status)));
  }
  return r;
}

bool is_one(double v) { return v > 0.5; }

}  // namespace

void RepresentativeParams::validate() const {
  if (!(eps_fixed > 0.0) || !std::isfinite(eps_fixed)) {
    throw ProblemError("eps_fixed must be positive");
  }
  if (!(big_m > 1.0 + eps_fixed) || !std::isfinite(big_m)) {
    throw ProblemError("big_m must exceed 1 + eps_fixed");
  }
}

namespace {

struct PdModel {
  MixedIntegerProgram mip;
  MarginalBlock block;
  std::vector<int> gamma;  // per pair of d
};

PdModel pd_model(const ConstraintSystem& sys, const std::vector<AlternativePair>& strict,
                 const std::vector<AlternativePair>& d, const RepresentativeParams& params) {
  params.validate();
  if (d.empty()) throw ProblemError("P(D) needs a nonempty pair set");
  const Problem& p = sys.problem;
  PdModel m;
  const Margin margin = Margin::fixed(params.eps_fixed);
  m.block = add_compatible_copy(m.mip.base, sys, strict, margin, "");
  std::vector<Term> objective;
  for (const auto& pr : d) {
    m.gamma.push_back(m.mip.add_binary("g_" + pair_name(p, pr)));
    objective.push_back(Term{m.gamma.back(), 1.0});
    add_strict_constraint(m.mip.base, p, m.block, pr.first, pr.second, margin,
                          "d_" + pair_name(p, pr), {Term{m.gamma.back(), params.big_m}});
  }
  m.mip.base.set_objective(std::move(objective), lp::Sense::kMinimize);
  return m;
}

}  // namespace

lp::MixedIntegerProgram build_pd(const ConstraintSystem& sys,
                                 const std::vector<AlternativePair>& strict,
                                 const std::vector<AlternativePair>& d,
                                 const RepresentativeParams& params) {
  return pd_model(sys, strict, d, params).mip;
}

CoveringStep solve_pd(const ConstraintSystem& sys, const std::vector<AlternativePair>& strict,
                      const std::vector<AlternativePair>& d, const RepresentativeParams& params,
                      std::string label) {
  const PdModel m = pd_model(sys, strict, d, params);
  const lp::SolveResult r = solve_or_throw(m.mip, params, "P(D)");
  CoveringStep step;
  step.function = m.block.extract(r.values, std::move(label));
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!is_one(r.values[static_cast<std::size_t>(m.gamma[k])])) step.covered.push_back(d[k]);
  }
  if (step.covered.empty()) throw InternalError("P(D) covered no pair");
  return step;
}

SufficientSet procedure1(const ConstraintSystem& sys, const RelationBundle& relations,
                         const RepresentativeParams& params) {
  params.validate();
  SufficientSet set;
  const auto strict = relations.strict_pairs();
  std::vector<AlternativePair> remaining = relations.d_pairs;
  if (remaining.empty()) {
    check_compatibility(sys);
    lp::LinearProgram model;
    const MarginalBlock block =
        add_compatible_copy(model, sys, strict, Margin::fixed(params.eps_fixed), "");
    const lp::SolveResult r = lp::solve_lp(model);
    if (!r.optimal()) {
      throw InternalError("strict necessary pairs not reproducible at eps_fixed: " +
                          std::string(lp::to_string(r.status)));
    }
    set.functions.push_back(block.extract(r.values, "U1"));
    set.covered.emplace_back();
    set.remaining = {0, 0};
    return set;
  }
  while (!remaining.empty()) {
    set.remaining.push_back(static_cast<int>(remaining.size()));
    CoveringStep step = solve_pd(sys, strict, remaining, params, "U" + std::to_string(set.r() + 1));
    const std::set<AlternativePair> covered(step.covered.begin(), step.covered.end());
    std::erase_if(remaining, [&](const AlternativePair& pr) { return covered.count(pr) != 0; });
    set.functions.push_back(std::move(step.function));
    set.covered.push_back(std::move(step.covered));
  }
  set.remaining.push_back(0);
  return set;
}

lp::MixedIntegerProgram build_p1(const ConstraintSystem& sys, const RelationBundle& relations,
                                 int r, const RepresentativeParams& params) {
  params.validate();
  if (r < 1) throw ProblemError("P1 needs r >= 1");
  const Problem& p = sys.problem;
  const auto strict = relations.strict_pairs();
  const auto& d = relations.d_pairs;
  const Margin margin = Margin::fixed(params.eps_fixed);

  MixedIntegerProgram mip;
  std::vector<MarginalBlock> blocks;
  for (int s = 0; s < r; ++s) {
    blocks.push_back(add_compatible_copy(mip.base, sys, strict, margin, copy_prefix(s)));
  }
  std::vector<int> rho;
  std::vector<Term> objective;
  for (int s = 0; s < r; ++s) {
    rho.push_back(mip.add_binary("rho" + std::to_string(s + 1)));
    objective.push_back(Term{rho.back(), 1.0});
  }
  for (const auto& pr : d) {
    std::vector<Term> cover;
    for (int s = 0; s < r; ++s) {
      const int g = mip.add_binary(copy_prefix(s) + "g_" + pair_name(p, pr));
      const int rh = rho[static_cast<std::size_t>(s)];
      add_strict_constraint(mip.base, p, blocks[static_cast<std::size_t>(s)], pr.first,
                            pr.second, margin, copy_prefix(s) + "d_" + pair_name(p, pr),
                            {Term{g, params.big_m}, Term{rh, params.big_m}});
      mip.base.add_constraint({{g, 1.0}, {rh, 1.0}}, Relation::kLessEqual, 1.0,
                              copy_prefix(s) + "gr_" + pair_name(p, pr));
      cover.push_back(Term{g, 1.0});
      cover.push_back(Term{rh, 1.0});
    }
    mip.base.add_constraint(std::move(cover), Relation::kLessEqual, r - 1.0,
                            "cover_" + pair_name(p, pr));
  }
  mip.base.set_objective(std::move(objective), lp::Sense::kMaximize);
  return mip;
}

lp::MixedIntegerProgram build_p2(const ConstraintSystem& sys, const RelationBundle& relations,
                                 int t, const RepresentativeParams& params) {
  params.validate();
  if (t < 1) throw ProblemError("P2 needs t >= 1");
  const Problem& p = sys.problem;
  const auto strict = relations.strict_pairs();
  const auto& d = relations.d_pairs;

  MixedIntegerProgram mip;
  const int eps = mip.base.add_variable("eps", 0.0, 1.0);
  const Margin margin = Margin::variable(eps);
  std::vector<MarginalBlock> blocks;
  for (int s = 0; s < t; ++s) {
    blocks.push_back(add_compatible_copy(mip.base, sys, strict, margin, copy_prefix(s)));
  }
  for (const auto& pr : d) {
    std::vector<Term> cover;
    for (int s = 0; s < t; ++s) {
      const int g = mip.add_binary(copy_prefix(s) + "g_" + pair_name(p, pr));
      add_strict_constraint(mip.base, p, blocks[static_cast<std::size_t>(s)], pr.first,
                            pr.second, margin, copy_prefix(s) + "d_" + pair_name(p, pr),
                            {Term{g, params.big_m}});
      cover.push_back(Term{g, 1.0});
    }
    mip.base.add_constraint(std::move(cover), Relation::kLessEqual, t - 1.0,
                            "cover_" + pair_name(p, pr));
  }
  mip.base.set_objective({{eps, 1.0}}, lp::Sense::kMaximize);
  return mip;
}

MinimalityResult solve_p1(const ConstraintSystem& sys, const RelationBundle& relations, int r,
                          const RepresentativeParams& params,
                          const std::vector<ValueFunction>& start) {
  params.validate();
  if (r < 1) throw ProblemError("P1 needs r >= 1");
  if (!start.empty() && static_cast<int>(start.size()) != r) {
    throw ProblemError("P1 start needs r functions");
  }
  const auto strict = relations.strict_pairs();
  MinimalityResult out;
  out.r = r;
  for (int copies = 1; copies <= r; ++copies) {
    if (copies == r && !start.empty()) {
      out.witnesses = start;
    } else {
      detail::CoverSearchOptions options;
      options.copies = copies;
      options.target = params.eps_fixed;
      options.maximize = false;
      options.node_limit = params.milp.node_limit;
      detail::CoverSearchResult found =
          detail::cover_search(sys, strict, relations.d_pairs, options);
      if (!found.found) continue;
      out.witnesses = std::move(found.functions);
    }
    out.t = copies;
    out.z_star = r - copies;
    for (std::size_t s = 0; s < out.witnesses.size(); ++s) {
      out.witnesses[s].label = "U" + std::to_string(r + static_cast<int>(s) + 1);
    }
    return out;
  }
  throw InternalError("no set of " + std::to_string(r) + " functions covers D");
}

DiscriminantSet solve_p2(const ConstraintSystem& sys, const RelationBundle& relations, int t,
                         const RepresentativeParams& params) {
  params.validate();
  if (t < 1) throw ProblemError("P2 needs t >= 1");
  detail::CoverSearchOptions options;
  options.copies = t;
  options.target = 0.0;
  options.maximize = true;
  options.node_limit = params.milp.node_limit;
  detail::CoverSearchResult found =
      detail::cover_search(sys, relations.strict_pairs(), relations.d_pairs, options);
  if (!found.found || !(found.epsilon > kNecessityThreshold)) {
    throw InternalError("P2 optimum has no positive margin");
  }
  DiscriminantSet out;
  out.epsilon_star = found.epsilon;
  out.functions = std::move(found.functions);
  for (std::size_t s = 0; s < out.functions.size(); ++s) {
    out.functions[s].label = "D" + std::to_string(s + 1);
  }
  out.coverage = coverage_map(sys.problem, relations, out.functions, out.epsilon_star);
  return out;
}

std::map<AlternativePair, std::vector<int>> coverage_map(
    const Problem& p, const RelationBundle& relations,
    const std::vector<ValueFunction>& functions, double epsilon) {
  std::vector<Eigen::VectorXd> values;
  for (const auto& f : functions) values.push_back(evaluate_all(f, p));
  std::map<AlternativePair, std::vector<int>> coverage;
  auto record = [&](const AlternativePair& pr) {
    auto& who = coverage[pr];
    for (std::size_t s = 0; s < values.size(); ++s) {
      const double margin = values[s](pr.first) - values[s](pr.second);
      if (margin >= epsilon - kCoverageTolerance && margin > kNecessityThreshold) {
        who.push_back(static_cast<int>(s));
      }
    }
  };
  for (const auto& pr : relations.strict_pairs()) record(pr);
  for (const auto& pr : relations.d_pairs) record(pr);
  return coverage;
}

Explanation explain_pair(const std::vector<ValueFunction>& functions, const Problem& p,
                         std::string_view a, std::string_view b) {
  const int ia = p.index_of(a);
  const int ib = p.index_of(b);
  int best = -1;
  double best_margin = kNecessityThreshold;
  for (std::size_t s = 0; s < functions.size(); ++s) {
    const double margin = evaluate(functions[s], p, ia) - evaluate(functions[s], p, ib);
    if (margin > best_margin) {
      best_margin = margin;
      best = static_cast<int>(s);
    }
  }
  if (best < 0) throw NoCoveringFunction(std::string(a), std::string(b));

  const ValueFunction& f = functions[static_cast<std::size_t>(best)];
  Explanation e;
  e.a = std::string(a);
  e.b = std::string(b);
  e.function_index = best;
  e.function_label = f.label;
  e.margin = best_margin;
  for (int i = 0; i < p.num_criteria(); ++i) {
    const double sign = p.criterion(i).direction == Direction::kCost ? -1.0 : 1.0;
    CriterionContribution c;
    c.criterion = p.criterion(i).id;
    c.score_a = sign * p.score(ia, i) + 0.0;
    c.score_b = sign * p.score(ib, i) + 0.0;
    c.value_a = f.marginal(i, p.level(ia, i));
    c.value_b = f.marginal(i, p.level(ib, i));
    e.criteria.push_back(c);
    if (std::abs(c.gap()) > kNecessityThreshold) e.differing.push_back(c);
  }
  return e;
}

Explanation explain_pair(const DiscriminantSet& ds, const Problem& p, std::string_view a,
                         std::string_view b) {
  return explain_pair(ds.functions, p, a, b);
}

Analysis analyze(const ConstraintSystem& sys, const RelationBundle& relations,
                 const RepresentativeParams& params) {
  Analysis out;
  out.relations = relations;
  out.sufficient = procedure1(sys, relations, params);
  out.minimality = solve_p1(sys, relations, out.sufficient.r(), params, out.sufficient.functions);
  out.discriminant = solve_p2(sys, relations, out.minimality.t, params);
  const int base = out.sufficient.r() + out.minimality.t;
  for (std::size_t s = 0; s < out.discriminant.functions.size(); ++s) {
    out.discriminant.functions[s].label = "U" + std::to_string(base + static_cast<int>(s) + 1);
  }
  return out;
}

Analysis analyze(const ConstraintSystem& sys, const RepresentativeParams& params, int jobs) {
  return analyze(sys, compute_relations(sys, jobs), params);
}

}  // namespace rorep
