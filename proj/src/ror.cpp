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

#include "rorep/ror.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "rorep/solver.hpp"

namespace rorep {

using lp::Relation;
using lp::Term;

MarginalBlock::MarginalBlock(lp::LinearProgram& lp, const Problem& p, const std::string& prefix) {
  vars_.resize(static_cast<std::size_t>(p.num_criteria()));
  for (int i = 0; i < p.num_criteria(); ++i) {
    const auto levels = p.criterion(i).points.size();
    for (std::size_t k = 0; k < levels; ++k) {
      vars_[static_cast<std::size_t>(i)].push_back(lp.add_variable(
          prefix + "u" + std::to_string(i + 1) + "_" + std::to_string(k), 0.0, lp::kInfinity));
    }
  }
}

std::vector<Term> MarginalBlock::difference(const Problem& p, int a, int b) const {
  std::vector<Term> terms;
  for (int i = 0; i < p.num_criteria(); ++i) {
    const int la = p.level(a, i);
    const int lb = p.level(b, i);
    if (la == lb) continue;
    terms.push_back(Term{var(i, la), 1.0});
    terms.push_back(Term{var(i, lb), -1.0});
  }
  return terms;
}

ValueFunction MarginalBlock::extract(const std::vector<double>& values, std::string label) const {
  ValueFunction f;
  f.label = std::move(label);
  for (const auto& crit : vars_) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(crit.size()));
    for (std::size_t k = 0; k < crit.size(); ++k) {
      // Snap solver noise: marginals are nonnegative and exact zeros read
      // better in reports.
      const double v = values[static_cast<std::size_t>(crit[k])];
      u(static_cast<Eigen::Index>(k)) = std::abs(v) < 1e-12 ? 0.0 : v;
    }
    f.marginals.push_back(std::move(u));
  }
  return f;
}

StructuralCounts add_structural_constraints(lp::LinearProgram& lp, const Problem& p,
                                            const MarginalBlock& block,
                                            const std::string& prefix) {
  StructuralCounts counts;
  std::vector<Term> top;
  for (int i = 0; i < p.num_criteria(); ++i) {
    const int levels = static_cast<int>(p.criterion(i).points.size());
    for (int k = 1; k < levels; ++k) {
      lp.add_constraint({{block.var(i, k), 1.0}, {block.var(i, k - 1), -1.0}},
                        Relation::kGreaterEqual, 0.0,
                        prefix + "mono" + std::to_string(i + 1) + "_" + std::to_string(k));
      ++counts.monotonicity;
    }
    lp.add_constraint({{block.var(i, 0), 1.0}}, Relation::kEqual, 0.0,
                      prefix + "zero" + std::to_string(i + 1));
    ++counts.zero_at_alpha;
    if (levels > 1) top.push_back(Term{block.var(i, levels - 1), 1.0});
  }
  // Constant criteria carry no value; with every criterion constant all
  // alternatives tie and the scale is left unnormalised.
  if (!top.empty()) {
    lp.add_constraint(std::move(top), Relation::kEqual, 1.0, prefix + "norm");
    ++counts.normalization;
  }
  return counts;
}

int add_strict_constraint(lp::LinearProgram& lp, const Problem& p, const MarginalBlock& block,
                          int a, int b, const Margin& margin, const std::string& name,
                          const std::vector<Term>& extra) {
  std::vector<Term> terms = block.difference(p, a, b);
  double rhs = margin.constant;
  if (margin.var >= 0) {
    terms.push_back(Term{margin.var, -1.0});
    rhs = 0.0;
  }
  terms.insert(terms.end(), extra.begin(), extra.end());
  return lp.add_constraint(std::move(terms), Relation::kGreaterEqual, rhs, name);
}

int add_statement_constraints(lp::LinearProgram& lp, const Problem& p, const MarginalBlock& block,
                              const std::vector<PreferenceStatement>& statements,
                              const Margin& margin, const std::string& prefix) {
  int count = 0;
  for (const auto& s : statements) {
    const int a = p.index_of(s.a);
    const int b = p.index_of(s.b);
    const std::string name = prefix + "dm" + std::to_string(count + 1);
    if (s.kind == PreferenceStatement::Kind::kStrict) {
      add_strict_constraint(lp, p, block, a, b, margin, name);
    } else {
      lp.add_constraint(block.difference(p, a, b), Relation::kEqual, 0.0, name);
    }
    ++count;
  }
  return count;
}

ConstraintSystem base_system(const Problem& p, const std::vector<PreferenceStatement>& statements) {
  validate_statements(p, statements);
  ConstraintSystem sys;
  sys.problem = p;
  sys.statements = statements;
  sys.block = MarginalBlock(sys.lp, p, "");
  sys.epsilon = sys.lp.add_variable("eps", -lp::kInfinity, 1.0);
  sys.structural = add_structural_constraints(sys.lp, p, sys.block, "");
  sys.num_preference = add_statement_constraints(sys.lp, p, sys.block, statements,
                                                 Margin::variable(sys.epsilon), "");
  sys.lp.set_objective({{sys.epsilon, 1.0}}, lp::Sense::kMaximize);
  return sys;
}

CompatibilityResult check_compatibility(const ConstraintSystem& sys) {
  const lp::SolveResult r = lp::solve_lp(sys.lp);
  if (!r.optimal() || r.objective <= kNecessityThreshold) {
    throw IncompatiblePreferences(sys.statements);
  }
  return CompatibilityResult{r.objective, sys.block.extract(r.values, "compatible")};
}

namespace {

// Largest margin eps such that the system plus U(x) - U(y) >= bound holds,
// where bound is eps (strict) or 0 (weak). nullopt when infeasible.
std::optional<double> challenge_margin(const ConstraintSystem& sys, int x, int y, bool strict) {
  lp::LinearProgram model = sys.lp;
  add_strict_constraint(model, sys.problem, sys.block, x, y,
                        strict ? Margin::variable(sys.epsilon) : Margin::fixed(0.0), "challenge");
  const lp::SolveResult r = lp::solve_lp(model);
  if (r.status == lp::SolveStatus::kUnbounded) {
    throw InternalError("necessity LP unbounded despite eps <= 1");
  }
  if (!r.optimal()) return std::nullopt;
  return r.objective;
}

}  // namespace

bool is_necessarily_preferred(const ConstraintSystem& sys, int a, int b) {
  if (a == b) return true;
  const auto margin = challenge_margin(sys, b, a, true);
  return !margin || *margin <= kNecessityThreshold;
}

bool is_necessarily_preferred(const ConstraintSystem& sys, std::string_view a,
                              std::string_view b) {
  return is_necessarily_preferred(sys, sys.problem.index_of(a), sys.problem.index_of(b));
}

bool is_possibly_preferred(const ConstraintSystem& sys, int a, int b) {
  if (a == b) return true;
  const auto margin = challenge_margin(sys, a, b, false);
  return margin && *margin > kNecessityThreshold;
}

bool is_possibly_preferred(const ConstraintSystem& sys, std::string_view a, std::string_view b) {
  return is_possibly_preferred(sys, sys.problem.index_of(a), sys.problem.index_of(b));
}

std::vector<AlternativePair> RelationBundle::strict_pairs() const {
  std::vector<AlternativePair> pairs;
  for (int a = 0; a < strict.rows(); ++a) {
    for (int b = 0; b < strict.cols(); ++b) {
      if (strict(a, b)) pairs.emplace_back(a, b);
    }
  }
  return pairs;
}

RelationBundle derive_relations(BoolMatrix necessary) {
  RelationBundle r;
  const auto n = necessary.rows();
  r.strict = necessary && !necessary.transpose();
  r.incomparable = !necessary && !necessary.transpose();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      if (r.incomparable(a, b)) r.d_pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
  }
  r.necessary = std::move(necessary);
  return r;
}

RelationBundle compute_relations(const ConstraintSystem& sys, int jobs) {
  check_compatibility(sys);
  const int n = sys.problem.num_alternatives();
  BoolMatrix necessary = BoolMatrix::Constant(n, n, false);
  std::vector<AlternativePair> work;
  for (int a = 0; a < n; ++a) {
    necessary(a, a) = true;
    for (int b = 0; b < n; ++b) {
      if (a != b) work.emplace_back(a, b);
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < work.size(); k = next++) {
      try {
        const auto [a, b] = work[k];
        necessary(a, b) = is_necessarily_preferred(sys, a, b);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, std::max(1, static_cast<int>(work.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return derive_relations(std::move(necessary));
}

RelationBundle compute_relations(const Problem& p,
                                 const std::vector<PreferenceStatement>& statements, int jobs) {
  return compute_relations(base_system(p, statements), jobs);
}

}  // namespace rorep
