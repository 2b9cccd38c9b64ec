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

#include "rorep/solver.hpp"

#include <cmath>
#include <memory>
#include <queue>
#include <stdexcept>

#include "tableau.hpp"

namespace rorep::lp {
namespace {

using detail::Basis;
using detail::Tableau;
using detail::TableauStatus;

SolveStatus to_status(TableauStatus s) {
  switch (s) {
    case TableauStatus::kOptimal: return SolveStatus::kOptimal;
    case TableauStatus::kInfeasible: return SolveStatus::kInfeasible;
    case TableauStatus::kUnbounded: return SolveStatus::kUnbounded;
  }
  return SolveStatus::kInfeasible;
}

// True when every objective term sits on a binary with an integer
// coefficient, so every integral-feasible objective value is an integer.
bool has_integral_objective(const MixedIntegerProgram& mip) {
  std::vector<char> is_binary(static_cast<std::size_t>(mip.base.num_variables()), 0);
  for (int b : mip.binaries) is_binary[static_cast<std::size_t>(b)] = 1;
  if (mip.base.objective().offset != std::round(mip.base.objective().offset)) return false;
  for (const Term& t : mip.base.objective().terms) {
    if (!is_binary[static_cast<std::size_t>(t.var)] || t.coef != std::round(t.coef)) return false;
  }
  return true;
}

struct Node {
  double bound = 0.0;       // internal minimisation form
  std::int64_t seq = 0;
  std::vector<signed char> fix;  // per binary: -1 free, 0, 1
  std::shared_ptr<const Basis> basis;
};

struct NodeOrder {
  // Best (lowest) bound first; among equal bounds the most recent node, which
  // makes ties dive depth-first.
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq < b.seq;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MixedIntegerProgram& mip, const MilpOptions& options)
      : mip_(mip),
        options_(options),
        tableau_(mip.base),
        integral_objective_(has_integral_objective(mip)),
        applied_(mip.binaries.size(), -1) {}

  SolveResult run() {
    SolveResult result;
    const TableauStatus root = tableau_.solve();
    if (root != TableauStatus::kOptimal) {
      result.status = to_status(root);
      result.stats = stats();
      return result;
    }
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::int64_t seq = 0;
    open.push(Node{tableau_.objective(), seq++,
                   std::vector<signed char>(mip_.binaries.size(), -1),
                   std::make_shared<const Basis>(tableau_.basis())});
    bool first = true;

    while (!open.empty()) {
      Node node = open.top();
      open.pop();
      if (prunable(node.bound)) continue;
      if (++nodes_ > options_.node_limit) {
        throw std::runtime_error("branch-and-bound node limit reached");
      }
      apply_fixings(node.fix);
      if (!first) tableau_.load_basis(*node.basis);
      first = false;
      if (tableau_.reoptimize() != TableauStatus::kOptimal) continue;
      const double value = tableau_.objective();
      if (prunable(value)) continue;

      int branch = select_branch(kIntegralityTolerance);
      if (branch < 0) {
        if (consider_incumbent(node.fix)) continue;
        // Rounding broke feasibility: keep branching on the residual
        // fractional parts.
        branch = select_branch(0.0);
        if (branch < 0) continue;
      }
      auto basis = std::make_shared<const Basis>(tableau_.basis());
      const double x = tableau_.value(mip_.binaries[static_cast<std::size_t>(branch)]);
      const signed char preferred = x >= 0.5 ? 1 : 0;
      for (signed char v : {static_cast<signed char>(1 - preferred), preferred}) {
        Node child{value, seq++, node.fix, basis};
        child.fix[static_cast<std::size_t>(branch)] = v;
        open.push(std::move(child));
      }
    }

    if (incumbent_.empty()) {
      result.status = SolveStatus::kInfeasible;
    } else {
      result.status = SolveStatus::kOptimal;
      result.values = incumbent_;
      result.objective = mip_.base.objective_value(incumbent_);
    }
    result.stats = stats();
    return result;
  }

 private:
  SolveStats stats() const { return SolveStats{tableau_.iterations(), nodes_}; }

  bool prunable(double bound) const {
    if (incumbent_.empty()) return false;
    if (integral_objective_) return std::ceil(bound - kIntegralityTolerance) >= best_ - 0.5;
    return bound >= best_ - kObjectiveTolerance;
  }

  void apply_fixings(const std::vector<signed char>& fix) {
    for (std::size_t k = 0; k < fix.size(); ++k) {
      if (applied_[k] == fix[k]) continue;
      const int col = mip_.binaries[k];
      if (fix[k] < 0) {
        tableau_.set_bounds(col, 0.0, 1.0);
      } else {
        tableau_.set_bounds(col, fix[k], fix[k]);
      }
      applied_[k] = fix[k];
    }
  }

  // Most fractional binary; -1 when none exceeds `tolerance`.
  int select_branch(double tolerance) const {
    int best = -1;
    double best_frac = tolerance;
    for (std::size_t k = 0; k < mip_.binaries.size(); ++k) {
      const double x = tableau_.value(mip_.binaries[k]);
      const double frac = std::min(x - std::floor(x), std::ceil(x) - x);
      if (frac > best_frac) {
        best_frac = frac;
        best = static_cast<int>(k);
      }
    }
    return best;
  }

  // Re-solves with every binary fixed at its rounded value so the stored
  // assignment is exactly integral and feasible at full precision.
  bool consider_incumbent(const std::vector<signed char>& node_fix) {
    std::vector<signed char> rounded(mip_.binaries.size());
    for (std::size_t k = 0; k < rounded.size(); ++k) {
      rounded[k] = static_cast<signed char>(std::lround(tableau_.value(mip_.binaries[k])));
    }
    const Basis saved = tableau_.basis();
    if (try_assignment(rounded)) return true;
    apply_fixings(node_fix);
    tableau_.load_basis(saved);
    tableau_.reoptimize();
    return false;
  }

  // Solves the LP with every binary fixed as in `fix` and keeps the result
  // when it improves the incumbent. Leaves the fixings applied.
  bool try_assignment(const std::vector<signed char>& fix) {
    apply_fixings(fix);
    if (tableau_.reoptimize() != TableauStatus::kOptimal) return false;
    const double value = tableau_.objective();
    if (incumbent_.empty() || value < best_ - kObjectiveTolerance) {
      std::vector<double> values = tableau_.structural_values();
      for (std::size_t k = 0; k < fix.size(); ++k) {
        values[static_cast<std::size_t>(mip_.binaries[k])] = fix[k];
      }
      best_ = value;
      incumbent_ = std::move(values);
    }
    return true;
  }

  const MixedIntegerProgram& mip_;
  MilpOptions options_;
  Tableau tableau_;
  bool integral_objective_;
  std::vector<signed char> applied_;
  std::vector<double> incumbent_;
  double best_ = 0.0;
  std::int64_t nodes_ = 0;
};

}  // namespace

SolveResult solve_lp(const LinearProgram& lp) {
  lp.validate();
  Tableau tableau(lp);
  SolveResult result;
  result.status = to_status(tableau.solve());
  if (result.optimal()) {
    result.values = tableau.structural_values();
    result.objective = lp.objective_value(result.values);
  }
  result.stats.simplex_iterations = tableau.iterations();
  return result;
}

SolveResult solve_milp(const MixedIntegerProgram& mip, const MilpOptions& options) {
  mip.validate();
  if (static_cast<int>(mip.binaries.size()) > options.max_binaries) {
    throw GuardError("model has " + std::to_string(mip.binaries.size()) +
                     " binaries; the limit is " + std::to_string(options.max_binaries));
  }
  if (mip.binaries.empty()) return solve_lp(mip.base);
  return BranchAndBound(mip, options).run();
}

}  // namespace rorep::lp
