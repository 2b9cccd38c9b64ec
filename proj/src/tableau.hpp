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

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rorep/linear_program.hpp"

namespace rorep::lp::detail {

enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper, kFreeZero };

struct Basis {
  std::vector<int> head;         // basic column per row
  std::vector<VarState> state;   // per column
};

enum class TableauStatus : std::uint8_t { kOptimal, kInfeasible, kUnbounded };

// Dense simplex tableau over the bounded standard form
//
//   min c'x  s.t.  A x + s + R a = b,  l <= x <= u,
//
// with one slack s_i per row (bounds encode the row relation) and one
// artificial a_i per row (R diagonal +-1) used only by phase 1. Columns are
// ordered [structural | slack | artificial]. The tableau T = B^-1 [A I R] and
// the transformed rhs B^-1 b depend on the basis only, never on the bounds,
// which is what lets branch and bound move between nodes by pivoting.
class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp);

  // Phase 1 + phase 2 from the slack/artificial starting basis.
  TableauStatus solve();

  // Re-optimises after bound changes. Uses the dual simplex when the basis is
  // dual feasible and falls back to a primal or cold solve otherwise.
  TableauStatus reoptimize();

  void set_bounds(int column, double lower, double upper);
  [[nodiscard]] double lower(int column) const { return lo_[column]; }
  [[nodiscard]] double upper(int column) const { return up_[column]; }

  [[nodiscard]] Basis basis() const;
  void load_basis(const Basis& basis);

  // Objective of the internal minimisation form.
  [[nodiscard]] double objective() const;
  [[nodiscard]] double value(int column) const { return x_[column]; }
  [[nodiscard]] std::vector<double> structural_values() const;

  [[nodiscard]] std::int64_t iterations() const { return iterations_; }

 private:
  void cold_start();
  void refactor(const std::vector<int>& head);
  void recompute_primal();
  // Moves nonbasic columns with wrong-signed reduced costs to the bound
  // that makes them dual feasible, when that bound is finite.
  void flip_to_dual_feasible();
  void recompute_reduced_costs();
  void pivot(int row, int col);
  [[nodiscard]] double nonbasic_value(int col) const;
  [[nodiscard]] bool dual_feasible() const;
  [[nodiscard]] bool primal_feasible() const;

  TableauStatus primal(const Eigen::VectorXd& cost);
  TableauStatus dual();
  TableauStatus phase_one_then_two();
  void after_pivot();

  int m_ = 0;
  int n_ = 0;
  int cols_ = 0;

  Eigen::MatrixXd a_;    // [A I R]
  Eigen::VectorXd b_;
  Eigen::VectorXd cost_;  // phase 2 costs, minimisation form
  Eigen::VectorXd active_cost_;

  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> t_;
  Eigen::VectorXd tb_;   // B^-1 b
  Eigen::VectorXd d_;    // reduced costs for active_cost_
  Eigen::VectorXd x_;
  Eigen::VectorXd lo_;
  Eigen::VectorXd up_;

  std::vector<int> head_;
  std::vector<int> row_of_;
  std::vector<VarState> state_;

  std::int64_t iterations_ = 0;
  int pivots_since_refactor_ = 0;
};

}  // namespace rorep::lp::detail
