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

#include "tableau.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rorep::lp::detail {
namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kOptimalityTolerance = 1e-9;
constexpr double kPrimalTolerance = 1e-10;
constexpr double kTieTolerance = 1e-12;
constexpr double kPhaseOneTolerance = 1e-8;
constexpr int kRefactorInterval = 300;
constexpr int kDegenerateRunBeforeBland = 20;

bool is_fixed(double lo, double up) { return lo == up; }

}  // namespace

Tableau::Tableau(const LinearProgram& lp)
    : m_(lp.num_constraints()), n_(lp.num_variables()), cols_(n_ + 2 * m_) {
  a_ = Eigen::MatrixXd::Zero(m_, cols_);
  b_.resize(m_);
  lo_.resize(cols_);
  up_.resize(cols_);
  cost_ = Eigen::VectorXd::Zero(cols_);

  for (int j = 0; j < n_; ++j) {
    lo_(j) = lp.variables()[static_cast<std::size_t>(j)].lower;
    up_(j) = lp.variables()[static_cast<std::size_t>(j)].upper;
  }
  for (int i = 0; i < m_; ++i) {
    const Constraint& c = lp.constraints()[static_cast<std::size_t>(i)];
    for (const Term& t : c.terms) a_(i, t.var) += t.coef;
    b_(i) = c.rhs;
    a_(i, n_ + i) = 1.0;
    switch (c.relation) {
      case Relation::kLessEqual: lo_(n_ + i) = 0.0; up_(n_ + i) = kInfinity; break;
      case Relation::kGreaterEqual: lo_(n_ + i) = -kInfinity; up_(n_ + i) = 0.0; break;
      case Relation::kEqual: lo_(n_ + i) = 0.0; up_(n_ + i) = 0.0; break;
    }
    a_(i, n_ + m_ + i) = 1.0;
    lo_(n_ + m_ + i) = 0.0;
    up_(n_ + m_ + i) = 0.0;
  }
  const double sign = lp.objective().sense == Sense::kMaximize ? -1.0 : 1.0;
  for (const Term& t : lp.objective().terms) cost_(t.var) += sign * t.coef;

  head_.assign(static_cast<std::size_t>(m_), -1);
  row_of_.assign(static_cast<std::size_t>(cols_), -1);
  state_.assign(static_cast<std::size_t>(cols_), VarState::kAtLower);
  x_ = Eigen::VectorXd::Zero(cols_);
  cold_start();
}

double Tableau::nonbasic_value(int col) const {
  switch (state_[static_cast<std::size_t>(col)]) {
    case VarState::kAtLower: return lo_(col);
    case VarState::kAtUpper: return up_(col);
    default: return 0.0;
  }
}

void Tableau::cold_start() {
  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(lo_(j))) {
      state_[static_cast<std::size_t>(j)] = VarState::kAtLower;
    } else if (std::isfinite(up_(j))) {
      state_[static_cast<std::size_t>(j)] = VarState::kAtUpper;
    } else {
      state_[static_cast<std::size_t>(j)] = VarState::kFreeZero;
    }
    x_(j) = nonbasic_value(j);
  }
  const Eigen::VectorXd residual = b_ - a_.leftCols(n_) * x_.head(n_);
  Eigen::VectorXd diag(m_);
  for (int i = 0; i < m_; ++i) {
    const int slack = n_ + i;
    const int art = n_ + m_ + i;
    const double r = residual(i);
    a_(i, art) = 1.0;
    lo_(art) = 0.0;
    up_(art) = 0.0;
    if (r >= lo_(slack) - kPrimalTolerance && r <= up_(slack) + kPrimalTolerance) {
      head_[static_cast<std::size_t>(i)] = slack;
      x_(slack) = r;
      state_[static_cast<std::size_t>(art)] = VarState::kAtLower;
      x_(art) = 0.0;
      diag(i) = 1.0;
    } else {
      const double v = std::clamp(r, lo_(slack), up_(slack));
      state_[static_cast<std::size_t>(slack)] =
          v == lo_(slack) ? VarState::kAtLower : VarState::kAtUpper;
      x_(slack) = v;
      const double rest = r - v;
      a_(i, art) = rest < 0 ? -1.0 : 1.0;
      up_(art) = kInfinity;
      head_[static_cast<std::size_t>(i)] = art;
      x_(art) = std::abs(rest);
      diag(i) = a_(i, art);
    }
  }
  std::fill(row_of_.begin(), row_of_.end(), -1);
  for (int i = 0; i < m_; ++i) {
    const int h = head_[static_cast<std::size_t>(i)];
    row_of_[static_cast<std::size_t>(h)] = i;
    state_[static_cast<std::size_t>(h)] = VarState::kBasic;
  }
  t_ = diag.cwiseInverse().asDiagonal() * a_;
  tb_ = diag.cwiseInverse().asDiagonal() * b_;
  pivots_since_refactor_ = 0;
  active_cost_ = cost_;
  recompute_reduced_costs();
}

void Tableau::refactor(const std::vector<int>& head) {
  Eigen::MatrixXd basis(m_, m_);
  for (int i = 0; i < m_; ++i) basis.col(i) = a_.col(head[static_cast<std::size_t>(i)]);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
  t_ = lu.solve(a_);
  tb_ = lu.solve(b_);
  head_ = head;
  std::fill(row_of_.begin(), row_of_.end(), -1);
  for (int i = 0; i < m_; ++i) {
    const int h = head_[static_cast<std::size_t>(i)];
    row_of_[static_cast<std::size_t>(h)] = i;
    state_[static_cast<std::size_t>(h)] = VarState::kBasic;
    t_.col(h).setZero();
    t_(i, h) = 1.0;
  }
  for (int j = 0; j < cols_; ++j) {
    if (state_[static_cast<std::size_t>(j)] == VarState::kBasic &&
        row_of_[static_cast<std::size_t>(j)] < 0) {
      state_[static_cast<std::size_t>(j)] =
          std::isfinite(lo_(j)) ? VarState::kAtLower
                                : (std::isfinite(up_(j)) ? VarState::kAtUpper : VarState::kFreeZero);
    }
  }
  pivots_since_refactor_ = 0;
  recompute_primal();
  recompute_reduced_costs();
}

void Tableau::recompute_primal() {
  Eigen::VectorXd nonbasic = Eigen::VectorXd::Zero(cols_);
  for (int j = 0; j < cols_; ++j) {
    if (state_[static_cast<std::size_t>(j)] != VarState::kBasic) {
      x_(j) = nonbasic_value(j);
      nonbasic(j) = x_(j);
    }
  }
  const Eigen::VectorXd basic = tb_ - t_ * nonbasic;
  for (int i = 0; i < m_; ++i) x_(head_[static_cast<std::size_t>(i)]) = basic(i);
}

void Tableau::recompute_reduced_costs() {
  Eigen::VectorXd cb(m_);
  for (int i = 0; i < m_; ++i) cb(i) = active_cost_(head_[static_cast<std::size_t>(i)]);
  d_ = active_cost_ - t_.transpose() * cb;
  for (int i = 0; i < m_; ++i) d_(head_[static_cast<std::size_t>(i)]) = 0.0;
}

void Tableau::pivot(int row, int col) {
  const double piv = t_(row, col);
  t_.row(row) /= piv;
  tb_(row) /= piv;
  t_(row, col) = 1.0;
  for (int i = 0; i < m_; ++i) {
    if (i == row) continue;
    const double f = t_(i, col);
    if (f == 0.0) continue;
    t_.row(i) -= f * t_.row(row);
    tb_(i) -= f * tb_(row);
    t_(i, col) = 0.0;
  }
  const double dq = d_(col);
  if (dq != 0.0) {
    d_ -= dq * t_.row(row).transpose();
    d_(col) = 0.0;
  }
  const int leaving = head_[static_cast<std::size_t>(row)];
  row_of_[static_cast<std::size_t>(leaving)] = -1;
  head_[static_cast<std::size_t>(row)] = col;
  row_of_[static_cast<std::size_t>(col)] = row;
  state_[static_cast<std::size_t>(col)] = VarState::kBasic;
  ++iterations_;
  ++pivots_since_refactor_;
}

void Tableau::after_pivot() {
  if (pivots_since_refactor_ >= kRefactorInterval) refactor(head_);
}

bool Tableau::dual_feasible() const {
  for (int j = 0; j < cols_; ++j) {
    if (is_fixed(lo_(j), up_(j))) continue;
    switch (state_[static_cast<std::size_t>(j)]) {
      case VarState::kBasic: break;
      case VarState::kAtLower:
        if (d_(j) < -kOptimalityTolerance) return false;
        break;
      case VarState::kAtUpper:
        if (d_(j) > kOptimalityTolerance) return false;
        break;
      case VarState::kFreeZero:
        if (std::abs(d_(j)) > kOptimalityTolerance) return false;
        break;
    }
  }
  return true;
}

bool Tableau::primal_feasible() const {
  for (int i = 0; i < m_; ++i) {
    const int k = head_[static_cast<std::size_t>(i)];
    if (x_(k) < lo_(k) - kPrimalTolerance || x_(k) > up_(k) + kPrimalTolerance) return false;
  }
  return true;
}

TableauStatus Tableau::primal(const Eigen::VectorXd& cost) {
  if (&cost != &active_cost_) {
    active_cost_ = cost;
    recompute_reduced_costs();
  }
  const std::int64_t limit = 200000 + 100LL * (m_ + cols_);
  std::int64_t steps = 0;
  int degenerate_run = 0;
  bool bland = false;
  for (;;) {
    if (++steps > limit) throw std::runtime_error("primal simplex iteration limit reached");

    int q = -1;
    int dir = 0;
    double best = 0.0;
    for (int j = 0; j < cols_; ++j) {
      const VarState s = state_[static_cast<std::size_t>(j)];
      if (s == VarState::kBasic || is_fixed(lo_(j), up_(j))) continue;
      const double dj = d_(j);
      int jdir = 0;
      if ((s == VarState::kAtLower || s == VarState::kFreeZero) && dj < -kOptimalityTolerance) {
        jdir = 1;
      } else if ((s == VarState::kAtUpper || s == VarState::kFreeZero) &&
                 dj > kOptimalityTolerance) {
        jdir = -1;
      }
      if (jdir == 0) continue;
      if (bland) {
        q = j;
        dir = jdir;
        break;
      }
      if (std::abs(dj) > best) {
        best = std::abs(dj);
        q = j;
        dir = jdir;
      }
    }
    if (q < 0) return TableauStatus::kOptimal;

    double theta = kInfinity;
    int leave_row = -1;
    double leave_alpha = 0.0;
    if (std::isfinite(lo_(q)) && std::isfinite(up_(q))) theta = up_(q) - lo_(q);
    for (int i = 0; i < m_; ++i) {
      const double alpha = dir * t_(i, q);
      if (std::abs(alpha) <= kPivotTolerance) continue;
      const int k = head_[static_cast<std::size_t>(i)];
      double lim;
      if (alpha > 0) {
        if (!std::isfinite(lo_(k))) continue;
        lim = (x_(k) - lo_(k)) / alpha;
      } else {
        if (!std::isfinite(up_(k))) continue;
        lim = (up_(k) - x_(k)) / -alpha;
      }
      lim = std::max(lim, 0.0);
      bool take = lim < theta - kTieTolerance;
      if (!take && leave_row >= 0 && std::abs(lim - theta) <= kTieTolerance) {
        take = bland ? k < head_[static_cast<std::size_t>(leave_row)]
                     : std::abs(alpha) > std::abs(leave_alpha);
      }
      if (take) {
        theta = lim;
        leave_row = i;
        leave_alpha = alpha;
      }
    }
    if (!std::isfinite(theta)) return TableauStatus::kUnbounded;

    if (theta > 0) {
      x_(q) += dir * theta;
      for (int i = 0; i < m_; ++i) {
        const double tq = t_(i, q);
        if (tq != 0.0) x_(head_[static_cast<std::size_t>(i)]) -= dir * theta * tq;
      }
    }
    if (leave_row < 0) {
      state_[static_cast<std::size_t>(q)] =
          dir > 0 ? VarState::kAtUpper : VarState::kAtLower;
      x_(q) = nonbasic_value(q);
      ++iterations_;
    } else {
      const int k = head_[static_cast<std::size_t>(leave_row)];
      state_[static_cast<std::size_t>(k)] =
          leave_alpha > 0 ? VarState::kAtLower : VarState::kAtUpper;
      x_(k) = nonbasic_value(k);
      pivot(leave_row, q);
      after_pivot();
    }
    if (theta <= kTieTolerance) {
      if (++degenerate_run > kDegenerateRunBeforeBland) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
}

TableauStatus Tableau::dual() {
  const std::int64_t limit = 200000 + 100LL * (m_ + cols_);
  std::int64_t steps = 0;
  for (;;) {
    if (++steps > limit) throw std::runtime_error("dual simplex iteration limit reached");

    // Dual steepest edge: the slack block of T is B^-1, so the weight of a
    // row is the squared norm of its slice there.
    int r = -1;
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int k = head_[static_cast<std::size_t>(i)];
      const double viol = std::max(lo_(k) - x_(k), x_(k) - up_(k));
      if (viol <= kPrimalTolerance) continue;
      const double score = viol * viol / t_.row(i).segment(n_, m_).squaredNorm();
      if (score > worst) {
        worst = score;
        r = i;
      }
    }
    if (r < 0) return TableauStatus::kOptimal;

    const int k = head_[static_cast<std::size_t>(r)];
    const bool below = x_(k) < lo_(k);
    const double target = below ? lo_(k) : up_(k);

    int q = -1;
    double best = kInfinity;
    double best_abs = 0.0;
    for (int j = 0; j < cols_; ++j) {
      const VarState s = state_[static_cast<std::size_t>(j)];
      if (s == VarState::kBasic || is_fixed(lo_(j), up_(j))) continue;
      const double a = t_(r, j);
      if (std::abs(a) <= kPivotTolerance) continue;
      bool eligible = s == VarState::kFreeZero;
      if (s == VarState::kAtLower) eligible = below ? a < 0 : a > 0;
      if (s == VarState::kAtUpper) eligible = below ? a > 0 : a < 0;
      if (!eligible) continue;
      const double ratio = std::abs(d_(j)) / std::abs(a);
      if (ratio < best - kTieTolerance ||
          (std::abs(ratio - best) <= kTieTolerance && std::abs(a) > best_abs)) {
        best = ratio;
        best_abs = std::abs(a);
        q = j;
      }
    }
    if (q < 0) return TableauStatus::kInfeasible;

    const double delta = (x_(k) - target) / t_(r, q);
    x_(q) += delta;
    for (int i = 0; i < m_; ++i) {
      const double tq = t_(i, q);
      if (tq != 0.0) x_(head_[static_cast<std::size_t>(i)]) -= delta * tq;
    }
    state_[static_cast<std::size_t>(k)] = below ? VarState::kAtLower : VarState::kAtUpper;
    x_(k) = target;
    pivot(r, q);
    after_pivot();
  }
}

TableauStatus Tableau::phase_one_then_two() {
  cold_start();
  bool needs_phase_one = false;
  Eigen::VectorXd phase_one = Eigen::VectorXd::Zero(cols_);
  for (int i = 0; i < m_; ++i) {
    const int art = n_ + m_ + i;
    if (std::isinf(up_(art))) {
      phase_one(art) = 1.0;
      needs_phase_one = true;
    }
  }
  if (needs_phase_one) {
    primal(phase_one);
    const double infeasibility = phase_one.dot(x_);
    const double scale = 1.0 + b_.cwiseAbs().maxCoeff();
    for (int i = 0; i < m_; ++i) up_(n_ + m_ + i) = 0.0;
    if (infeasibility > kPhaseOneTolerance * scale) {
      active_cost_ = cost_;
      recompute_reduced_costs();
      return TableauStatus::kInfeasible;
    }
  }
  return primal(cost_);
}

TableauStatus Tableau::solve() { return phase_one_then_two(); }

void Tableau::flip_to_dual_feasible() {
  bool moved = false;
  for (int j = 0; j < cols_; ++j) {
    auto& s = state_[static_cast<std::size_t>(j)];
    if (s == VarState::kBasic || is_fixed(lo_(j), up_(j))) continue;
    if (d_(j) < -kOptimalityTolerance && s != VarState::kAtUpper && std::isfinite(up_(j))) {
      s = VarState::kAtUpper;
      moved = true;
    } else if (d_(j) > kOptimalityTolerance && s != VarState::kAtLower &&
               std::isfinite(lo_(j))) {
      s = VarState::kAtLower;
      moved = true;
    }
  }
  if (moved) recompute_primal();
}

TableauStatus Tableau::reoptimize() {
  if (active_cost_ != cost_) {
    active_cost_ = cost_;
    recompute_reduced_costs();
  }
  flip_to_dual_feasible();
  if (!dual_feasible()) {
    if (primal_feasible()) return primal(cost_);
    return phase_one_then_two();
  }
  if (dual() == TableauStatus::kInfeasible) return TableauStatus::kInfeasible;
  if (!dual_feasible()) return primal(cost_);
  return TableauStatus::kOptimal;
}

void Tableau::set_bounds(int column, double lower, double upper) {
  lo_(column) = lower;
  up_(column) = upper;
  auto& s = state_[static_cast<std::size_t>(column)];
  if (s == VarState::kBasic) return;
  if (s == VarState::kAtLower && !std::isfinite(lower)) {
    s = std::isfinite(upper) ? VarState::kAtUpper : VarState::kFreeZero;
  } else if (s == VarState::kAtUpper && !std::isfinite(upper)) {
    s = std::isfinite(lower) ? VarState::kAtLower : VarState::kFreeZero;
  } else if (s == VarState::kFreeZero && std::isfinite(lower)) {
    s = VarState::kAtLower;
  }
  const double old = x_(column);
  const double now = nonbasic_value(column);
  if (now == old) return;
  x_(column) = now;
  const double delta = now - old;
  for (int i = 0; i < m_; ++i) {
    const double tc = t_(i, column);
    if (tc != 0.0) x_(head_[static_cast<std::size_t>(i)]) -= delta * tc;
  }
}

Basis Tableau::basis() const { return Basis{head_, state_}; }

void Tableau::load_basis(const Basis& basis) {
  std::vector<char> wanted(static_cast<std::size_t>(cols_), 0);
  for (int h : basis.head) wanted[static_cast<std::size_t>(h)] = 1;
  bool refactored = false;
  for (int q : basis.head) {
    if (row_of_[static_cast<std::size_t>(q)] >= 0) continue;
    int r = -1;
    double best = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (wanted[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])]) continue;
      const double a = std::abs(t_(i, q));
      if (a > best) {
        best = a;
        r = i;
      }
    }
    if (r < 0 || best < 1e-7) {
      refactor(basis.head);
      refactored = true;
      break;
    }
    state_[static_cast<std::size_t>(head_[static_cast<std::size_t>(r)])] = VarState::kAtLower;
    pivot(r, q);
  }
  for (int j = 0; j < cols_; ++j) {
    if (row_of_[static_cast<std::size_t>(j)] >= 0) {
      state_[static_cast<std::size_t>(j)] = VarState::kBasic;
      continue;
    }
    VarState s = basis.state[static_cast<std::size_t>(j)];
    if (s == VarState::kBasic) s = VarState::kAtLower;
    if (s == VarState::kAtLower && !std::isfinite(lo_(j))) {
      s = std::isfinite(up_(j)) ? VarState::kAtUpper : VarState::kFreeZero;
    } else if (s == VarState::kAtUpper && !std::isfinite(up_(j))) {
      s = std::isfinite(lo_(j)) ? VarState::kAtLower : VarState::kFreeZero;
    }
    state_[static_cast<std::size_t>(j)] = s;
  }
  if (!refactored && pivots_since_refactor_ >= kRefactorInterval) {
    refactor(head_);
  } else {
    recompute_primal();
  }
  if (active_cost_ != cost_) {
    active_cost_ = cost_;
    recompute_reduced_costs();
  }
}

double Tableau::objective() const { return cost_.dot(x_); }

std::vector<double> Tableau::structural_values() const {
  return std::vector<double>(x_.data(), x_.data() + n_);
}

}  // namespace rorep::lp::detail
