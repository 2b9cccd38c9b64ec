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

#include "rorep/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rorep/value_function.hpp"

namespace rorep {

std::string_view to_string(Direction d) { return d == Direction::kGain ? "gain" : "cost"; }

std::optional<int> Criterion::point_index(double value) const {
  auto it = std::lower_bound(points.begin(), points.end(), value);
  if (it == points.end() || *it != value) return std::nullopt;
  return static_cast<int>(it - points.begin());
}

int Problem::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw UnknownAlternative(std::string(id));
  return it->second;
}

bool Problem::contains(std::string_view id) const { return index_.count(std::string(id)) != 0; }

Problem build_problem(const RawTable& table,
                      const std::map<std::string, ScaleOverride>& overrides) {
  const auto n = static_cast<Eigen::Index>(table.alternatives.size());
  const auto m = static_cast<Eigen::Index>(table.criteria.size());
  if (n == 0 || m == 0) throw ProblemError("empty performance table");
  if (table.scores.rows() != n || table.scores.cols() != m) {
    throw ProblemError("score matrix is " + std::to_string(table.scores.rows()) + "x" +
                       std::to_string(table.scores.cols()) + ", expected " + std::to_string(n) +
                       "x" + std::to_string(m));
  }
  if (!table.directions.empty() && static_cast<Eigen::Index>(table.directions.size()) != m) {
    throw ProblemError("one direction per criterion is required");
  }
  if (!table.scores.allFinite()) {
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index i = 0; i < m; ++i) {
        if (!std::isfinite(table.scores(a, i))) {
          throw ProblemError("non-finite score for '" +
                             table.alternatives[static_cast<std::size_t>(a)] + "' on '" +
                             table.criteria[static_cast<std::size_t>(i)] + "'");
        }
      }
    }
  }

  Problem p;
  p.alternatives_ = table.alternatives;
  for (int a = 0; a < n; ++a) {
    const std::string& id = p.alternatives_[static_cast<std::size_t>(a)];
    if (id.empty()) throw ProblemError("empty alternative id");
    if (!p.index_.emplace(id, a).second) {
      throw ProblemError("duplicate alternative id '" + id + "'");
    }
  }
  {
    std::set<std::string> seen;
    for (const auto& c : table.criteria) {
      if (!seen.insert(c).second) throw ProblemError("duplicate criterion id '" + c + "'");
    }
  }
  for (const auto& [id, _] : overrides) {
    if (std::find(table.criteria.begin(), table.criteria.end(), id) == table.criteria.end()) {
      throw ProblemError("scale override for unknown criterion '" + id + "'");
    }
  }

  p.performance_ = table.scores;
  p.levels_.resize(n, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    Criterion c;
    c.id = table.criteria[static_cast<std::size_t>(i)];
    c.direction = table.directions.empty() ? Direction::kGain
                                           : table.directions[static_cast<std::size_t>(i)];
    const double sign = c.direction == Direction::kCost ? -1.0 : 1.0;
    p.performance_.col(i) *= sign;
    // -0.0 and 0.0 must map to the same characteristic point.
    p.performance_.col(i) = p.performance_.col(i).unaryExpr([](double v) { return v + 0.0; });

    std::set<double> distinct(p.performance_.col(i).begin(), p.performance_.col(i).end());
    c.alpha = *distinct.begin();
    c.beta = *distinct.rbegin();
    if (auto it = overrides.find(c.id); it != overrides.end()) {
      if (it->second.worst) {
        const double alpha = sign * *it->second.worst + 0.0;
        if (alpha > c.alpha) {
          throw ProblemError("worst value of '" + c.id + "' lies inside the observed range");
        }
        c.alpha = alpha;
      }
      if (it->second.best) {
        const double beta = sign * *it->second.best + 0.0;
        if (beta < c.beta) {
          throw ProblemError("best value of '" + c.id + "' lies inside the observed range");
        }
        c.beta = beta;
      }
      distinct.insert(c.alpha);
      distinct.insert(c.beta);
    }
    c.points.assign(distinct.begin(), distinct.end());
    for (Eigen::Index a = 0; a < n; ++a) p.levels_(a, i) = *c.point_index(p.performance_(a, i));
    p.criteria_.push_back(std::move(c));
  }
  return p;
}

bool dominates(const Problem& p, int a, int b) {
  return (p.performance().row(a).array() >= p.performance().row(b).array()).all();
}

bool dominates(const Problem& p, std::string_view a, std::string_view b) {
  return dominates(p, p.index_of(a), p.index_of(b));
}

std::string to_string(const PreferenceStatement& s) {
  return s.a + (s.kind == PreferenceStatement::Kind::kStrict ? " > " : " = ") + s.b;
}

void validate_statements(const Problem& p, const std::vector<PreferenceStatement>& statements) {
  for (const auto& s : statements) {
    (void)p.index_of(s.a);
    (void)p.index_of(s.b);
    if (s.kind == PreferenceStatement::Kind::kStrict && s.a == s.b) {
      throw ProblemError("strict self-preference '" + to_string(s) + "'");
    }
  }
}

IncompatiblePreferences::IncompatiblePreferences(std::vector<PreferenceStatement> statements)
    : std::runtime_error([&] {
        std::string msg = "no compatible value function satisfies the statements:";
        for (const auto& s : statements) msg += " [" + to_string(s) + "]";
        return msg;
      }()),
      statements_(std::move(statements)) {}

// ---------------------------------------------------------------------------

double evaluate(const ValueFunction& f, const Problem& p, int alternative) {
  double total = 0.0;
  for (int i = 0; i < p.num_criteria(); ++i) total += f.marginal(i, p.level(alternative, i));
  return total;
}

double evaluate(const ValueFunction& f, const Problem& p, std::string_view alternative) {
  return evaluate(f, p, p.index_of(alternative));
}

double evaluate_scores(const ValueFunction& f, const Problem& p,
                       const Eigen::Ref<const Eigen::VectorXd>& scores) {
  if (scores.size() != p.num_criteria()) throw ProblemError("score vector has wrong length");
  double total = 0.0;
  for (int i = 0; i < p.num_criteria(); ++i) {
    const auto level = p.criterion(i).point_index(scores(i));
    if (!level) {
      throw ProblemError("score " + std::to_string(scores(i)) +
                         " is not a characteristic point of '" + p.criterion(i).id + "'");
    }
    total += f.marginal(i, *level);
  }
  return total;
}

Eigen::VectorXd evaluate_all(const ValueFunction& f, const Problem& p) {
  Eigen::VectorXd u(p.num_alternatives());
  for (int a = 0; a < p.num_alternatives(); ++a) u(a) = evaluate(f, p, a);
  return u;
}

std::optional<std::string> check_value_function(const ValueFunction& f, const Problem& p,
                                                double tol) {
  if (static_cast<int>(f.marginals.size()) != p.num_criteria()) {
    return "expected " + std::to_string(p.num_criteria()) + " marginal functions";
  }
  double top = 0.0;
  bool scaled = false;
  for (int i = 0; i < p.num_criteria(); ++i) {
    const auto& u = f.marginals[static_cast<std::size_t>(i)];
    const auto& c = p.criterion(i);
    scaled = scaled || c.points.size() > 1;
    if (u.size() != static_cast<Eigen::Index>(c.points.size())) {
      return "criterion '" + c.id + "' has " + std::to_string(u.size()) + " marginal values";
    }
    if (!u.allFinite()) return "criterion '" + c.id + "' has non-finite marginal values";
    if (std::abs(u(0)) > tol) return "u(alpha) != 0 on '" + c.id + "'";
    for (Eigen::Index k = 1; k < u.size(); ++k) {
      if (u(k) < u(k - 1) - tol) return "marginal on '" + c.id + "' decreases";
    }
    top += u(u.size() - 1);
  }
  if (scaled && std::abs(top - 1.0) > tol) return "sum of u(beta) is " + std::to_string(top) + ", not 1";
  return std::nullopt;
}

}  // namespace rorep
