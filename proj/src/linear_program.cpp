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

#include "rorep/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rorep::lp {
namespace {

void check_term(const Term& term, int num_vars, std::string_view where) {
  if (term.var < 0 || term.var >= num_vars) {
    throw ModelError("undeclared variable index " + std::to_string(term.var) + " in " +
                     std::string(where));
  }
  if (!std::isfinite(term.coef)) {
    throw ModelError("non-finite coefficient in " + std::string(where));
  }
}

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

void write_terms(std::ostringstream& out, const std::vector<Term>& terms,
                 const std::vector<Variable>& vars) {
  if (terms.empty()) {
    out << " 0";
    return;
  }
  bool first = true;
  for (const Term& t : terms) {
    if (t.coef < 0) {
      out << " - " << format_number(-t.coef) << ' ';
    } else {
      out << (first ? " " : " + ") << format_number(t.coef) << ' ';
    }
    out << vars[static_cast<std::size_t>(t.var)].name;
    first = false;
  }
}

}  // namespace

int LinearProgram::add_variable(std::string name, double lower, double upper) {
  const int index = num_variables();
  if (name.empty()) name = "x" + std::to_string(index);
  if (!index_by_name_.emplace(name, index).second) {
    throw ModelError("duplicate variable name '" + name + "'");
  }
  variables_.push_back(Variable{std::move(name), lower, upper});
  return index;
}

int LinearProgram::add_constraint(std::vector<Term> terms, Relation relation, double rhs,
                                  std::string name) {
  const int index = num_constraints();
  if (name.empty()) name = "c" + std::to_string(index);
  constraints_.push_back(Constraint{std::move(terms), relation, rhs, std::move(name)});
  return index;
}

void LinearProgram::set_objective(std::vector<Term> terms, Sense sense, double offset) {
  objective_ = Objective{std::move(terms), sense, offset};
}

int LinearProgram::variable_index(std::string_view name) const {
  auto it = index_by_name_.find(std::string(name));
  if (it == index_by_name_.end()) {
    throw ModelError("undeclared variable '" + std::string(name) + "'");
  }
  return it->second;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  if (var < 0 || var >= num_variables()) {
    throw ModelError("undeclared variable index " + std::to_string(var));
  }
  variables_[static_cast<std::size_t>(var)].lower = lower;
  variables_[static_cast<std::size_t>(var)].upper = upper;
}

void LinearProgram::validate() const {
  const int n = num_variables();
  for (const Variable& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
        v.lower == kInfinity || v.upper == -kInfinity) {
      throw ModelError("invalid bounds for variable '" + v.name + "'");
    }
  }
  for (const Constraint& c : constraints_) {
    for (const Term& t : c.terms) check_term(t, n, "constraint '" + c.name + "'");
    if (!std::isfinite(c.rhs)) {
      throw ModelError("non-finite rhs in constraint '" + c.name + "'");
    }
  }
  for (const Term& t : objective_.terms) check_term(t, n, "objective");
  if (!std::isfinite(objective_.offset)) throw ModelError("non-finite objective offset");
}

double LinearProgram::objective_value(const std::vector<double>& values) const {
  double total = objective_.offset;
  for (const Term& t : objective_.terms) total += t.coef * values[static_cast<std::size_t>(t.var)];
  return total;
}

double LinearProgram::max_violation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (int j = 0; j < num_variables(); ++j) {
    const Variable& v = variables_[static_cast<std::size_t>(j)];
    const double x = values[static_cast<std::size_t>(j)];
    worst = std::max({worst, v.lower - x, x - v.upper});
  }
  for (const Constraint& c : constraints_) {
    double lhs = 0.0;
    for (const Term& t : c.terms) lhs += t.coef * values[static_cast<std::size_t>(t.var)];
    switch (c.relation) {
      case Relation::kLessEqual: worst = std::max(worst, lhs - c.rhs); break;
      case Relation::kGreaterEqual: worst = std::max(worst, c.rhs - lhs); break;
      case Relation::kEqual: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  return worst;
}

int MixedIntegerProgram::add_binary(std::string name) {
  const int index = base.add_variable(std::move(name), 0.0, 1.0);
  binaries.push_back(index);
  return index;
}

void MixedIntegerProgram::validate() const {
  base.validate();
  std::vector<char> seen(static_cast<std::size_t>(base.num_variables()), 0);
  for (int b : binaries) {
    if (b < 0 || b >= base.num_variables()) {
      throw ModelError("binary index " + std::to_string(b) + " is not a declared variable");
    }
    if (seen[static_cast<std::size_t>(b)]++) {
      throw ModelError("binary index " + std::to_string(b) + " listed twice");
    }
    const Variable& v = base.variables()[static_cast<std::size_t>(b)];
    if (v.lower != 0.0 || v.upper != 1.0) {
      throw ModelError("binary '" + v.name + "' must have bounds [0,1]");
    }
  }
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

std::string lp_body(const LinearProgram& lp, std::string_view comment) {
  std::ostringstream out;
  if (!comment.empty()) out << "\\ " << comment << '\n';
  const auto& vars = lp.variables();
  out << (lp.objective().sense == Sense::kMaximize ? "Maximize\n" : "Minimize\n");
  out << " obj:";
  write_terms(out, lp.objective().terms, vars);
  if (lp.objective().offset != 0.0) out << " + " << format_number(lp.objective().offset);
  out << "\nSubject To\n";
  for (const Constraint& c : lp.constraints()) {
    out << ' ' << c.name << ':';
    write_terms(out, c.terms, vars);
    switch (c.relation) {
      case Relation::kLessEqual: out << " <= "; break;
      case Relation::kEqual: out << " = "; break;
      case Relation::kGreaterEqual: out << " >= "; break;
    }
    out << format_number(c.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const Variable& v : vars) {
    if (v.lower == -kInfinity && v.upper == kInfinity) {
      out << ' ' << v.name << " free\n";
    } else if (v.upper == kInfinity) {
      out << ' ' << v.name << " >= " << format_number(v.lower) << '\n';
    } else if (v.lower == -kInfinity) {
      out << " -inf <= " << v.name << " <= " << format_number(v.upper) << '\n';
    } else {
      out << ' ' << format_number(v.lower) << " <= " << v.name << " <= "
          << format_number(v.upper) << '\n';
    }
  }
  return out.str();
}

}  // namespace

std::string to_lp_format(const LinearProgram& lp, std::string_view comment) {
  return lp_body(lp, comment) + "End\n";
}

std::string to_lp_format(const MixedIntegerProgram& mip, std::string_view comment) {
  std::string text = lp_body(mip.base, comment);
  if (!mip.binaries.empty()) {
    text += "Binaries\n";
    for (int b : mip.binaries) {
      text += ' ';
      text += mip.base.variables()[static_cast<std::size_t>(b)].name;
      text += '\n';
    }
  }
  text += "End\n";
  return text;
}

}  // namespace rorep::lp
