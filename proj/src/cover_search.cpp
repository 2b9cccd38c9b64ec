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

#include "cover_search.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "rorep/errors.hpp"
#include "tableau.hpp"

namespace rorep::detail {
namespace {

using lp::detail::Basis;
using lp::detail::Tableau;
using lp::detail::TableauStatus;

constexpr double kDead = -std::numeric_limits<double>::infinity();
constexpr double kTolerance = 1e-9;

// U(a) - U(b) >= -1 and eps <= 1, so a switched-off pair row
// U(a) - U(b) - eps + 2 w >= 0 with w = 1 never binds.
constexpr double kSwitchCoefficient = 2.0;

// One value function with every pair row present and switched by the bounds
// of its own fixed variable, so assignments only move bounds and the
// tableau re-optimises warm.
class CopyModel {
 public:
  CopyModel(const ConstraintSystem& sys, const std::vector<AlternativePair>& strict,
            const std::vector<AlternativePair>& d)
      : block_(sys.block) {
    const Problem& p = sys.problem;
    lp::LinearProgram model = sys.lp;
    const Margin margin = Margin::variable(sys.epsilon);
    for (const auto& pr : strict) {
      add_strict_constraint(model, p, sys.block, pr.first, pr.second, margin, "sn");
    }
    for (std::size_t k = 0; k < d.size(); ++k) {
      const int w = model.add_variable("w" + std::to_string(k), 1.0, 1.0);
      switches_.push_back(w);
      add_strict_constraint(model, p, sys.block, d[k].first, d[k].second, margin, "d",
                            {lp::Term{w, kSwitchCoefficient}});
      differences_.push_back(sys.block.difference(p, d[k].first, d[k].second));
    }
    tableau_ = Tableau(model);
    if (tableau_.solve() != TableauStatus::kOptimal) {
      throw InternalError("compatible system has no optimal margin");
    }
  }

  [[nodiscard]] double margin() const { return -tableau_.objective(); }

  // Largest margin once pair k is added; the current one when the current
  // solution already ranks it.
  double probe(std::size_t k) {
    double diff = 0.0;
    for (const lp::Term& t : differences_[k]) diff += t.coef * tableau_.value(t.var);
    if (diff >= margin() - kTolerance) return margin();
    const Basis saved = tableau_.basis();
    const double value = activate(k) ? margin() : kDead;
    deactivate(k, saved);
    return value;
  }

  bool activate(std::size_t k) {
    tableau_.set_bounds(switches_[k], 0.0, 0.0);
    return tableau_.reoptimize() == TableauStatus::kOptimal;
  }

  void deactivate(std::size_t k, const Basis& saved) {
    tableau_.set_bounds(switches_[k], 1.0, 1.0);
    tableau_.load_basis(saved);
    tableau_.reoptimize();
  }

  [[nodiscard]] Basis basis() const { return tableau_.basis(); }

  [[nodiscard]] ValueFunction extract() const {
    return block_.extract(tableau_.structural_values(), "");
  }

 private:
  MarginalBlock block_;
  Tableau tableau_{lp::LinearProgram{}};
  std::vector<int> switches_;
  std::vector<std::vector<lp::Term>> differences_;
};

using ProbeTable = std::vector<std::vector<double>>;  // [copy][pair]

class Search {
 public:
  Search(const ConstraintSystem& sys, const std::vector<AlternativePair>& strict,
         const std::vector<AlternativePair>& d, const CoverSearchOptions& options)
      : options_(options),
        pairs_(d.size()),
        owner_(d.size(), -1),
        count_(static_cast<std::size_t>(options.copies), 0) {
    copies_.assign(static_cast<std::size_t>(options.copies), CopyModel(sys, strict, d));
  }

  CoverSearchResult run() {
    ProbeTable probes(copies_.size(), std::vector<double>(pairs_, kDead));
    for (std::size_t k = 0; k < pairs_; ++k) probes[0][k] = copies_[0].probe(k);
    for (std::size_t s = 1; s < copies_.size(); ++s) probes[s] = probes[0];
    dfs(probes);
    result_.nodes = nodes_;
    return result_;
  }

 private:
  [[nodiscard]] bool viable(double value) const {
    if (value < options_.target - kTolerance) return false;
    if (result_.found && options_.maximize && value <= result_.epsilon + kTolerance) return false;
    return true;
  }

  void refresh(ProbeTable& probes, std::size_t s) {
    for (std::size_t k = 0; k < pairs_; ++k) {
      double& v = probes[s][k];
      if (owner_[k] >= 0 || v == kDead) continue;
      v = viable(v) ? copies_[s].probe(k) : kDead;
    }
  }

  void record() {
    CoverSearchResult r;
    r.found = true;
    r.owner = owner_;
    r.epsilon = std::numeric_limits<double>::infinity();
    for (const CopyModel& c : copies_) {
      r.margins.push_back(c.margin());
      r.functions.push_back(c.extract());
      r.epsilon = std::min(r.epsilon, c.margin());
    }
    result_ = std::move(r);
    if (!options_.maximize) done_ = true;
  }

  void dfs(const ProbeTable& probes) {
    if (++nodes_ > options_.node_limit) {
      throw std::runtime_error("cover search node limit reached");
    }
    // Lowest and second-lowest copy margin, for "min over the other copies".
    double low = std::numeric_limits<double>::infinity();
    double second = low;
    std::size_t low_copy = 0;
    for (std::size_t s = 0; s < copies_.size(); ++s) {
      const double m = copies_[s].margin();
      if (m < low) {
        second = low;
        low = m;
        low_copy = s;
      } else if (m < second) {
        second = m;
      }
    }
    if (!viable(low)) return;

    // Most constrained uncovered pair; copies without pairs are
    // interchangeable, so only the first of them is tried.
    std::size_t chosen = pairs_;
    std::vector<std::pair<double, int>> chosen_options;
    double chosen_best = 0.0;
    for (std::size_t k = 0; k < pairs_; ++k) {
      if (owner_[k] >= 0) continue;
      std::vector<std::pair<double, int>> opts;
      bool empty_seen = false;
      for (std::size_t s = 0; s < copies_.size(); ++s) {
        if (count_[s] == 0) {
          if (empty_seen) continue;
          empty_seen = true;
        }
        const double v = probes[s][k];
        if (v == kDead) continue;
        const double value = std::min(v, s == low_copy ? second : low);
        if (viable(value)) opts.emplace_back(value, static_cast<int>(s));
      }
      if (opts.empty()) return;
      double best = kDead;
      for (const auto& o : opts) best = std::max(best, o.first);
      if (chosen == pairs_ || opts.size() < chosen_options.size() ||
          (opts.size() == chosen_options.size() && best < chosen_best)) {
        chosen = k;
        chosen_options = std::move(opts);
        chosen_best = best;
      }
    }
    if (chosen == pairs_) {
      record();
      return;
    }

    std::sort(chosen_options.begin(), chosen_options.end(),
              [](const auto& x, const auto& y) {
                return x.first != y.first ? x.first > y.first : x.second < y.second;
              });
    for (const auto& [value, copy] : chosen_options) {
      if (!viable(value)) continue;
      const auto s = static_cast<std::size_t>(copy);
      const Basis saved = copies_[s].basis();
      owner_[chosen] = copy;
      ++count_[s];
      if (copies_[s].activate(chosen)) {
        ProbeTable child = probes;
        refresh(child, s);
        dfs(child);
      }
      --count_[s];
      owner_[chosen] = -1;
      copies_[s].deactivate(chosen, saved);
      if (done_) return;
    }
  }

  CoverSearchOptions options_;
  std::size_t pairs_;
  std::vector<CopyModel> copies_;
  std::vector<int> owner_;
  std::vector<int> count_;
  CoverSearchResult result_;
  std::int64_t nodes_ = 0;
  bool done_ = false;
};

}  // namespace

CoverSearchResult cover_search(const ConstraintSystem& sys,
                               const std::vector<AlternativePair>& strict,
                               const std::vector<AlternativePair>& d,
                               const CoverSearchOptions& options) {
  if (options.copies < 1) throw ProblemError("cover search needs at least one copy");
  return Search(sys, strict, d, options).run();
}

}  // namespace rorep::detail
