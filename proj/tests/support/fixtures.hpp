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

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "rorep/problem.hpp"
#include "rorep/ror.hpp"

namespace rorep::testing {

// The ten-country democracy table.
inline RawTable democracy_table() {
  RawTable t;
  t.alternatives = {"a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9", "a10"};
  t.criteria = {"g1", "g2", "g3", "g4", "g5"};
  t.scores.resize(10, 5);
  t.scores << 6.92, 7.14, 5.00, 6.25, 6.76,  //
      9.17, 7.86, 5.56, 8.75, 9.41,          //
      5.75, 1.86, 2.78, 5.00, 5.00,          //
      6.08, 5.71, 4.44, 7.50, 6.18,          //
      9.17, 6.08, 3.89, 5.63, 8.24,          //
      7.33, 6.43, 4.44, 6.25, 8.24,          //
      9.17, 5.36, 5.00, 3.75, 9.12,          //
      4.33, 7.50, 2.78, 7.50, 7.35,          //
      9.58, 7.50, 6.67, 5.63, 9.71,          //
      7.00, 5.57, 5.00, 6.25, 8.24;
  return t;
}

inline Problem democracy_problem() { return build_problem(democracy_table()); }

inline PreferenceStatement strict(std::string a, std::string b) {
  return {PreferenceStatement::Kind::kStrict, std::move(a), std::move(b)};
}

inline PreferenceStatement indifferent(std::string a, std::string b) {
  return {PreferenceStatement::Kind::kIndifference, std::move(a), std::move(b)};
}

inline std::vector<PreferenceStatement> democracy_statements() {
  return {strict("a4", "a5"), strict("a8", "a10"), strict("a7", "a6")};
}

// Reference necessary relation, row per alternative ('N' = holds).
inline BoolMatrix democracy_necessary() {
  const char* rows[] = {
      "N.N.......",  //
      "NNNNNNNN.N",  //
      "..N.......",  //
      "..NNN.....",  //
      "..N.N.....",  //
      "..N..N....",  //
      "..N..NN...",  //
      "..N....N.N",  //
      "..N.NNN.N.",  //
      "..N......N",
  };
  BoolMatrix m(10, 10);
  for (int a = 0; a < 10; ++a) {
    for (int b = 0; b < 10; ++b) m(a, b) = rows[a][b] == 'N';
  }
  return m;
}

struct Instance {
  Problem problem;
  std::vector<PreferenceStatement> statements;
};

// Small random problem with statements drawn from a hidden additive value
// function, so the statements are compatible by construction. Scores come
// from a coarse grid to produce ties and shared characteristic points.
inline Instance random_instance(std::mt19937_64& rng, int max_alternatives = 6,
                                int max_criteria = 3, int max_statements = 3,
                                int min_alternatives = 2) {
  std::uniform_int_distribution<int> n_dist(min_alternatives, max_alternatives);
  std::uniform_int_distribution<int> m_dist(1, max_criteria);
  std::uniform_int_distribution<int> score(1, 5);
  std::bernoulli_distribution cost(0.25);
  const int n = n_dist(rng);
  const int m = m_dist(rng);

  RawTable t;
  for (int a = 0; a < n; ++a) t.alternatives.push_back("x" + std::to_string(a + 1));
  for (int i = 0; i < m; ++i) {
    t.criteria.push_back("c" + std::to_string(i + 1));
    t.directions.push_back(cost(rng) ? Direction::kCost : Direction::kGain);
  }
  t.scores.resize(n, m);
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < m; ++i) t.scores(a, i) = score(rng);
  }
  Instance inst{build_problem(t), {}};
  const Problem& p = inst.problem;

  // Hidden function: random nonnegative steps between adjacent points.
  std::uniform_real_distribution<double> step(0.0, 1.0);
  std::vector<std::vector<double>> u(static_cast<std::size_t>(m));
  double top = 0.0;
  for (int i = 0; i < m; ++i) {
    auto& ui = u[static_cast<std::size_t>(i)];
    ui.push_back(0.0);
    for (std::size_t k = 1; k < p.criterion(i).points.size(); ++k) ui.push_back(ui.back() + step(rng));
    top += ui.back();
  }
  std::vector<double> value(static_cast<std::size_t>(n), 0.0);
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < m; ++i) {
      const double v = top > 0 ? u[static_cast<std::size_t>(i)][static_cast<std::size_t>(p.level(a, i))] / top : 0.0;
      value[static_cast<std::size_t>(a)] += v;
    }
  }

  std::uniform_int_distribution<int> k_dist(0, max_statements);
  std::uniform_int_distribution<int> alt(0, n - 1);
  const int k = k_dist(rng);
  for (int tries = 0; static_cast<int>(inst.statements.size()) < k && tries < 50; ++tries) {
    const int a = alt(rng);
    const int b = alt(rng);
    const auto& ids = p.alternatives();
    if (value[static_cast<std::size_t>(a)] - value[static_cast<std::size_t>(b)] > 0.05) {
      inst.statements.push_back(strict(ids[static_cast<std::size_t>(a)], ids[static_cast<std::size_t>(b)]));
    } else if (a != b && (p.performance().row(a).array() == p.performance().row(b).array()).all()) {
      inst.statements.push_back(indifferent(ids[static_cast<std::size_t>(a)], ids[static_cast<std::size_t>(b)]));
    }
  }
  return inst;
}

}  // namespace rorep::testing
