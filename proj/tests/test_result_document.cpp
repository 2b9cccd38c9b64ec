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

#include <algorithm>
#include <json.hpp>

#include "rorep/result_document.hpp"
#include "support/fixtures.hpp"

using namespace rorep;

namespace {

struct DemocracyRun {
  Problem problem = rorep::testing::democracy_problem();
  std::vector<PreferenceStatement> statements = rorep::testing::democracy_statements();
  RepresentativeParams params;
  Analysis analysis;
  DemocracyRun() { analysis = analyze(base_system(problem, statements), params); }
};

const DemocracyRun& democracy_run() {
  static const DemocracyRun run;
  return run;
}

ResultDocument full_document() {
  const DemocracyRun& run = democracy_run();
  ResultDocument doc = make_document(run.problem, run.statements, run.params);
  add_analysis(doc, run.problem, run.analysis);
  return doc;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("document echoes the problem in raw orientation") {
  RawTable t;
  t.alternatives = {"a", "b"};
  t.criteria = {"price"};
  t.directions = {Direction::kCost};
  t.scores.resize(2, 1);
  t.scores << 10, 20;
  const Problem p = build_problem(t);
  const ResultDocument doc = make_document(p, {rorep::testing::strict("a", "b")}, {});
  REQUIRE(doc.criteria.size() == 1);
  CHECK(doc.criteria[0].direction == Direction::kCost);
  CHECK(doc.criteria[0].alpha == 20.0);
  CHECK(doc.criteria[0].beta == 10.0);
  CHECK(doc.criteria[0].points == std::vector<double>{20.0, 10.0});
  CHECK(doc.scores == std::vector<std::vector<double>>{{10.0}, {20.0}});
  CHECK(doc.statements == std::vector<std::string>{"a > b"});
  CHECK_FALSE(doc.relations.has_value());
  CHECK_FALSE(doc.discriminant.has_value());
}

TEST_CASE("full document json round trip") {
  const ResultDocument doc = full_document();
  const std::string text = serialize_results(doc, Format::kJson);
  CHECK(text.ends_with("\n"));
  const ResultDocument back = parse_result_json(text);
  CHECK(back == doc);
  CHECK(serialize_results(back, Format::kJson) == text);
}

TEST_CASE("json field contract") {
  const ResultDocument doc = full_document();
  const auto j = nlohmann::json::parse(serialize_results(doc, Format::kJson));
  const nlohmann::ordered_json o = nlohmann::ordered_json::parse(serialize_results(doc, Format::kJson));
  std::vector<std::string> keys;
  for (const auto& [k, v] : o.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"problem", "relations", "sufficient", "minimality",
                                         "discriminant", "provenance"});
  CHECK(j["relations"]["counts"]["necessary"] == 32);
  CHECK(j["relations"]["counts"]["strict"] == 22);
  CHECK(j["relations"]["counts"]["d"] == 46);
  CHECK(j["relations"]["d_pairs"].size() == 46);
  CHECK(j["relations"]["necessary"][1][0] == "N");
  CHECK(j["relations"]["necessary"][0][1] == "");
  CHECK(j["minimality"]["t"] == 3);
  CHECK(j["discriminant"]["functions"].size() == 3);
  CHECK(j["discriminant"]["epsilon_star"].get<double>() == doctest::Approx(1.0 / 11.0).epsilon(1e-4));
  CHECK(j["discriminant"]["coverage"].size() == 22 + 46);
  CHECK(j["provenance"]["tool"] == "rorep");
  CHECK(j["provenance"]["big_m"] == 10.0);
  const auto& f = j["discriminant"]["functions"][0];
  CHECK(f["values"].size() == 10);
  CHECK(f["marginals"].size() == 5);
  CHECK(f["marginals"][0]["criterion"] == "g1");
  CHECK(f["marginals"][0]["points"].size() == 8);
}

TEST_CASE("coverage entries point at functions that rank a above b") {
  const ResultDocument doc = full_document();
  REQUIRE(doc.discriminant.has_value());
  const auto& alts = doc.alternatives;
  auto index = [&](const std::string& id) {
    return static_cast<std::size_t>(std::find(alts.begin(), alts.end(), id) - alts.begin());
  };
  for (const auto& entry : doc.discriminant->coverage) {
    CHECK((entry.kind == "strict" || entry.kind == "incomparable"));
    CHECK_FALSE(entry.functions.empty());
    for (const auto& label : entry.functions) {
      const auto it = std::find_if(doc.discriminant->functions.begin(),
                                   doc.discriminant->functions.end(),
                                   [&](const auto& f) { return f.label == label; });
      REQUIRE(it != doc.discriminant->functions.end());
      CHECK(it->values[index(entry.a)] > it->values[index(entry.b)]);
    }
  }
}

TEST_CASE("relations-only document") {
  const DemocracyRun& run = democracy_run();
  ResultDocument doc = make_document(run.problem, run.statements, run.params);
  add_relations(doc, run.problem, run.analysis.relations);
  const std::string text = serialize_results(doc, Format::kJson);
  const auto j = nlohmann::json::parse(text);
  CHECK(j.contains("relations"));
  CHECK_FALSE(j.contains("sufficient"));
  CHECK_FALSE(j.contains("discriminant"));
  CHECK(parse_result_json(text) == doc);
}

TEST_CASE("markdown rendering") {
  const std::string md = serialize_results(full_document(), Format::kMarkdown);
  CHECK(md.starts_with("# rorep results"));
  CHECK(md.find("Necessary pairs: 32, strict pairs: 22, |D| = 46") != std::string::npos);
  CHECK(count(md, "| N ") == 32);
  CHECK(count(md, "| S ") == 22);
  CHECK(count(md, "| I ") == 46);
  CHECK(md.find("- `a4 > a5`") != std::string::npos);
}

TEST_CASE("format names") {
  CHECK(parse_format("json") == Format::kJson);
  CHECK(parse_format("markdown") == Format::kMarkdown);
  CHECK(parse_format("md") == Format::kMarkdown);
  CHECK_THROWS_AS((void)parse_format("xml"), ProblemError);
}

TEST_CASE("malformed result json") {
  CHECK_THROWS_AS((void)parse_result_json("[1, 2]"), ParseError);
  CHECK_THROWS_AS((void)parse_result_json("{\"problem\": 3}"), ParseError);
  CHECK_THROWS_AS((void)parse_result_json("not json"), ParseError);
}

TEST_CASE("explanations serialise in both formats") {
  const DemocracyRun& run = democracy_run();
  const Explanation e = explain_pair(run.analysis.discriminant, run.problem, "a4", "a8");
  CHECK(e.margin > 0.0);
  const auto j = nlohmann::json::parse(serialize_explanation(e, Format::kJson));
  CHECK(j["a"] == "a4");
  CHECK(j["b"] == "a8");
  CHECK(j["function"] == e.function_label);
  const std::string md = serialize_explanation(e, Format::kMarkdown);
  CHECK(md.find("a4") != std::string::npos);
  CHECK(md.find(e.function_label) != std::string::npos);
}
