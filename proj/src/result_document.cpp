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

#include "rorep/result_document.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace rorep {
namespace {

using json = nlohmann::ordered_json;
using Doc = ResultDocument;

double raw(const Criterion& c, double gain_value) {
  return (c.direction == Direction::kCost ? -gain_value : gain_value) + 0.0;
}

Direction direction_of(const std::string& s) {
  if (s == "gain") return Direction::kGain;
  if (s == "cost") return Direction::kCost;
  throw ParseError("direction must be gain or cost, got '" + s + "'", 1, 0);
}

std::vector<std::vector<std::string>> codes(const BoolMatrix& m, const char* code) {
  std::vector<std::vector<std::string>> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.cols(); ++b) {
      out[static_cast<std::size_t>(a)].push_back(m(a, b) ? code : "");
    }
  }
  return out;
}

Doc::IdPair ids(const Problem& p, const AlternativePair& pr) {
  return {p.alternatives()[static_cast<std::size_t>(pr.first)],
          p.alternatives()[static_cast<std::size_t>(pr.second)]};
}

std::vector<Doc::IdPair> ids(const Problem& p, const std::vector<AlternativePair>& pairs) {
  std::vector<Doc::IdPair> out;
  out.reserve(pairs.size());
  for (const auto& pr : pairs) out.push_back(ids(p, pr));
  return out;
}

int count_code(const std::vector<std::vector<std::string>>& m) {
  int n = 0;
  for (const auto& row : m) {
    n += static_cast<int>(std::count_if(row.begin(), row.end(),
                                        [](const std::string& c) { return !c.empty(); }));
  }
  return n;
}

json pairs_to_json(const std::vector<Doc::IdPair>& pairs) {
  json out = json::array();
  for (const auto& [a, b] : pairs) out.push_back(json::array({a, b}));
  return out;
}

std::vector<Doc::IdPair> pairs_from_json(const json& j) {
  std::vector<Doc::IdPair> out;
  for (const json& pr : j) {
    if (!pr.is_array() || pr.size() != 2) throw ParseError("pair must have two ids", 1, 0);
    out.emplace_back(pr[0].get<std::string>(), pr[1].get<std::string>());
  }
  return out;
}

json to_json(const Doc& doc) {
  json problem;
  problem["alternatives"] = doc.alternatives;
  json criteria = json::array();
  for (const auto& c : doc.criteria) {
    criteria.push_back({{"id", c.id},
                        {"direction", std::string(to_string(c.direction))},
                        {"alpha", c.alpha},
                        {"beta", c.beta},
                        {"points", c.points}});
  }
  problem["criteria"] = criteria;
  problem["scores"] = doc.scores;
  problem["statements"] = doc.statements;

  json out;
  out["problem"] = problem;
  if (doc.relations) {
    const auto& r = *doc.relations;
    out["relations"] = {{"necessary", r.necessary},
                        {"strict", r.strict},
                        {"incomparable", r.incomparable},
                        {"d_pairs", pairs_to_json(r.d_pairs)},
                        {"counts",
                         {{"necessary", count_code(r.necessary)},
                          {"strict", count_code(r.strict)},
                          {"incomparable", count_code(r.incomparable)},
                          {"d", r.d_pairs.size()}}}};
  }
  if (doc.sufficient) {
    const auto& s = *doc.sufficient;
    json functions = json::array();
    for (std::size_t k = 0; k < s.labels.size(); ++k) {
      functions.push_back({{"label", s.labels[k]}, {"covered", pairs_to_json(s.covered[k])}});
    }
    out["sufficient"] = {{"r", s.r}, {"iteration_log", s.iteration_log}, {"functions", functions}};
  }
  if (doc.minimality) {
    const auto& m = *doc.minimality;
    out["minimality"] = {
        {"r", m.r}, {"t", m.t}, {"z_star", m.z_star}, {"witnesses", m.witness_labels}};
  }
  if (doc.discriminant) {
    const auto& d = *doc.discriminant;
    json functions = json::array();
    for (const auto& f : d.functions) {
      json marginals = json::array();
      for (std::size_t i = 0; i < f.marginals.size(); ++i) {
        json points = json::array();
        for (const auto& [value, u] : f.marginals[i]) points.push_back(json::array({value, u}));
        marginals.push_back({{"criterion", doc.criteria[i].id}, {"points", points}});
      }
      functions.push_back({{"label", f.label}, {"marginals", marginals}, {"values", f.values}});
    }
    json coverage = json::array();
    for (const auto& c : d.coverage) {
      coverage.push_back({{"a", c.a}, {"b", c.b}, {"kind", c.kind}, {"functions", c.functions}});
    }
    out["discriminant"] = {
        {"epsilon_star", d.epsilon_star}, {"functions", functions}, {"coverage", coverage}};
  }
  out["provenance"] = {{"tool", doc.provenance.tool},
                       {"version", doc.provenance.version},
                       {"eps_fixed", doc.provenance.eps_fixed},
                       {"big_m", doc.provenance.big_m}};
  return out;
}

Doc from_json(const json& j) {
  Doc doc;
  const json& problem = j.at("problem");
  doc.alternatives = problem.at("alternatives").get<std::vector<std::string>>();
  for (const json& c : problem.at("criteria")) {
    Doc::CriterionEcho e;
    e.id = c.at("id").get<std::string>();
    e.direction = direction_of(c.at("direction").get<std::string>());
    e.alpha = c.at("alpha").get<double>();
    e.beta = c.at("beta").get<double>();
    e.points = c.at("points").get<std::vector<double>>();
    doc.criteria.push_back(std::move(e));
  }
  doc.scores = problem.at("scores").get<std::vector<std::vector<double>>>();
  doc.statements = problem.at("statements").get<std::vector<std::string>>();

  if (j.contains("relations")) {
    const json& r = j.at("relations");
    Doc::Relations rel;
    using Matrix = std::vector<std::vector<std::string>>;
    rel.necessary = r.at("necessary").get<Matrix>();
    rel.strict = r.at("strict").get<Matrix>();
    rel.incomparable = r.at("incomparable").get<Matrix>();
    rel.d_pairs = pairs_from_json(r.at("d_pairs"));
    const std::size_t n = doc.alternatives.size();
    for (const Matrix* m : {&rel.necessary, &rel.strict, &rel.incomparable}) {
      if (m->size() != n) throw ParseError("relation matrix is not square", 1, 0);
      for (const auto& row : *m) {
        if (row.size() != n) throw ParseError("relation matrix is not square", 1, 0);
      }
    }
    doc.relations = std::move(rel);
  }
  if (j.contains("sufficient")) {
    const json& s = j.at("sufficient");
    Doc::Sufficient suf;
    suf.r = s.at("r").get<int>();
    suf.iteration_log = s.at("iteration_log").get<std::vector<int>>();
    for (const json& f : s.at("functions")) {
      suf.labels.push_back(f.at("label").get<std::string>());
      suf.covered.push_back(pairs_from_json(f.at("covered")));
    }
    doc.sufficient = std::move(suf);
  }
  if (j.contains("minimality")) {
    const json& m = j.at("minimality");
    doc.minimality = Doc::Minimality{m.at("r").get<int>(), m.at("t").get<int>(),
                                     m.at("z_star").get<int>(),
                                     m.at("witnesses").get<std::vector<std::string>>()};
  }
  if (j.contains("discriminant")) {
    const json& d = j.at("discriminant");
    Doc::Discriminant dis;
    dis.epsilon_star = d.at("epsilon_star").get<double>();
    for (const json& f : d.at("functions")) {
      Doc::FunctionTable t;
      t.label = f.at("label").get<std::string>();
      for (const json& m : f.at("marginals")) {
        std::vector<std::pair<double, double>> points;
        for (const json& pt : m.at("points")) {
          points.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
        }
        t.marginals.push_back(std::move(points));
      }
      t.values = f.at("values").get<std::vector<double>>();
      dis.functions.push_back(std::move(t));
    }
    for (const json& c : d.at("coverage")) {
      dis.coverage.push_back(Doc::CoverageEntry{
          c.at("a").get<std::string>(), c.at("b").get<std::string>(),
          c.at("kind").get<std::string>(), c.at("functions").get<std::vector<std::string>>()});
    }
    doc.discriminant = std::move(dis);
  }
  const json& pv = j.at("provenance");
  doc.provenance.tool = pv.at("tool").get<std::string>();
  doc.provenance.version = pv.at("version").get<std::string>();
  doc.provenance.eps_fixed = pv.at("eps_fixed").get<double>();
  doc.provenance.big_m = pv.at("big_m").get<double>();
  return doc;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

void matrix_md(std::ostringstream& out, const std::string& title,
               const std::vector<std::string>& alternatives,
               const std::vector<std::vector<std::string>>& m) {
  out << "### " << title << "\n\n|   |";
  for (const auto& a : alternatives) out << ' ' << a << " |";
  out << "\n|---|";
  for (std::size_t k = 0; k < alternatives.size(); ++k) out << ":-:|";
  out << '\n';
  for (std::size_t a = 0; a < alternatives.size(); ++a) {
    out << "| " << alternatives[a] << " |";
    for (const auto& cell : m[a]) out << ' ' << cell << " |";
    out << '\n';
  }
  out << '\n';
}

std::string to_markdown(const Doc& doc) {
  std::ostringstream out;
  out << "# " << doc.provenance.tool << " results\n\n";
  out << "## Problem\n\n| alternative |";
  for (const auto& c : doc.criteria) out << ' ' << c.id << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < doc.criteria.size(); ++i) out << "--:|";
  out << '\n';
  for (std::size_t a = 0; a < doc.alternatives.size(); ++a) {
    out << "| " << doc.alternatives[a] << " |";
    for (double v : doc.scores[a]) out << ' ' << num(v) << " |";
    out << '\n';
  }
  out << "\n| criterion | direction | alpha | beta | points |\n|---|---|--:|--:|--:|\n";
  for (const auto& c : doc.criteria) {
    out << "| " << c.id << " | " << to_string(c.direction) << " | " << num(c.alpha) << " | "
        << num(c.beta) << " | " << c.points.size() << " |\n";
  }
  out << "\nStatements:";
  if (doc.statements.empty()) out << " none";
  out << '\n';
  for (const auto& s : doc.statements) out << "- `" << s << "`\n";
  out << '\n';

  if (doc.relations) {
    const auto& r = *doc.relations;
    out << "## Relations\n\n";
    out << "Necessary pairs: " << count_code(r.necessary)
        << ", strict pairs: " << count_code(r.strict) << ", |D| = " << r.d_pairs.size()
        << "\n\n";
    matrix_md(out, "Necessary preference", doc.alternatives, r.necessary);
    matrix_md(out, "Strict necessary preference", doc.alternatives, r.strict);
    matrix_md(out, "Incomparability", doc.alternatives, r.incomparable);
  }
  if (doc.sufficient) {
    const auto& s = *doc.sufficient;
    out << "## Sufficient set\n\nr = " << s.r << "\n\nRemaining |D| per step:";
    for (int v : s.iteration_log) out << ' ' << v;
    out << "\n\n";
    for (std::size_t k = 0; k < s.labels.size(); ++k) {
      out << "- " << s.labels[k] << " covers " << s.covered[k].size() << " pairs\n";
    }
    out << '\n';
  }
  if (doc.minimality) {
    const auto& m = *doc.minimality;
    out << "## Minimality\n\nr = " << m.r << ", z* = " << m.z_star << ", t = " << m.t << "\n\n";
  }
  if (doc.discriminant) {
    const auto& d = *doc.discriminant;
    out << "## Most discriminant set\n\nepsilon* = " << num(d.epsilon_star) << "\n\n";
    for (const auto& f : d.functions) {
      out << "### Value function " << f.label << "\n\n|";
      std::size_t rows = 0;
      for (std::size_t i = 0; i < f.marginals.size(); ++i) {
        out << ' ' << doc.criteria[i].id << " | u" << (i + 1) << " |";
        rows = std::max(rows, f.marginals[i].size());
      }
      out << "\n|";
      for (std::size_t i = 0; i < f.marginals.size(); ++i) out << "--:|--:|";
      out << '\n';
      for (std::size_t k = 0; k < rows; ++k) {
        out << '|';
        for (const auto& pts : f.marginals) {
          if (k < pts.size()) {
            out << ' ' << num(pts[k].first) << " | " << num(pts[k].second) << " |";
          } else {
            out << "  |  |";
          }
        }
        out << '\n';
      }
      out << "\n| alternative | U |\n|---|--:|\n";
      for (std::size_t a = 0; a < doc.alternatives.size(); ++a) {
        out << "| " << doc.alternatives[a] << " | " << num(f.values[a]) << " |\n";
      }
      out << '\n';
    }
    out << "### Coverage\n\n| a | b | kind | functions |\n|---|---|---|---|\n";
    for (const auto& c : d.coverage) {
      std::string who;
      for (const auto& l : c.functions) who += (who.empty() ? "" : ", ") + l;
      out << "| " << c.a << " | " << c.b << " | " << c.kind << " | " << who << " |\n";
    }
    out << '\n';
  }
  out << "## Provenance\n\n" << doc.provenance.tool << ' ' << doc.provenance.version
      << ", eps_fixed = " << num(doc.provenance.eps_fixed)
      << ", big_m = " << num(doc.provenance.big_m) << '\n';
  return out.str();
}

}  // namespace

ResultDocument make_document(const Problem& p, const std::vector<PreferenceStatement>& statements,
                             const RepresentativeParams& params) {
  Doc doc;
  doc.alternatives = p.alternatives();
  for (const Criterion& c : p.criteria()) {
    Doc::CriterionEcho e;
    e.id = c.id;
    e.direction = c.direction;
    e.alpha = raw(c, c.alpha);
    e.beta = raw(c, c.beta);
    for (double v : c.points) e.points.push_back(raw(c, v));
    doc.criteria.push_back(std::move(e));
  }
  for (int a = 0; a < p.num_alternatives(); ++a) {
    std::vector<double> row;
    for (int i = 0; i < p.num_criteria(); ++i) row.push_back(raw(p.criterion(i), p.score(a, i)));
    doc.scores.push_back(std::move(row));
  }
  for (const auto& s : statements) doc.statements.push_back(to_string(s));
  doc.provenance.eps_fixed = params.eps_fixed;
  doc.provenance.big_m = params.big_m;
  return doc;
}

void add_relations(ResultDocument& doc, const Problem& p, const RelationBundle& relations) {
  Doc::Relations r;
  r.necessary = codes(relations.necessary, "N");
  r.strict = codes(relations.strict, "S");
  r.incomparable = codes(relations.incomparable, "I");
  r.d_pairs = ids(p, relations.d_pairs);
  doc.relations = std::move(r);
}

ResultDocument::FunctionTable function_table(const ValueFunction& f, const Problem& p) {
  Doc::FunctionTable t;
  t.label = f.label;
  for (int i = 0; i < p.num_criteria(); ++i) {
    const Criterion& c = p.criterion(i);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      pts.emplace_back(raw(c, c.points[k]), f.marginal(i, static_cast<int>(k)) + 0.0);
    }
    t.marginals.push_back(std::move(pts));
  }
  const Eigen::VectorXd u = evaluate_all(f, p);
  t.values.assign(u.data(), u.data() + u.size());
  return t;
}

void add_analysis(ResultDocument& doc, const Problem& p, const Analysis& analysis) {
  add_relations(doc, p, analysis.relations);

  Doc::Sufficient s;
  s.r = analysis.sufficient.r();
  s.iteration_log = analysis.sufficient.remaining;
  for (std::size_t k = 0; k < analysis.sufficient.functions.size(); ++k) {
    s.labels.push_back(analysis.sufficient.functions[k].label);
    s.covered.push_back(ids(p, analysis.sufficient.covered[k]));
  }
  doc.sufficient = std::move(s);

  Doc::Minimality m;
  m.r = analysis.minimality.r;
  m.t = analysis.minimality.t;
  m.z_star = analysis.minimality.z_star;
  for (const auto& w : analysis.minimality.witnesses) m.witness_labels.push_back(w.label);
  doc.minimality = std::move(m);

  Doc::Discriminant d;
  const DiscriminantSet& ds = analysis.discriminant;
  d.epsilon_star = ds.epsilon_star;
  for (const auto& f : ds.functions) d.functions.push_back(function_table(f, p));
  for (const auto& [pr, who] : ds.coverage) {
    Doc::CoverageEntry e;
    std::tie(e.a, e.b) = ids(p, pr);
    e.kind = analysis.relations.strict(pr.first, pr.second) ? "strict" : "incomparable";
    for (int s_index : who) e.functions.push_back(ds.functions[static_cast<std::size_t>(s_index)].label);
    d.coverage.push_back(std::move(e));
  }
  doc.discriminant = std::move(d);
}

Format parse_format(std::string_view name) {
  if (name == "json") return Format::kJson;
  if (name == "markdown" || name == "md") return Format::kMarkdown;
  throw ProblemError("unknown format '" + std::string(name) + "'");
}

std::string serialize_results(const ResultDocument& doc, Format format) {
  if (format == Format::kMarkdown) return to_markdown(doc);
  return to_json(doc).dump(2) + "\n";
}

ResultDocument parse_result_json(std::string_view text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 1, 0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed result document: ") + e.what(), 1, 0);
  }
}

std::string serialize_explanation(const Explanation& e, Format format) {
  auto contribution = [](const CriterionContribution& c) {
    return json{{"criterion", c.criterion}, {"score_a", c.score_a}, {"score_b", c.score_b},
                {"value_a", c.value_a},     {"value_b", c.value_b}, {"gap", c.gap()}};
  };
  if (format == Format::kJson) {
    json criteria = json::array();
    json differing = json::array();
    for (const auto& c : e.criteria) criteria.push_back(contribution(c));
    for (const auto& c : e.differing) differing.push_back(contribution(c));
    json out = {{"a", e.a},
                {"b", e.b},
                {"function", e.function_label},
                {"function_index", e.function_index},
                {"margin", e.margin},
                {"criteria", criteria},
                {"differing", differing}};
    return out.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "# Why " << e.a << " over " << e.b << "\n\n"
      << "Function " << e.function_label << " gives U(" << e.a << ") - U(" << e.b
      << ") = " << num(e.margin) << ".\n\n"
      << "| criterion | g(" << e.a << ") | g(" << e.b << ") | u(" << e.a << ") | u(" << e.b
      << ") | gap |\n|---|--:|--:|--:|--:|--:|\n";
  for (const auto& c : e.criteria) {
    out << "| " << c.criterion << " | " << num(c.score_a) << " | " << num(c.score_b) << " | "
        << num(c.value_a) << " | " << num(c.value_b) << " | " << num(c.gap()) << " |\n";
  }
  out << "\nDiffering criteria:";
  for (const auto& c : e.differing) out << ' ' << c.criterion;
  if (e.differing.empty()) out << " none";
  out << '\n';
  return out.str();
}

}  // namespace rorep
