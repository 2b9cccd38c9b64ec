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

#include "rorep/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rorep::io {
namespace {

using nlohmann::json;

struct Record {
  int line = 0;
  std::vector<std::string> fields;
};

std::vector<Record> split_csv(std::string_view text) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  bool any = false;
  int line = 1;
  current.line = 1;
  auto end_field = [&] {
    current.fields.push_back(field);
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = current.fields.size() == 1 && current.fields[0].empty() && !any;
    if (!blank) records.push_back(std::move(current));
    current = Record{};
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    // Comment lines before the header.
    if (c == '#' && records.empty() && !any && field.empty() && current.fields.empty()) {
      while (i < text.size() && text[i] != '\n') ++i;
      ++line;
      current.line = line;
      continue;
    }
    if (c == '"') {
      if (!field.empty() || field_was_quoted) {
        throw ParseError("unexpected quote inside a field", current.line,
                         static_cast<int>(current.fields.size()) + 1);
      }
      quoted = true;
      field_was_quoted = true;
      any = true;
    } else if (c == ',') {
      end_field();
      any = true;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      end_record();
      ++line;
      current.line = line;
    } else {
      if (field_was_quoted) {
        throw ParseError("text after closing quote", current.line,
                         static_cast<int>(current.fields.size()) + 1);
      }
      field += c;
      any = true;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", current.line, 0);
  end_record();
  return records;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

double parse_score(const std::string& cell, int line, int column) {
  const std::string s = trim(cell);
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value, std::chars_format::general);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("non-numeric cell '" + cell + "'", line, column);
  }
  if (!std::isfinite(value)) throw ParseError("non-finite score '" + cell + "'", line, column);
  return value;
}

bool is_direction(const std::string& cell) {
  const std::string s = trim(cell);
  return s == "gain" || s == "cost";
}

Direction direction_of(std::string_view s) {
  if (s == "gain") return Direction::kGain;
  if (s == "cost") return Direction::kCost;
  throw ProblemError("direction must be gain or cost, got '" + std::string(s) + "'");
}

}  // namespace

RawTable parse_performance_csv(std::string_view text) {
  const std::vector<Record> records = split_csv(text);
  if (records.empty()) throw ParseError("empty table", 1, 0);
  const Record& header = records[0];
  if (trim(header.fields[0]) != "alternative") {
    throw ParseError("first header cell must be 'alternative'", header.line, 1);
  }
  if (header.fields.size() < 2) throw ParseError("no criteria in header", header.line, 0);

  RawTable table;
  const std::size_t width = header.fields.size();
  std::set<std::string> seen_criteria;
  for (std::size_t j = 1; j < width; ++j) {
    std::string id = trim(header.fields[j]);
    if (id.empty()) {
      throw ParseError("empty criterion id", header.line, static_cast<int>(j) + 1);
    }
    if (!seen_criteria.insert(id).second) {
      throw ParseError("duplicate criterion id '" + id + "'", header.line,
                       static_cast<int>(j) + 1);
    }
    table.criteria.push_back(std::move(id));
  }

  std::size_t first_data = 1;
  if (records.size() > 1) {
    const Record& r = records[1];
    bool directions = r.fields.size() == width;
    for (std::size_t j = 1; directions && j < width; ++j) directions = is_direction(r.fields[j]);
    if (directions) {
      for (std::size_t j = 1; j < width; ++j) {
        table.directions.push_back(direction_of(trim(r.fields[j])));
      }
      first_data = 2;
    }
  }
  if (records.size() <= first_data) throw ParseError("no data rows", header.line, 0);

  const auto rows = static_cast<Eigen::Index>(records.size() - first_data);
  table.scores.resize(rows, static_cast<Eigen::Index>(width - 1));
  std::set<std::string> seen;
  for (std::size_t k = first_data; k < records.size(); ++k) {
    const Record& r = records[k];
    if (r.fields.size() != width) {
      throw ParseError("row has " + std::to_string(r.fields.size()) + " fields, expected " +
                           std::to_string(width),
                       r.line, 0);
    }
    std::string id = trim(r.fields[0]);
    if (id.empty()) throw ParseError("empty alternative id", r.line, 1);
    if (!seen.insert(id).second) {
      throw ParseError("duplicate alternative id '" + id + "'", r.line, 1);
    }
    table.alternatives.push_back(std::move(id));
    for (std::size_t j = 1; j < width; ++j) {
      table.scores(static_cast<Eigen::Index>(k - first_data), static_cast<Eigen::Index>(j - 1)) =
          parse_score(r.fields[j], r.line, static_cast<int>(j) + 1);
    }
  }
  return table;
}

RawTable parse_table_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 1, 0);
  }
  try {
    RawTable table;
    table.alternatives = doc.at("alternatives").get<std::vector<std::string>>();
    bool any_direction = false;
    for (const json& c : doc.at("criteria")) {
      if (c.is_string()) {
        table.criteria.push_back(c.get<std::string>());
        table.directions.push_back(Direction::kGain);
        continue;
      }
      table.criteria.push_back(c.at("id").get<std::string>());
      if (c.contains("direction")) {
        table.directions.push_back(direction_of(c.at("direction").get<std::string>()));
        any_direction = true;
      } else {
        table.directions.push_back(Direction::kGain);
      }
    }
    if (!any_direction) table.directions.clear();
    const json& scores = doc.at("scores");
    const auto n = static_cast<Eigen::Index>(table.alternatives.size());
    const auto m = static_cast<Eigen::Index>(table.criteria.size());
    if (!scores.is_array() || static_cast<Eigen::Index>(scores.size()) != n) {
      throw ParseError("scores must have one row per alternative", 1, 0);
    }
    table.scores.resize(n, m);
    for (Eigen::Index a = 0; a < n; ++a) {
      const json& row = scores[static_cast<std::size_t>(a)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m) {
        throw ParseError("score row " + std::to_string(a + 1) + " has the wrong length", 1, 0);
      }
      for (Eigen::Index i = 0; i < m; ++i) table.scores(a, i) = row[static_cast<std::size_t>(i)].get<double>();
    }
    return table;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed table: ") + e.what(), 1, 0);
  } catch (const ProblemError& e) {
    throw ParseError(e.what(), 1, 0);
  }
}

std::string table_to_json(const RawTable& table) {
  json doc;
  doc["alternatives"] = table.alternatives;
  json criteria = json::array();
  for (std::size_t i = 0; i < table.criteria.size(); ++i) {
    const Direction d = table.directions.empty() ? Direction::kGain : table.directions[i];
    criteria.push_back({{"id", table.criteria[i]}, {"direction", std::string(to_string(d))}});
  }
  doc["criteria"] = criteria;
  json scores = json::array();
  for (Eigen::Index a = 0; a < table.scores.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index i = 0; i < table.scores.cols(); ++i) row.push_back(table.scores(a, i));
    scores.push_back(row);
  }
  doc["scores"] = scores;
  return doc.dump();
}

RawTable parse_table(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_table_json(text);
  return parse_performance_csv(text);
}

namespace {

bool is_operator_char(char c) { return c == '>' || c == '<' || c == '=' || c == '!'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Parses one line without its comment; nullopt for a blank line.
std::optional<PreferenceStatement> parse_line(std::string_view line, int number) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < line.size() && is_space(line[i])) ++i;
  };
  auto column = [&] { return static_cast<int>(i) + 1; };
  auto read_id = [&](const char* what) {
    skip();
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i]) && !is_operator_char(line[i])) ++i;
    if (i == start) throw ParseError(std::string("expected ") + what, number, column());
    return std::string(line.substr(start, i - start));
  };

  skip();
  if (i == line.size()) return std::nullopt;
  PreferenceStatement s;
  s.a = read_id("alternative id");
  skip();
  const std::size_t op_start = i;
  while (i < line.size() && is_operator_char(line[i])) ++i;
  const std::string_view op = line.substr(op_start, i - op_start);
  if (op == ">") {
    s.kind = PreferenceStatement::Kind::kStrict;
  } else if (op == "=") {
    s.kind = PreferenceStatement::Kind::kIndifference;
  } else if (op.empty()) {
    throw ParseError("expected '>' or '='", number, static_cast<int>(op_start) + 1);
  } else {
    throw ParseError("unknown operator '" + std::string(op) + "'", number,
                     static_cast<int>(op_start) + 1);
  }
  s.b = read_id("alternative id");
  skip();
  if (i != line.size()) throw ParseError("unexpected text after statement", number, column());
  return s;
}

}  // namespace

std::vector<PreferenceStatement> parse_preferences(std::string_view text) {
  std::vector<PreferenceStatement> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (auto s = parse_line(line, number)) out.push_back(std::move(*s));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

PreferenceStatement parse_statement(std::string_view text) {
  std::vector<PreferenceStatement> all = parse_preferences(text);
  if (all.size() != 1) throw ParseError("expected exactly one statement", 1, 0);
  return all.front();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rorep::io
