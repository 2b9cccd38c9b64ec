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

// Command-line entry point.
//
//   rorep relations        -t table.csv [-p prefs.txt] [-o out] [--format json|markdown]
//   rorep representatives  -t table.csv [-p prefs.txt] [-o out] [--format ...]
//   rorep explain          -t table.csv [-p prefs.txt] --pair a,b
//   rorep serve            [--host 127.0.0.1] [--port 8080] [--ttl 3600] [--timeout 60]
//
// Exit codes: 0 success, 1 usage or input error, 2 incompatible preferences,
// 3 no covering function for the requested pair.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "rorep/io.hpp"
#include "rorep/result_document.hpp"
#include "rorep/service.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIncompatible = 2;
constexpr int kExitNoCover = 3;

struct Config {
  std::string table;
  std::string preferences;
  std::string output;
  std::string format = "json";
  double eps_fixed = 1e-4;
  double big_m = 10.0;
  int jobs = 1;
  std::string pair;
  std::string host = "127.0.0.1";
  int port = 8080;
  int ttl = 3600;
  double timeout = 60.0;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("rorep");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("ROREP_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

struct Inputs {
  rorep::Problem problem;
  std::vector<rorep::PreferenceStatement> statements;
  rorep::RepresentativeParams params;
};

Inputs load(const Config& c) {
  Inputs in;
  in.problem = rorep::build_problem(rorep::io::parse_table(rorep::io::read_file(c.table)));
  if (!c.preferences.empty()) {
    in.statements = rorep::io::parse_preferences(rorep::io::read_file(c.preferences));
  }
  rorep::validate_statements(in.problem, in.statements);
  in.params.eps_fixed = c.eps_fixed;
  in.params.big_m = c.big_m;
  in.params.validate();
  spdlog::info("{} alternatives, {} criteria, {} statements", in.problem.num_alternatives(),
               in.problem.num_criteria(), in.statements.size());
  return in;
}

void emit(const Config& c, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + c.output + "'");
  out << text;
}

int run_relations(const Config& c) {
  const Inputs in = load(c);
  const rorep::Format format = rorep::parse_format(c.format);
  const rorep::RelationBundle rel = rorep::compute_relations(in.problem, in.statements, c.jobs);
  rorep::ResultDocument doc = rorep::make_document(in.problem, in.statements, in.params);
  rorep::add_relations(doc, in.problem, rel);
  emit(c, rorep::serialize_results(doc, format));
  return 0;
}

rorep::Analysis run_pipeline(const Inputs& in, int jobs) {
  const rorep::ConstraintSystem sys = rorep::base_system(in.problem, in.statements);
  rorep::Analysis a = rorep::analyze(sys, in.params, jobs);
  spdlog::info("r = {}, t = {}, epsilon* = {}", a.sufficient.r(), a.minimality.t,
               a.discriminant.epsilon_star);
  return a;
}

int run_representatives(const Config& c) {
  const Inputs in = load(c);
  const rorep::Format format = rorep::parse_format(c.format);
  const rorep::Analysis a = run_pipeline(in, c.jobs);
  rorep::ResultDocument doc = rorep::make_document(in.problem, in.statements, in.params);
  rorep::add_analysis(doc, in.problem, a);
  emit(c, rorep::serialize_results(doc, format));
  return 0;
}

int run_explain(const Config& c) {
  const auto comma = c.pair.find(',');
  if (comma == std::string::npos) throw rorep::ProblemError("--pair expects a,b");
  const std::string a = c.pair.substr(0, comma);
  const std::string b = c.pair.substr(comma + 1);
  const Inputs in = load(c);
  const rorep::Format format = rorep::parse_format(c.format);
  (void)in.problem.index_of(a);
  (void)in.problem.index_of(b);
  const rorep::Analysis analysis = run_pipeline(in, c.jobs);
  const rorep::Explanation e = rorep::explain_pair(analysis.discriminant, in.problem, a, b);
  emit(c, rorep::serialize_explanation(e, format));
  return 0;
}

int run_serve(const Config& c) {
  rorep::service::ServiceOptions options;
  options.params.eps_fixed = c.eps_fixed;
  options.params.big_m = c.big_m;
  options.params.validate();
  options.jobs = c.jobs;
  options.ttl = std::chrono::seconds(c.ttl);
  options.timeout = std::chrono::milliseconds(static_cast<long long>(c.timeout * 1000.0));
  if (spdlog::get_level() > spdlog::level::info && std::getenv("ROREP_LOG") == nullptr) {
    spdlog::set_level(spdlog::level::info);
  }
  return rorep::service::serve(options, c.host, c.port);
}

void add_problem_options(CLI::App* cmd, Config& c) {
  cmd->add_option("-t,--table", c.table, "performance table (CSV or JSON)")->required();
  cmd->add_option("-p,--preferences", c.preferences, "preference statements, one per line");
  cmd->add_option("-o,--output", c.output, "output file (default: stdout)");
  cmd->add_option("--format", c.format, "json or markdown")
      ->check(CLI::IsMember({"json", "markdown"}));
}

void add_solver_options(CLI::App* cmd, Config& c) {
  cmd->add_option("--eps", c.eps_fixed, "fixed strict margin of the covering problems")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--big-m", c.big_m, "big-M constant (must exceed 1 + eps)");
  cmd->add_option("--jobs", c.jobs, "threads for the pairwise relation LPs")
      ->check(CLI::Range(1, 256));
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  Config c;
  CLI::App app{"Representative value functions for robust ordinal regression"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rorep::kToolVersion));

  auto* relations = app.add_subcommand("relations", "necessary, strict and incomparability relations");
  add_problem_options(relations, c);
  add_solver_options(relations, c);

  auto* reps = app.add_subcommand("representatives",
                                  "sufficient, minimal and most discriminant function sets");
  add_problem_options(reps, c);
  add_solver_options(reps, c);

  auto* explain = app.add_subcommand("explain", "explain why a function ranks a above b");
  add_problem_options(explain, c);
  add_solver_options(explain, c);
  explain->add_option("--pair", c.pair, "ordered pair a,b")->required();

  auto* serve = app.add_subcommand("serve", "start the HTTP session service");
  serve->add_option("--host", c.host, "bind address");
  serve->add_option("--port", c.port, "port")->check(CLI::Range(1, 65535));
  serve->add_option("--ttl", c.ttl, "idle session lifetime in seconds")->check(CLI::PositiveNumber);
  serve->add_option("--timeout", c.timeout, "representatives timeout in seconds")
      ->check(CLI::PositiveNumber);
  add_solver_options(serve, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*relations) return run_relations(c);
    if (*reps) return run_representatives(c);
    if (*explain) return run_explain(c);
    if (*serve) return run_serve(c);
  } catch (const rorep::IncompatiblePreferences& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIncompatible;
  } catch (const rorep::NoCoveringFunction& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoCover;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
