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

#include "rorep/service.hpp"

#include <atomic>
#include <future>
#include <optional>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "rorep/io.hpp"
#include "rorep/result_document.hpp"

namespace rorep::service {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Computed {
  std::shared_ptr<const Analysis> analysis;
  std::string body;
};

struct Session {
  std::mutex mutex;
  std::string id;
  Problem problem;
  std::vector<std::pair<int, PreferenceStatement>> statements;
  int next_index = 0;
  std::uint64_t version = 0;
  std::chrono::system_clock::time_point created;
  std::chrono::system_clock::time_point updated;
  std::atomic<Clock::rep> touched{0};

  std::optional<std::string> relations_body;
  std::optional<Computed> computed;
  std::optional<std::shared_future<Computed>> pending;
  std::uint64_t pending_version = 0;

  [[nodiscard]] std::vector<PreferenceStatement> plain_statements() const {
    std::vector<PreferenceStatement> out;
    out.reserve(statements.size());
    for (const auto& [index, s] : statements) out.push_back(s);
    return out;
  }

  void invalidate() {
    ++version;
    relations_body.reset();
    computed.reset();
    pending.reset();
    updated = std::chrono::system_clock::now();
  }

  void touch() { touched = Clock::now().time_since_epoch().count(); }
};

namespace {

Response error(int status, const std::string& message, json extra = json::object()) {
  json body = json::object();
  body["error"] = message;
  for (auto it = extra.begin(); it != extra.end(); ++it) body[it.key()] = it.value();
  return Response{status, body.dump(2) + "\n"};
}

Response ok(int status, const json& body) { return Response{status, body.dump(2) + "\n"}; }

std::string new_id() {
  static std::mutex m;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(m);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

std::string iso8601(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json statement_list(const Session& s) {
  json out = json::array();
  for (const auto& [index, st] : s.statements) {
    out.push_back({{"index", index},
                   {"statement", to_string(st)},
                   {"kind", st.kind == PreferenceStatement::Kind::kStrict ? "strict" : "indifference"},
                   {"a", st.a},
                   {"b", st.b}});
  }
  return out;
}

PreferenceStatement statement_from_body(std::string_view body) {
  const auto first = body.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ParseError("empty statement", 1, 0);
  if (body[first] != '{') return io::parse_statement(body);
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 1, 0);
  }
  if (j.contains("statement")) {
    if (!j["statement"].is_string()) throw ParseError("'statement' must be a string", 1, 0);
    return io::parse_statement(j["statement"].get<std::string>());
  }
  if (!j.contains("kind") || !j.contains("a") || !j.contains("b") || !j["kind"].is_string() ||
      !j["a"].is_string() || !j["b"].is_string()) {
    throw ParseError("expected 'statement' or 'kind', 'a' and 'b'", 1, 0);
  }
  PreferenceStatement s;
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "strict") {
    s.kind = PreferenceStatement::Kind::kStrict;
  } else if (kind == "indifference") {
    s.kind = PreferenceStatement::Kind::kIndifference;
  } else {
    throw ParseError("kind must be strict or indifference", 1, 0);
  }
  s.a = j["a"].get<std::string>();
  s.b = j["b"].get<std::string>();
  return s;
}

}  // namespace

SessionService::SessionService(ServiceOptions options) : options_(std::move(options)) {
  options_.params.validate();
}

SessionService::~SessionService() = default;

std::shared_ptr<Session> SessionService::find(const std::string& id) {
  evict_expired();
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  it->second->touch();
  return it->second;
}

std::size_t SessionService::evict_expired() {
  const auto now = Clock::now().time_since_epoch().count();
  const auto ttl = std::chrono::duration_cast<Clock::duration>(options_.ttl).count();
  std::lock_guard lock(mutex_);
  return std::erase_if(sessions_, [&](const auto& kv) { return now - kv.second->touched > ttl; });
}

std::size_t SessionService::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

Response SessionService::create_session(std::string_view payload) {
  if (payload.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    return error(400, "empty table payload");
  }
  auto session = std::make_shared<Session>();
  try {
    session->problem = build_problem(io::parse_table(payload));
  } catch (const ParseError& e) {
    return error(400, e.what(), {{"line", e.line()}, {"column", e.column()}});
  } catch (const ProblemError& e) {
    return error(400, e.what());
  }
  session->id = new_id();
  session->created = session->updated = std::chrono::system_clock::now();
  session->touch();
  evict_expired();
  {
    std::lock_guard lock(mutex_);
    sessions_[session->id] = session;
  }
  spdlog::info("session {} created ({} alternatives)", session->id,
               session->problem.num_alternatives());
  return ok(201, {{"id", session->id}});
}

Response SessionService::get_session(const std::string& id) {
  auto s = find(id);
  if (!s) return error(404, "unknown session '" + id + "'");
  std::lock_guard lock(s->mutex);
  json criteria = json::array();
  for (const Criterion& c : s->problem.criteria()) {
    criteria.push_back({{"id", c.id}, {"direction", std::string(to_string(c.direction))}});
  }
  return ok(200, {{"id", s->id},
                  {"alternatives", s->problem.alternatives()},
                  {"criteria", criteria},
                  {"statements", statement_list(*s)},
                  {"created", iso8601(s->created)},
                  {"updated", iso8601(s->updated)}});
}

Response SessionService::delete_session(const std::string& id) {
  std::lock_guard lock(mutex_);
  if (sessions_.erase(id) == 0) return error(404, "unknown session '" + id + "'");
  return ok(200, {{"deleted", id}});
}

Response SessionService::add_preference(const std::string& id, std::string_view body) {
  auto s = find(id);
  if (!s) return error(404, "unknown session '" + id + "'");
  PreferenceStatement st;
  try {
    st = statement_from_body(body);
  } catch (const ParseError& e) {
    return error(400, e.what(), {{"line", e.line()}, {"column", e.column()}});
  }
  std::lock_guard lock(s->mutex);
  std::vector<PreferenceStatement> next = s->plain_statements();
  next.push_back(st);
  try {
    (void)check_compatibility(base_system(s->problem, next));
  } catch (const IncompatiblePreferences&) {
    spdlog::info("session {}: rejected '{}'", id, to_string(st));
    return error(409, "statement '" + to_string(st) + "' makes the preferences incompatible",
                 {{"rejected", to_string(st)}, {"statements", statement_list(*s)}});
  } catch (const ProblemError& e) {
    return error(400, e.what());
  }
  s->statements.emplace_back(s->next_index++, st);
  s->invalidate();
  return ok(201, {{"statements", statement_list(*s)}});
}

Response SessionService::remove_preference(const std::string& id, int index) {
  auto s = find(id);
  if (!s) return error(404, "unknown session '" + id + "'");
  std::lock_guard lock(s->mutex);
  auto it = std::find_if(s->statements.begin(), s->statements.end(),
                         [&](const auto& e) { return e.first == index; });
  if (it == s->statements.end()) {
    return error(404, "unknown statement index " + std::to_string(index));
  }
  s->statements.erase(it);
  s->invalidate();
  return ok(200, {{"statements", statement_list(*s)}});
}

Response SessionService::relations(const std::string& id) {
  auto s = find(id);
  if (!s) return error(404, "unknown session '" + id + "'");
  std::lock_guard lock(s->mutex);
  if (s->relations_body) return Response{200, *s->relations_body, "application/json", true};
  if (s->computed) {
    ResultDocument doc = make_document(s->problem, s->plain_statements(), options_.params);
    add_relations(doc, s->problem, s->computed->analysis->relations);
    s->relations_body = serialize_results(doc, Format::kJson);
    return Response{200, *s->relations_body};
  }
  try {
    const std::vector<PreferenceStatement> statements = s->plain_statements();
    const RelationBundle rel = compute_relations(s->problem, statements, options_.jobs);
    ResultDocument doc = make_document(s->problem, statements, options_.params);
    add_relations(doc, s->problem, rel);
    s->relations_body = serialize_results(doc, Format::kJson);
  } catch (const IncompatiblePreferences& e) {
    return error(422, e.what());
  }
  return Response{200, *s->relations_body};
}

namespace {

// Runs the pipeline for the session's current statements on a detached
// thread and waits up to `timeout`. Caller holds s.mutex.
std::optional<Response> ensure_computed(const std::shared_ptr<Session>& s,
                                        const ServiceOptions& options, bool& hit) {
  hit = s->computed.has_value();
  if (hit) return std::nullopt;
  if (!s->pending || s->pending_version != s->version) {
    auto promise = std::make_shared<std::promise<Computed>>();
    s->pending = promise->get_future().share();
    s->pending_version = s->version;
    std::thread([promise, session = s, problem = s->problem,
                 statements = s->plain_statements(), options, version = s->version] {
      try {
        const ConstraintSystem sys = base_system(problem, statements);
        auto analysis = std::make_shared<Analysis>(analyze(sys, options.params, options.jobs));
        ResultDocument doc = make_document(problem, statements, options.params);
        add_analysis(doc, problem, *analysis);
        Computed c{std::move(analysis), serialize_results(doc, Format::kJson)};
        promise->set_value(c);
        std::lock_guard lock(session->mutex);
        if (session->version == version && !session->computed) session->computed = std::move(c);
      } catch (...) {
        promise->set_exception(std::current_exception());
      }
    }).detach();
  }
  std::shared_future<Computed> f = *s->pending;
  if (f.wait_for(options.timeout) != std::future_status::ready) {
    return error(503, "computation did not finish within " +
                          std::to_string(options.timeout.count()) + " ms; retry later");
  }
  try {
    s->computed = f.get();
  } catch (const IncompatiblePreferences& e) {
    s->pending.reset();
    return error(422, e.what());
  } catch (const std::exception& e) {
    s->pending.reset();
    spdlog::error("session {}: {}", s->id, e.what());
    return error(500, e.what());
  }
  s->pending.reset();
  return std::nullopt;
}

}  // namespace

Response SessionService::representatives(const std::string& id) {
  auto s = find(id);
  if (!s) return error(404, "unknown session '" + id + "'");
  std::lock_guard lock(s->mutex);
  bool hit = false;
  if (auto failure = ensure_computed(s, options_, hit)) return *failure;
  return Response{200, s->computed->body, "application/json", hit};
}

Response SessionService::explanation(const std::string& id, const std::string& a,
                                     const std::string& b) {
  auto s = find(id);
  if (!s) return error(404, "unknown session '" + id + "'");
  if (a.empty() || b.empty()) return error(400, "query parameters 'a' and 'b' are required");
  std::lock_guard lock(s->mutex);
  for (const std::string& x : {a, b}) {
    if (!s->problem.contains(x)) return error(404, "unknown alternative '" + x + "'");
  }
  bool hit = false;
  if (auto failure = ensure_computed(s, options_, hit)) return *failure;
  try {
    const Explanation e = explain_pair(s->computed->analysis->discriminant, s->problem, a, b);
    return Response{200, serialize_explanation(e, Format::kJson), "application/json", hit};
  } catch (const NoCoveringFunction& e) {
    return error(409, e.what(), {{"a", a}, {"b", b}});
  }
}

void register_routes(httplib::Server& server, SessionService& service) {
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_header("X-Cache", r.cache_hit ? "hit" : "miss");
    res.set_content(r.body, r.content_type);
  };
  server.Post("/api/sessions", [&service, reply](const httplib::Request& req,
                                                 httplib::Response& res) {
    reply(res, service.create_session(req.body));
  });
  server.Get(R"(/api/sessions/([^/]+))",
             [&service, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, service.get_session(req.matches[1]));
             });
  server.Delete(R"(/api/sessions/([^/]+))",
                [&service, reply](const httplib::Request& req, httplib::Response& res) {
                  reply(res, service.delete_session(req.matches[1]));
                });
  server.Post(R"(/api/sessions/([^/]+)/preferences)",
              [&service, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, service.add_preference(req.matches[1], req.body));
              });
  server.Delete(R"(/api/sessions/([^/]+)/preferences/(\d+))",
                [&service, reply](const httplib::Request& req, httplib::Response& res) {
                  int index = -1;
                  try {
                    index = std::stoi(req.matches[2]);
                  } catch (const std::exception&) {
                  }
                  reply(res, service.remove_preference(req.matches[1], index));
                });
  server.Get(R"(/api/sessions/([^/]+)/relations)",
             [&service, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, service.relations(req.matches[1]));
             });
  server.Post(R"(/api/sessions/([^/]+)/representatives)",
              [&service, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, service.representatives(req.matches[1]));
              });
  server.Get(R"(/api/sessions/([^/]+)/explanations)",
             [&service, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, service.explanation(req.matches[1], req.get_param_value("a"),
                                              req.get_param_value("b")));
             });
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::info("{} {} -> {}", req.method, req.path, res.status);
  });
}

int serve(const ServiceOptions& options, const std::string& host, int port) {
  SessionService service(options);
  httplib::Server server;
  register_routes(server, service);
  spdlog::info("listening on {}:{}", host, port);
  if (!server.listen(host, port)) {
    spdlog::error("cannot listen on {}:{}", host, port);
    return 1;
  }
  return 0;
}

}  // namespace rorep::service
