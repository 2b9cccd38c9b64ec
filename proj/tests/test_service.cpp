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

#include <chrono>
#include <json.hpp>
#include <thread>

#include "rorep/io.hpp"
#include "rorep/result_document.hpp"
#include "rorep/service.hpp"
#include "support/fixtures.hpp"

// After Eigen: the resolver headers pulled in here define macros that
// collide with Eigen parameter names.
#include <httplib.h>

using namespace rorep;
using namespace rorep::service;
using nlohmann::json;

namespace {

std::string democracy_csv() { return io::read_file(ROREP_DATA_DIR "/democracy.csv"); }

json body_of(const Response& r) { return json::parse(r.body); }

std::string create(SessionService& svc, const std::string& table) {
  const Response r = svc.create_session(table);
  REQUIRE(r.status == 201);
  return body_of(r)["id"].get<std::string>();
}

std::string democracy_session(SessionService& svc) {
  const std::string id = create(svc, democracy_csv());
  for (const char* s : {"a4 > a5", "a8 > a10", "a7 > a6"}) {
    REQUIRE(svc.add_preference(id, s).status == 201);
  }
  return id;
}

// The CLI `representatives` document for the democracy run.
const std::string& democracy_document() {
  static const std::string text = [] {
    const Problem p = rorep::testing::democracy_problem();
    const auto statements = rorep::testing::democracy_statements();
    const RepresentativeParams params;
    ResultDocument doc = make_document(p, statements, params);
    add_analysis(doc, p, analyze(base_system(p, statements), params));
    return serialize_results(doc, Format::kJson);
  }();
  return text;
}

const char* kDominated = "alternative,g1,g2\na,2,3\nb,1,3\n";

}  // namespace

TEST_CASE("session lifecycle and status codes") {
  SessionService svc;
  CHECK(svc.create_session("").status == 400);
  const Response bad = svc.create_session("alternative,g1\na1,\"6,25\"\n");
  CHECK(bad.status == 400);
  CHECK(body_of(bad)["line"] == 2);

  const std::string id = create(svc, democracy_csv());
  CHECK(svc.size() == 1);
  const json info = body_of(svc.get_session(id));
  CHECK(info["alternatives"].size() == 10);
  CHECK(info["criteria"].size() == 5);
  CHECK(info["statements"].empty());

  CHECK(svc.get_session("nope").status == 404);
  CHECK(svc.add_preference("nope", "a1 > a2").status == 404);
  CHECK(svc.add_preference(id, "a1 >> a2").status == 400);
  CHECK(svc.add_preference(id, "a1 > zz").status == 400);
  CHECK(svc.add_preference(id, R"({"kind": "strict", "a": "a4", "b": "a5"})").status == 201);
  CHECK(svc.add_preference(id, R"({"statement": "a8 > a10"})").status == 201);
  CHECK(svc.remove_preference(id, 7).status == 404);
  CHECK(svc.explanation(id, "", "a1").status == 400);
  CHECK(svc.explanation(id, "a1", "zz").status == 404);

  CHECK(svc.delete_session(id).status == 200);
  CHECK(svc.delete_session(id).status == 404);
  CHECK(svc.size() == 0);
}

TEST_CASE("incompatible statements are rejected without changing the session") {
  SessionService svc;
  const std::string id = democracy_session(svc);
  const Response before = svc.relations(id);
  REQUIRE(before.status == 200);
  const Response rejected = svc.add_preference(id, "a3 > a2");
  CHECK(rejected.status == 409);
  const json j = body_of(rejected);
  CHECK(j["rejected"] == "a3 > a2");
  CHECK(j["statements"].size() == 3);
  const Response after = svc.relations(id);
  CHECK(after.body == before.body);
  CHECK(after.cache_hit);
  CHECK(body_of(after)["relations"]["counts"]["necessary"] == 32);
}

TEST_CASE("removing a statement matches a fresh session") {
  SessionService svc;
  const std::string id = democracy_session(svc);
  const json listed = body_of(svc.remove_preference(id, 0));
  CHECK(listed["statements"].size() == 2);
  CHECK(listed["statements"][0]["index"] == 1);

  const std::string fresh = create(svc, democracy_csv());
  REQUIRE(svc.add_preference(fresh, "a8 > a10").status == 201);
  REQUIRE(svc.add_preference(fresh, "a7 > a6").status == 201);
  CHECK(svc.relations(id).body == svc.relations(fresh).body);

  // Indices keep counting after removals.
  const json added = body_of(svc.add_preference(id, "a4 > a5"));
  CHECK(added["statements"][2]["index"] == 3);
}

TEST_CASE("representatives are cached and match the cli document") {
  SessionService svc;
  const std::string id = democracy_session(svc);
  const Response first = svc.representatives(id);
  REQUIRE(first.status == 200);
  CHECK_FALSE(first.cache_hit);
  const Response second = svc.representatives(id);
  CHECK(second.cache_hit);
  CHECK(second.body == first.body);
  CHECK(first.body == democracy_document());

  const json j = body_of(first);
  CHECK(j["minimality"]["t"] == 3);
  CHECK(j["discriminant"]["epsilon_star"].get<double>() == doctest::Approx(1.0 / 11.0).epsilon(1e-4));

  const Response why = svc.explanation(id, "a4", "a8");
  CHECK(why.status == 200);
  CHECK(why.cache_hit);
  CHECK(body_of(why)["margin"].get<double>() > 0.0);
  CHECK(svc.explanation(id, "a3", "a2").status == 409);
  CHECK(svc.explanation(id, "a4", "a4").status == 409);

  // A change invalidates the cache.
  REQUIRE(svc.remove_preference(id, 2).status == 200);
  const Response changed = svc.relations(id);
  CHECK_FALSE(changed.cache_hit);
  CHECK(body_of(changed)["problem"]["statements"].size() == 2);
}

TEST_CASE("degenerate sessions") {
  SessionService svc;
  const std::string single = create(svc, "alternative,g1,g2\nonly,1,2\n");
  const Response one = svc.representatives(single);
  REQUIRE(one.status == 200);
  CHECK(body_of(one)["minimality"]["t"] == 1);
  CHECK(body_of(one)["relations"]["counts"]["d"] == 0);

  const std::string dominated = create(svc, kDominated);
  const Response two = svc.representatives(dominated);
  REQUIRE(two.status == 200);
  const json j = body_of(two);
  CHECK(j["relations"]["counts"]["strict"] == 1);
  CHECK(j["relations"]["counts"]["d"] == 0);
  CHECK(j["minimality"]["t"] == 1);
  CHECK(svc.explanation(dominated, "a", "b").status == 200);
  CHECK(svc.explanation(dominated, "b", "a").status == 409);
}

TEST_CASE("idle sessions expire") {
  ServiceOptions options;
  options.ttl = std::chrono::seconds(0);
  SessionService svc(options);
  const std::string id = create(svc, kDominated);
  std::this_thread::sleep_for(std::chrono::milliseconds(5));
  CHECK(svc.evict_expired() == 1);
  CHECK(svc.get_session(id).status == 404);
}

TEST_CASE("slow computations answer 503 and are cached later") {
  ServiceOptions options;
  options.timeout = std::chrono::milliseconds(1);
  SessionService svc(options);
  const std::string id = democracy_session(svc);
  CHECK(svc.representatives(id).status == 503);
  Response r;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(120);
  do {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    r = svc.representatives(id);
  } while (r.status == 503 && std::chrono::steady_clock::now() < deadline);
  REQUIRE(r.status == 200);
  CHECK(r.cache_hit);
  CHECK(r.body == democracy_document());
}

TEST_CASE("http routes") {
  SessionService svc;
  httplib::Server server;
  register_routes(server, svc);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);

  auto created = client.Post("/api/sessions", kDominated, "text/csv");
  REQUIRE(created);
  CHECK(created->status == 201);
  CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
  const std::string id = json::parse(created->body)["id"].get<std::string>();
  const std::string base = "/api/sessions/" + id;

  auto preflight = client.Options(base + "/preferences");
  REQUIRE(preflight);
  CHECK(preflight->status == 204);

  auto info = client.Get(base);
  REQUIRE(info);
  CHECK(info->status == 200);
  CHECK(client.Get("/api/sessions/missing")->status == 404);

  auto added = client.Post(base + "/preferences", R"({"statement": "a > b"})", "application/json");
  REQUIRE(added);
  CHECK(added->status == 201);
  CHECK(client.Post(base + "/preferences", "b > a", "text/plain")->status == 409);

  auto rel = client.Get(base + "/relations");
  REQUIRE(rel);
  CHECK(rel->status == 200);
  CHECK(rel->get_header_value("X-Cache") == "miss");
  CHECK(client.Get(base + "/relations")->get_header_value("X-Cache") == "hit");

  auto reps = client.Post(base + "/representatives", "", "application/json");
  REQUIRE(reps);
  CHECK(reps->status == 200);
  CHECK(reps->get_header_value("X-Cache") == "miss");
  auto again = client.Post(base + "/representatives", "", "application/json");
  CHECK(again->get_header_value("X-Cache") == "hit");
  CHECK(again->body == reps->body);

  CHECK(client.Get(base + "/explanations?a=a&b=b")->status == 200);
  CHECK(client.Get(base + "/explanations?a=b&b=a")->status == 409);
  CHECK(client.Get(base + "/explanations?a=a")->status == 400);
  CHECK(client.Get(base + "/explanations?a=a&b=zz")->status == 404);

  CHECK(client.Delete(base + "/preferences/0")->status == 200);
  CHECK(client.Delete(base + "/preferences/0")->status == 404);
  CHECK(client.Delete(base)->status == 200);
  CHECK(client.Get(base)->status == 404);

  server.stop();
  worker.join();
}
