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

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "rorep/representative.hpp"

namespace httplib {
class Server;
}

namespace rorep::service {

struct ServiceOptions {
  RepresentativeParams params;
  int jobs = 1;
  // Sessions idle for longer than this are dropped.
  std::chrono::seconds ttl{3600};
  // Representatives computations running longer answer 503; the result is
  // still cached when it arrives.
  std::chrono::milliseconds timeout{60'000};
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  bool cache_hit = false;
};

struct Session;

// Session store behind the HTTP API. Every method is safe to call
// concurrently; calls on one session are serialised, calls on different
// sessions are not.
class SessionService {
 public:
  explicit SessionService(ServiceOptions options = {});
  ~SessionService();

  // Payload: the CSV or JSON table encoding. 201 with {"id": ...}.
  Response create_session(std::string_view payload);
  Response get_session(const std::string& id);
  Response delete_session(const std::string& id);

  // Body: {"statement": "a4 > a5"}, {"kind": "strict", "a": ..., "b": ...}
  // or the bare statement text. 201 with the statement list, 409 when the
  // statement would make the preferences incompatible.
  Response add_preference(const std::string& id, std::string_view body);
  Response remove_preference(const std::string& id, int index);

  Response relations(const std::string& id);
  Response representatives(const std::string& id);
  Response explanation(const std::string& id, const std::string& a, const std::string& b);

  // Drops expired sessions; returns how many were removed.
  std::size_t evict_expired();
  [[nodiscard]] std::size_t size() const;

 private:
  std::shared_ptr<Session> find(const std::string& id);

  ServiceOptions options_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

// Routes the endpoints under /api/sessions to `service`.
void register_routes(httplib::Server& server, SessionService& service);

// Blocks serving HTTP on host:port until the process is stopped.
int serve(const ServiceOptions& options, const std::string& host, int port);

}  // namespace rorep::service
