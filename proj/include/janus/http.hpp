// Copyright 2026 The Janus Authors. All rights reserved.
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

// HTTP binding of the service handlers.

#pragma once

#include <string>

#include "httplib.h"

#include "janus/service.hpp"

namespace janus::http {

namespace detail {

inline service::Query query_of(const httplib::Request& req) {
  service::Query q;
  for (const auto& [k, v] : req.params) q.emplace(k, v);
  return q;
}

inline void reply(httplib::Response& res, const service::Response& r, std::size_t build) {
  res.status = r.status;
  res.set_header("X-Janus-Build", std::to_string(build));
  res.set_content(r.body.dump(), "application/json");
}

}  // namespace detail

/// Registers the /api routes on `server`. Every response names the build it
/// was computed from in X-Janus-Build.
inline void mount(httplib::Server& server, service::SnapshotStore& store) {
  using service::guarded;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  auto read = [&store](auto handler) {
    return [&store, handler](const httplib::Request& req, httplib::Response& res) {
      const auto kb = store.current();
      detail::reply(res, guarded([&] { return handler(*kb, detail::query_of(req)); }), service::build_number(*kb));
    };
  };
  server.Get("/api/terms", read([](const kb::KnowledgeBase& kb, const service::Query&) { return service::terms(kb); }));
  server.Get("/api/concepts", read(service::concepts));
  server.Get("/api/graph", read(service::graph));
  server.Get("/api/params",
             read([](const kb::KnowledgeBase& kb, const service::Query&) { return service::get_params(kb); }));
  server.Get("/api/associations",
             read([](const kb::KnowledgeBase& kb, const service::Query&) { return service::associations(kb); }));
  server.Get("/api/status", [&store](const httplib::Request&, httplib::Response& res) {
    const auto r = guarded([&] { return service::status(store); });
    detail::reply(res, r, r.body.value("build", std::size_t{0}));
  });
  server.Post("/api/params", [&store](const httplib::Request& req, httplib::Response& res) {
    const auto r = guarded([&] { return service::post_params(store, req.body); });
    detail::reply(res, r, r.status == 200 ? r.body.at("build").get<std::size_t>() : service::build_number(*store.current()));
  });
}

}  // namespace janus::http
