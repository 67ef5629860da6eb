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

#include <gtest/gtest.h>

#include <thread>

#include "janus/http.hpp"
#include "janus/service.hpp"

namespace janus::service {
namespace {

const std::string kData = std::string(JANUS_SOURCE_DIR) + "/data/";

kb::KnowledgeBase mini_kb() {
  std::vector<ingest::FamilySpec> families;
  for (const auto* f : {"invoicekit", "orderml", "tradex"}) families.push_back({f, {kData + "corpus/" + f}});
  static const auto kb = kb::run_pipeline(families, kb::load_config(kData + "janus.conf"), [] { return "t"; });
  return kb;
}

std::set<std::string> node_ids(const nlohmann::json& g) {
  std::set<std::string> out;
  for (const auto& n : g.at("nodes")) out.insert(n.at("id").get<std::string>());
  return out;
}

// A snapshot is complete when its network matches its last history entry.
bool complete(const kb::KnowledgeBase& kb) {
  const auto& h = kb.history.back();
  return h.node_count == kb.network.nodes.size() && h.edge_count == kb.network.edges.size() &&
         h.params == kb.params && kb.network.provenance.params_id == h.params_id;
}

TEST(Handlers, TermsByFrequency) {
  const auto r = terms(mini_kb());
  ASSERT_EQ(r.status, 200);
  ASSERT_FALSE(r.body.empty());
  for (std::size_t i = 1; i < r.body.size(); ++i) EXPECT_GE(r.body[i - 1]["frequency"], r.body[i]["frequency"]);
  const auto address = std::find_if(r.body.begin(), r.body.end(), [](const auto& t) { return t["term"] == "address"; });
  ASSERT_NE(address, r.body.end());
  EXPECT_EQ((*address)["family_attendance"], 3);
}

TEST(Handlers, ConceptsFilterAndSort) {
  const auto kb = mini_kb();
  const auto classes = concepts(kb, {{"kind", "class"}, {"sort", "frequency"}});
  ASSERT_EQ(classes.status, 200);
  EXPECT_EQ(classes.body.size(), kb.network.count(taxonomy::ConceptKind::kClass));
  for (std::size_t i = 0; i < classes.body.size(); ++i) {
    EXPECT_EQ(classes.body[i]["kind"], "class");
    if (i > 0) {
      EXPECT_GE(classes.body[i - 1]["frequency"], classes.body[i]["frequency"]);
    }
  }
  const auto found = concepts(kb, {{"q", "BOX"}});
  ASSERT_EQ(found.body.size(), 2u);
  EXPECT_EQ(found.body[0]["id"], "class.post_box_address");
  // address with tender_address, box and post with post_box_number, post with post_code.
  EXPECT_EQ(found.body[0]["relationship_counts"]["sharedTerm"], 4);
  EXPECT_EQ(found.body[0]["relationship_counts"]["propertyOf"], 3);
  EXPECT_EQ(found.body[1]["id"], "property.post_box_number");
  EXPECT_EQ(guarded([&] { return concepts(kb, {{"kind", "table"}}); }).body["field"], "kind");
  EXPECT_EQ(guarded([&] { return concepts(kb, {{"sort", "colour"}}); }).status, 400);
}

TEST(Handlers, GraphFocusDepthAndKinds) {
  const auto kb = mini_kb();
  const auto g = graph(kb, {{"focus", "tender_address"}, {"depth", "1"}, {"kinds", "sharedTerm"}});
  ASSERT_EQ(g.status, 200);
  EXPECT_EQ(node_ids(g.body), (std::set<std::string>{"class.post_box_address", "class.tender_address",
                                                     "property.tender_reference"}));
  for (const auto& e : g.body["edges"]) EXPECT_EQ(e["kind"], "sharedTerm");
  EXPECT_EQ(node_ids(graph(kb, {{"focus", "class.tender_address"}, {"depth", "0"}}).body),
            (std::set<std::string>{"class.tender_address"}));
  // Merged aliases resolve to their survivor.
  EXPECT_EQ(node_ids(graph(kb, {{"focus", "buyer_party"}, {"depth", "0"}}).body),
            (std::set<std::string>{"class.party"}));
  const auto whole = graph(kb, {{"kinds", "propertyOf"}});
  EXPECT_EQ(whole.body["nodes"].size(), kb.network.nodes.size());
  EXPECT_EQ(whole.body["edges"].size(), kb.network.count(taxonomy::ConceptKind::kProperty) == 0
                                            ? 0u
                                            : static_cast<std::size_t>(std::count_if(
                                                  kb.network.edges.begin(), kb.network.edges.end(), [](const auto& e) {
                                                    return e.kind == taxonomy::RelationKind::kPropertyOf;
                                                  })));
  EXPECT_EQ(guarded([&] { return graph(kb, {{"focus", "nope"}}); }).status, 404);
  EXPECT_EQ(guarded([&] { return graph(kb, {{"kinds", "propertyOf,likes"}}); }).body["field"], "kinds");
  EXPECT_EQ(guarded([&] { return graph(kb, {{"focus", "party"}, {"depth", "x"}}); }).body["field"], "depth");
}

TEST(Handlers, ParamsRoundTripAndValidation) {
  SnapshotStore store(mini_kb(), [] { return "t"; });
  const auto before = store.current();
  EXPECT_EQ(get_params(*before).body["params"]["merge_threshold"], 0.9);
  const auto same = post_params(store, R"({"merge_threshold": 0.9})");
  EXPECT_EQ(same.body["node_count"], same.body["previous"]["node_count"]);
  EXPECT_EQ(same.body["edge_count"], same.body["previous"]["edge_count"]);
  EXPECT_EQ(same.body["build"], 2);
  EXPECT_EQ(store.current()->network, before->network);
  auto bad = [&](const std::string& body) { return guarded([&] { return post_params(store, body); }); };
  EXPECT_EQ(bad(R"({"merge_threshold": 0.5})").body["field"], "merge_threshold");
  EXPECT_EQ(bad(R"({"min_frequency": 1.5})").body["field"], "min_frequency");
  EXPECT_EQ(bad(R"({"colour": 1})").body["field"], "colour");
  EXPECT_EQ(bad(R"({"align_threshold": "high"})").body["field"], "align_threshold");
  EXPECT_EQ(bad("not json").status, 400);
  EXPECT_EQ(store.current()->history.size(), 2u) << "rejected requests do not rebuild";
  const auto st = status(store);
  EXPECT_EQ(st.body["building"], false);
  EXPECT_EQ(st.body["history"].size(), 2u);
}

TEST(Handlers, Associations) {
  const auto r = associations(mini_kb());
  EXPECT_EQ(r.body.size(), mini_kb().corpus.associations.size());
}

TEST(SnapshotStore, ConcurrentReadsSeeCompleteSnapshots) {
  SnapshotStore store(mini_kb(), [] { return "t"; });
  std::atomic<bool> done{false};
  std::atomic<int> torn{0}, reads{0};
  std::vector<std::thread> readers;
  for (int i = 0; i < 3; ++i) {
    readers.emplace_back([&] {
      while (!done) {
        if (!complete(*store.current())) ++torn;
        ++reads;
      }
    });
  }
  std::vector<std::thread> writers;
  for (int i = 0; i < 5; ++i) {
    writers.emplace_back([&store, i] {
      auto p = store.current()->params;
      p.merge_threshold = 0.9 + i * 0.02;
      store.rebuild(p);
    });
  }
  for (auto& t : writers) t.join();
  done = true;
  for (auto& t : readers) t.join();
  EXPECT_EQ(torn, 0);
  EXPECT_GT(reads, 0);
  EXPECT_EQ(store.current()->history.size(), 6u);
  EXPECT_FALSE(store.building());
}

TEST(SnapshotStore, RebuildsRunInArrivalOrder) {
  std::vector<std::size_t> order;
  std::mutex mu;
  std::condition_variable cv;
  bool release = false;
  SnapshotStore store(mini_kb(), [] { return "t"; }, [&](const kb::KnowledgeBase& kb) {
    std::unique_lock lock(mu);
    order.push_back(kb.params.lattice_min_extent);
    // The first rebuild holds the queue until every other request is waiting.
    cv.wait(lock, [&] { return release; });
  });
  std::vector<std::thread> writers;
  for (int i = 0; i < 4; ++i) {
    writers.emplace_back([&store, i] {
      auto p = taxonomy::MergeParams{};
      p.lattice_min_extent = 2 + i;
      store.rebuild(p);
    });
    while (store.pending() < i + 1) std::this_thread::yield();
  }
  {
    std::lock_guard lock(mu);
    release = true;
  }
  cv.notify_all();
  for (auto& t : writers) t.join();
  EXPECT_EQ(order, (std::vector<std::size_t>{2, 3, 4, 5}));
  EXPECT_EQ(store.current()->params.lattice_min_extent, 5u);
}

TEST(Http, RoutesHeadersAndErrors) {
  SnapshotStore store(mini_kb(), [] { return "t"; });
  httplib::Server server;
  http::mount(server, store);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);

  auto res = client.Get("/api/status");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_EQ(res->get_header_value("X-Janus-Build"), "1");
  EXPECT_EQ(nlohmann::json::parse(res->body)["building"], false);

  res = client.Get("/api/graph?focus=tender_address&depth=1&kinds=sharedTerm");
  ASSERT_TRUE(res);
  EXPECT_EQ(nlohmann::json::parse(res->body)["edges"].size(), 2u);

  res = client.Get("/api/graph?focus=missing");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(nlohmann::json::parse(res->body)["error"], "UnknownId");

  res = client.Post("/api/params", R"({"merge_threshold": 1.0})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("X-Janus-Build"), "2");

  res = client.Post("/api/params", R"({"merge_threshold": 0.1})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(nlohmann::json::parse(res->body)["field"], "merge_threshold");

  res = client.Options("/api/params");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 204);

  for (const auto* path : {"/api/terms", "/api/concepts?kind=property", "/api/params", "/api/associations"}) {
    res = client.Get(path);
    ASSERT_TRUE(res) << path;
    EXPECT_EQ(res->status, 200) << path;
    EXPECT_TRUE(nlohmann::json::accept(res->body)) << path;
  }
  server.stop();
  loop.join();
}

}  // namespace
}  // namespace janus::service
