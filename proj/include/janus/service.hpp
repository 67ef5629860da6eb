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

// Snapshot store and transport-free handlers behind the HTTP API.

#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "janus/error.hpp"
#include "janus/kb.hpp"
#include "janus/owl.hpp"

namespace janus::service {

using KbPtr = std::shared_ptr<const kb::KnowledgeBase>;

/// Holds the published knowledge base. Readers take the current pointer and
/// keep a complete snapshot alive for as long as they use it; rebuilds run
/// one at a time in arrival order and publish with a pointer swap.
class SnapshotStore {
 public:
  using Publish = std::function<void(const kb::KnowledgeBase&)>;

  explicit SnapshotStore(kb::KnowledgeBase kb, kb::Clock clock = kb::utc_now, Publish on_publish = {})
      : current_(std::make_shared<const kb::KnowledgeBase>(std::move(kb))),
        clock_(std::move(clock)),
        on_publish_(std::move(on_publish)) {}

  KbPtr current() const {
    std::lock_guard lock(mu_);
    return current_;
  }

  bool building() const noexcept { return pending_.load() > 0; }

  /// Rebuild requests holding a ticket, including the one running.
  int pending() const noexcept { return pending_.load(); }

  /// Blocks until every earlier request has finished, then rebuilds from the
  /// snapshot current at that point. Throws InvalidParams without queueing
  /// when `params` are invalid.
  KbPtr rebuild(const taxonomy::MergeParams& params) {
    params.validate();
    std::unique_lock queue(queue_mu_);
    const std::uint64_t ticket = next_ticket_++;
    ++pending_;
    turn_.wait(queue, [&] { return serving_ == ticket; });
    queue.unlock();
    KbPtr next;
    try {
      next = std::make_shared<const kb::KnowledgeBase>(kb::reparameterize(*current(), params, clock_));
      if (on_publish_) on_publish_(*next);
      std::lock_guard lock(mu_);
      current_ = next;
    } catch (...) {
      finish();
      throw;
    }
    finish();
    return next;
  }

 private:
  void finish() {
    {
      std::lock_guard queue(queue_mu_);
      ++serving_;
    }
    --pending_;
    turn_.notify_all();
  }

  mutable std::mutex mu_;
  KbPtr current_;
  kb::Clock clock_;
  Publish on_publish_;

  std::mutex queue_mu_;
  std::condition_variable turn_;
  std::uint64_t next_ticket_ = 0;
  std::uint64_t serving_ = 0;
  std::atomic<int> pending_{0};
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

using Query = std::map<std::string, std::string>;

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownId: return 404;
    case ErrorCode::kInvalidParams:
    case ErrorCode::kParseError:
    case ErrorCode::kUnsupportedFormat: return 400;
    default: return 500;
  }
}

inline Response error_response(const Error& e) {
  nlohmann::json body = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (const auto* p = dynamic_cast<const InvalidParams*>(&e)) body["field"] = p->field();
  return {http_status(e.code()), std::move(body)};
}

/// Build number of a snapshot: its position in the history.
inline std::size_t build_number(const kb::KnowledgeBase& kb) { return kb.history.size(); }

inline Response terms(const kb::KnowledgeBase& kb) {
  std::vector<const lexical::TermStats*> rows;
  for (const auto& [term, s] : kb.corpus.term_stats) rows.push_back(&s);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto* a, const auto* b) { return a->global_frequency > b->global_frequency; });
  auto out = nlohmann::json::array();
  for (const auto* s : rows) {
    out.push_back({{"term", s->term}, {"frequency", s->global_frequency}, {"family_attendance", s->family_attendance()}});
  }
  return {200, std::move(out)};
}

namespace detail {

inline std::string lower(std::string s) { return lexical::detail::ascii_lower(s); }

inline std::string param(const Query& q, const std::string& key, std::string fallback = {}) {
  auto it = q.find(key);
  return it == q.end() || it->second.empty() ? fallback : it->second;
}

inline std::set<taxonomy::RelationKind> parse_kinds(const std::string& csv) {
  std::set<taxonomy::RelationKind> out;
  if (csv.empty()) return {std::begin(taxonomy::kAllRelationKinds), std::end(taxonomy::kAllRelationKinds)};
  std::size_t start = 0;
  for (auto comma = csv.find(','); ; comma = csv.find(',', start)) {
    const auto item = lexical::detail::trim(csv.substr(start, comma - start));
    try {
      if (!item.empty()) out.insert(taxonomy::relation_kind_from_string(item));
    } catch (const Error&) {
      throw InvalidParams("kinds", "unknown relationship kind '" + item + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw InvalidParams("kinds", "no relationship kind selected");
  return out;
}

/// Node id for a focus given as an id, a canonical name or a merged alias.
inline std::string resolve_focus(const taxonomy::SemanticNetwork& net, const std::string& focus) {
  for (const auto& candidate : {focus, taxonomy::concept_id_for(taxonomy::ConceptKind::kClass, focus),
                                taxonomy::concept_id_for(taxonomy::ConceptKind::kProperty, focus)}) {
    if (net.nodes.contains(candidate)) return candidate;
    auto id = taxonomy::detail::resolve(net, candidate);
    if (id != candidate && net.nodes.contains(id)) return id;
  }
  throw Error(ErrorCode::kUnknownId, "unknown concept '" + focus + "'");
}

}  // namespace detail

/// Table rows filtered by kind and a case-insensitive label substring.
/// sort: id (default), label, frequency or family_attendance; counts sort
/// descending.
inline Response concepts(const kb::KnowledgeBase& kb, const Query& q) {
  const auto& net = kb.network;
  const auto kind = detail::param(q, "kind");
  if (!kind.empty() && kind != "class" && kind != "property") throw InvalidParams("kind", "expected class or property");
  const auto sort = detail::param(q, "sort", "id");
  if (sort != "id" && sort != "label" && sort != "frequency" && sort != "family_attendance") {
    throw InvalidParams("sort", "expected id, label, frequency or family_attendance");
  }
  const auto needle = detail::lower(detail::param(q, "q"));

  std::map<std::string, std::map<std::string, std::size_t>> counts;
  for (const auto& e : net.edges) {
    const std::string k(to_string(e.kind));
    ++counts[e.src][k];
    ++counts[e.dst][k];
  }
  std::vector<const taxonomy::ConceptNode*> rows;
  for (const auto& [id, c] : net.nodes) {
    if (!kind.empty() && to_string(c.kind) != kind) continue;
    if (!needle.empty() && std::none_of(c.labels.begin(), c.labels.end(), [&](const std::string& l) {
          return detail::lower(l).find(needle) != std::string::npos;
        })) {
      continue;
    }
    rows.push_back(&c);
  }
  std::stable_sort(rows.begin(), rows.end(), [&](const auto* a, const auto* b) {
    if (sort == "label") return a->canonical_name < b->canonical_name;
    if (sort == "frequency") return a->frequency > b->frequency;
    if (sort == "family_attendance") return a->family_attendance > b->family_attendance;
    return false;
  });
  auto out = nlohmann::json::array();
  for (const auto* c : rows) {
    nlohmann::json rc = nlohmann::json::object();
    for (auto k : taxonomy::kAllRelationKinds) {
      const std::string name(to_string(k));
      auto it = counts.find(c->concept_id);
      rc[name] = it == counts.end() || !it->second.contains(name) ? 0 : it->second.at(name);
    }
    out.push_back({{"id", c->concept_id},
                   {"label", c->canonical_name},
                   {"kind", std::string(to_string(c->kind))},
                   {"frequency", c->frequency},
                   {"family_attendance", c->family_attendance},
                   {"source_instances", c->source_instances},
                   {"relationship_counts", std::move(rc)}});
  }
  return {200, std::move(out)};
}

/// Whole graph, or the neighbourhood of `focus` up to `depth` hops over the
/// selected edge kinds (default depth 1, all kinds).
inline Response graph(const kb::KnowledgeBase& kb, const Query& q) {
  const auto& net = kb.network;
  const auto kinds = detail::parse_kinds(detail::param(q, "kinds"));
  const auto focus = detail::param(q, "focus");
  if (focus.empty()) return {200, owl::graph_to_json(net, nullptr, &kinds)};
  const std::size_t depth = kb::detail::parse_count("depth", detail::param(q, "depth", "1"));
  std::set<std::string> seen{detail::resolve_focus(net, focus)};
  std::vector<std::string> frontier(seen.begin(), seen.end());
  for (std::size_t hop = 0; hop < depth && !frontier.empty(); ++hop) {
    std::vector<std::string> next;
    for (const auto& e : net.edges) {
      if (!kinds.contains(e.kind)) continue;
      for (const auto& [from, to] : {std::pair{&e.src, &e.dst}, std::pair{&e.dst, &e.src}}) {
        if (std::binary_search(frontier.begin(), frontier.end(), *from) && seen.insert(*to).second) {
          next.push_back(*to);
        }
      }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  return {200, owl::graph_to_json(net, &seen, &kinds)};
}

inline Response get_params(const kb::KnowledgeBase& kb) {
  return {200, {{"params", kb.params}, {"params_id", kb::params_id(kb.params)}}};
}

/// Applies the given fields over the current params and rebuilds.
inline Response post_params(SnapshotStore& store, const std::string& body) {
  nlohmann::json patch;
  try {
    patch = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("request body: ") + e.what());
  }
  if (!patch.is_object()) throw Error(ErrorCode::kParseError, "request body must be a JSON object");
  const auto before = store.current();
  auto params = before->params;
  for (const auto& [key, value] : patch.items()) {
    if (!value.is_number()) throw InvalidParams(key, "expected a number");
    if (!kb::set_param(params, key, value.dump())) throw InvalidParams(key, "unknown parameter");
  }
  const auto after = store.rebuild(params);
  return {200,
          {{"params", after->params},
           {"params_id", kb::params_id(after->params)},
           {"build", build_number(*after)},
           {"node_count", after->network.nodes.size()},
           {"edge_count", after->network.edges.size()},
           {"previous", {{"node_count", before->network.nodes.size()}, {"edge_count", before->network.edges.size()}}}}};
}

inline Response associations(const kb::KnowledgeBase& kb) { return {200, kb.corpus.associations}; }

inline Response status(const SnapshotStore& store) {
  const auto kb = store.current();
  auto history = nlohmann::json::array();
  for (const auto& h : kb->history) {
    history.push_back({{"params", h.params}, {"params_id", h.params_id}, {"timestamp", h.timestamp},
                       {"node_count", h.node_count}, {"edge_count", h.edge_count}});
  }
  return {200,
          {{"building", store.building()},
           {"build", build_number(*kb)},
           {"corpus_id", kb->corpus.corpus_id},
           {"history", std::move(history)}}};
}

/// Runs a handler and maps library errors to JSON error responses.
inline Response guarded(const std::function<Response()>& handler) {
  try {
    return handler();
  } catch (const Error& e) {
    return error_response(e);
  }
}

}  // namespace janus::service
