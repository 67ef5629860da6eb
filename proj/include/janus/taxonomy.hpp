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

// Analysis and generation stages: candidate concepts, alignment, frequency
// filtering, inclusion/threshold merging and relationship annotation.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "janus/error.hpp"
#include "janus/fca.hpp"
#include "janus/ingest.hpp"
#include "janus/lexical.hpp"
#include "janus/similarity.hpp"

namespace janus::taxonomy {

enum class ConceptKind { kClass, kProperty };

inline std::string_view to_string(ConceptKind k) { return k == ConceptKind::kClass ? "class" : "property"; }

inline ConceptKind concept_kind_from_string(std::string_view s) {
  if (s == "class") return ConceptKind::kClass;
  if (s == "property") return ConceptKind::kProperty;
  throw Error(ErrorCode::kParseError, "unknown concept kind '" + std::string(s) + "'");
}

enum class RelationKind { kPropertyOf, kSynonym, kSharedTerm, kRelatedTo };

inline constexpr RelationKind kAllRelationKinds[] = {RelationKind::kPropertyOf, RelationKind::kSynonym,
                                                     RelationKind::kSharedTerm, RelationKind::kRelatedTo};

inline std::string_view to_string(RelationKind k) {
  switch (k) {
    case RelationKind::kPropertyOf: return "propertyOf";
    case RelationKind::kSynonym: return "synonym";
    case RelationKind::kSharedTerm: return "sharedTerm";
    case RelationKind::kRelatedTo: return "relatedTo";
  }
  return "relatedTo";
}

inline RelationKind relation_kind_from_string(std::string_view s) {
  for (auto k : kAllRelationKinds) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::kParseError, "unknown relationship kind '" + std::string(s) + "'");
}

struct ConceptNode {
  std::string concept_id;
  std::string canonical_name;
  std::set<std::string> labels;
  ConceptKind kind = ConceptKind::kClass;
  std::vector<std::string> tokens;
  std::size_t frequency = 0;
  std::size_t family_attendance = 0;
  std::vector<std::string> source_instances;  // sorted RawNode ids
  std::vector<std::string> merged_from;       // sorted absorbed concept ids
  std::set<std::string> families;

  friend bool operator==(const ConceptNode&, const ConceptNode&) = default;
};

struct Relationship {
  std::string src;
  std::string dst;
  RelationKind kind = RelationKind::kPropertyOf;
  std::optional<std::string> label;
  double weight = 1.0;

  auto key() const { return std::tie(src, dst, kind, label); }
  friend bool operator==(const Relationship&, const Relationship&) = default;
};

/// What remains of a concept after it was merged into `survivor`.
struct AliasRecord {
  std::string concept_id;
  std::string canonical_name;
  std::set<std::string> labels;
  ConceptKind kind = ConceptKind::kClass;
  std::string survivor;
  double score = 0.0;

  friend bool operator==(const AliasRecord&, const AliasRecord&) = default;
};

struct Provenance {
  std::string corpus_id;
  std::string params_id;
  std::vector<std::string> filtered_out;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct SemanticNetwork {
  std::map<std::string, ConceptNode> nodes;
  std::vector<Relationship> edges;  // kept sorted by (src, dst, kind, label)
  std::map<std::string, AliasRecord> aliases;
  Provenance provenance;

  /// Adds an edge unless it is a self-edge or its (src, dst, kind, label) key
  /// already exists. Returns whether it was added.
  bool add_edge(Relationship r) {
    if (r.src == r.dst) return false;
    auto pos = std::lower_bound(edges.begin(), edges.end(), r,
                                [](const Relationship& a, const Relationship& b) { return a.key() < b.key(); });
    if (pos != edges.end() && pos->key() == r.key()) return false;
    edges.insert(pos, std::move(r));
    return true;
  }

  std::size_t count(ConceptKind k) const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [k](const auto& kv) { return kv.second.kind == k; }));
  }

  /// Throws InvalidNetwork on dangling or self edges.
  void validate() const {
    for (const auto& e : edges) {
      if (!nodes.contains(e.src) || !nodes.contains(e.dst)) {
        throw Error(ErrorCode::kInvalidNetwork, "dangling edge " + e.src + " -> " + e.dst);
      }
      if (e.src == e.dst) throw Error(ErrorCode::kInvalidNetwork, "self edge on " + e.src);
    }
  }

  friend bool operator==(const SemanticNetwork&, const SemanticNetwork&) = default;
};

struct MergeParams {
  double align_threshold = 0.75;
  double merge_threshold = 0.9;
  std::size_t min_frequency = 1;
  std::size_t lattice_min_extent = 2;
  std::size_t lattice_min_intent = 2;

  void validate() const {
    if (!(align_threshold >= 0.0 && align_threshold <= 1.0)) {
      throw InvalidParams("align_threshold", "must be in [0, 1]");
    }
    if (!(merge_threshold >= 0.0 && merge_threshold <= 1.0)) {
      throw InvalidParams("merge_threshold", "must be in [0, 1]");
    }
    if (merge_threshold < align_threshold) {
      throw InvalidParams("merge_threshold", "must be >= align_threshold");
    }
    if (min_frequency < 1) throw InvalidParams("min_frequency", "must be >= 1");
    if (lattice_min_extent < 2) throw InvalidParams("lattice_min_extent", "must be >= 2");
    if (lattice_min_intent < 1) throw InvalidParams("lattice_min_intent", "must be >= 1");
  }

  friend bool operator==(const MergeParams&, const MergeParams&) = default;
};

struct Alignment {
  std::string a;  // a < b
  std::string b;
  double score = 0.0;
  bool by_cluster = false;

  friend bool operator==(const Alignment&, const Alignment&) = default;
};

inline std::string concept_id_for(ConceptKind kind, std::string_view canonical) {
  return std::string(to_string(kind)) + "." + std::string(canonical);
}

namespace detail {

template <class T>
void insert_sorted_unique(std::vector<T>& into, const std::vector<T>& from) {
  std::vector<T> merged;
  std::set_union(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(merged));
  into = std::move(merged);
}

inline lexical::TokenizedName as_tokenized(const ConceptNode& n) {
  return lexical::TokenizedName{n.canonical_name, n.tokens, n.tokens};
}

}  // namespace detail

/// Collapses raw constructs into candidate concepts keyed by (normalized
/// name, kind). complexTypes and elements with children become classes; leaf
/// elements and attributes become properties with a propertyOf edge to each
/// enclosing class. simpleTypes carry no concept.
inline SemanticNetwork build_candidates(const std::vector<ingest::RawNode>& nodes,
                                        const std::map<std::string, lexical::TokenizedName>& tokenized) {
  SemanticNetwork net;
  std::map<std::string, std::string> concept_of;  // raw node id -> concept id
  std::map<std::string, const ingest::RawNode*> by_id;
  for (const auto& n : nodes) by_id.emplace(n.node_id, &n);

  for (const auto& n : nodes) {
    if (n.kind == ingest::NodeKind::kSimpleType) continue;
    const bool is_class = n.kind == ingest::NodeKind::kComplexType ||
                          (n.kind == ingest::NodeKind::kElement && !n.child_ids.empty());
    const auto kind = is_class ? ConceptKind::kClass : ConceptKind::kProperty;
    auto tok_it = tokenized.find(n.node_id);
    const lexical::TokenizedName tokens =
        tok_it != tokenized.end() ? tok_it->second : lexical::TokenizedName{n.name, {}, {}};
    const std::string canonical =
        tokens.tokens.empty() ? lexical::detail::ascii_lower(n.name) : lexical::join(tokens.tokens);
    const auto id = concept_id_for(kind, canonical);
    auto [it, fresh] = net.nodes.try_emplace(id);
    auto& c = it->second;
    if (fresh) {
      c.concept_id = id;
      c.canonical_name = canonical;
      c.kind = kind;
      c.tokens = tokens.tokens;
      c.labels.insert(canonical);
    }
    c.labels.insert(n.name);
    c.source_instances.push_back(n.node_id);
    c.families.insert(n.family_id);
    concept_of[n.node_id] = id;
  }
  for (auto& [id, c] : net.nodes) {
    std::sort(c.source_instances.begin(), c.source_instances.end());
    c.frequency = c.source_instances.size();
    c.family_attendance = c.families.size();
  }
  for (const auto& n : nodes) {
    auto self = concept_of.find(n.node_id);
    if (self == concept_of.end() || !n.parent_id) continue;
    if (net.nodes.at(self->second).kind != ConceptKind::kProperty) continue;
    auto parent = concept_of.find(*n.parent_id);
    if (parent == concept_of.end() || net.nodes.at(parent->second).kind != ConceptKind::kClass) continue;
    net.add_edge({self->second, parent->second, RelationKind::kPropertyOf, std::nullopt, 1.0});
  }
  return net;
}

/// Canonical names of the properties attached to `class_id`.
inline std::set<std::string> property_set(const SemanticNetwork& net, const std::string& class_id) {
  std::set<std::string> out;
  for (const auto& e : net.edges) {
    if (e.kind == RelationKind::kPropertyOf && e.dst == class_id) out.insert(net.nodes.at(e.src).canonical_name);
  }
  return out;
}

inline std::string structural_attribute(std::string_view property_name) {
  return "has:" + std::string(property_name);
}

/// Objects are the class concepts; attributes are their name tokens plus a
/// "has:<property>" marker for each attached property.
inline fca::FormalContext build_context(const SemanticNetwork& net) {
  std::vector<std::string> objects;
  std::set<std::string> attributes;
  std::map<std::string, std::set<std::string>> carried;
  for (const auto& [id, c] : net.nodes) {
    if (c.kind != ConceptKind::kClass) continue;
    objects.push_back(id);
    auto& mine = carried[id];
    mine.insert(c.tokens.begin(), c.tokens.end());
    for (const auto& p : property_set(net, id)) mine.insert(structural_attribute(p));
    attributes.insert(mine.begin(), mine.end());
  }
  fca::FormalContext ctx(objects, std::vector<std::string>(attributes.begin(), attributes.end()));
  for (const auto& [id, attrs] : carried) {
    for (const auto& a : attrs) ctx.set(id, a);
  }
  return ctx;
}

/// Same-kind concept pairs whose combined name similarity reaches
/// align_threshold, or that share a lattice cluster. Sorted by score desc,
/// then id pair.
inline std::vector<Alignment> align_candidates(const SemanticNetwork& net, const similarity::SynonymLexicon& lex,
                                               const MergeParams& params) {
  std::set<std::pair<std::string, std::string>> clustered;
  {
    const auto ctx = build_context(net);
    const auto lattice = fca::build_lattice(ctx);
    for (const auto& cluster :
         fca::extract_clusters(ctx, lattice, params.lattice_min_extent, params.lattice_min_intent)) {
      for (std::size_t i = 0; i < cluster.size(); ++i) {
        for (std::size_t j = i + 1; j < cluster.size(); ++j) clustered.emplace(cluster[i], cluster[j]);
      }
    }
  }
  std::vector<const ConceptNode*> list;
  for (const auto& [id, c] : net.nodes) list.push_back(&c);
  std::vector<Alignment> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto ti = detail::as_tokenized(*list[i]);
    for (std::size_t j = i + 1; j < list.size(); ++j) {
      if (list[i]->kind != list[j]->kind) continue;
      const double score = similarity::name_similarity(ti, detail::as_tokenized(*list[j]), lex).combined;
      const bool in_cluster = clustered.contains({list[i]->concept_id, list[j]->concept_id});
      if (score >= params.align_threshold || in_cluster) {
        out.push_back({list[i]->concept_id, list[j]->concept_id, score, in_cluster});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Alignment& x, const Alignment& y) {
    if (x.score != y.score) return x.score > y.score;
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return out;
}

/// Drops classes below min_frequency with their edges, then properties that
/// lost their last propertyOf edge. Removed ids land in provenance.
inline SemanticNetwork filter_by_frequency(SemanticNetwork net, std::size_t min_frequency) {
  std::set<std::string> removed;
  for (const auto& [id, c] : net.nodes) {
    if (c.kind == ConceptKind::kClass && c.frequency < min_frequency) removed.insert(id);
  }
  if (removed.empty()) return net;
  std::set<std::string> had_owner;
  for (const auto& e : net.edges) {
    if (e.kind == RelationKind::kPropertyOf) had_owner.insert(e.src);
  }
  std::erase_if(net.edges, [&](const Relationship& e) { return removed.contains(e.src) || removed.contains(e.dst); });
  std::set<std::string> has_owner;
  for (const auto& e : net.edges) {
    if (e.kind == RelationKind::kPropertyOf) has_owner.insert(e.src);
  }
  for (const auto& id : had_owner) {
    if (!has_owner.contains(id)) removed.insert(id);
  }
  std::erase_if(net.edges, [&](const Relationship& e) { return removed.contains(e.src) || removed.contains(e.dst); });
  for (const auto& id : removed) net.nodes.erase(id);
  auto& log = net.provenance.filtered_out;
  log.insert(log.end(), removed.begin(), removed.end());
  std::sort(log.begin(), log.end());
  log.erase(std::unique(log.begin(), log.end()), log.end());
  return net;
}

namespace detail {

inline std::string resolve(const SemanticNetwork& net, std::string id) {
  for (auto it = net.aliases.find(id); it != net.aliases.end(); it = net.aliases.find(id)) id = it->second.survivor;
  return id;
}

inline void absorb(SemanticNetwork& net, const std::string& survivor_id, const std::string& absorbed_id,
                   double score) {
  auto& s = net.nodes.at(survivor_id);
  auto node = net.nodes.extract(absorbed_id);
  auto& a = node.mapped();
  s.labels.insert(a.labels.begin(), a.labels.end());
  insert_sorted_unique(s.source_instances, a.source_instances);
  s.families.insert(a.families.begin(), a.families.end());
  s.frequency = s.source_instances.size();
  s.family_attendance = s.families.size();
  std::vector<std::string> absorbed_ids = a.merged_from;
  absorbed_ids.push_back(a.concept_id);
  std::sort(absorbed_ids.begin(), absorbed_ids.end());
  insert_sorted_unique(s.merged_from, absorbed_ids);

  for (auto& [id, alias] : net.aliases) {
    if (alias.survivor == absorbed_id) alias.survivor = survivor_id;
  }
  net.aliases[absorbed_id] = AliasRecord{a.concept_id, a.canonical_name, a.labels, a.kind, survivor_id, score};

  std::vector<Relationship> old;
  old.swap(net.edges);
  for (auto& e : old) {
    if (e.src == absorbed_id) e.src = survivor_id;
    if (e.dst == absorbed_id) e.dst = survivor_id;
    net.add_edge(std::move(e));
  }
}

// Returns (survivor, absorbed) for an eligible pair, or nullopt.
inline std::optional<std::pair<std::string, std::string>> merge_direction(const SemanticNetwork& net,
                                                                          const std::string& x,
                                                                          const std::string& y, double score,
                                                                          const MergeParams& params) {
  const auto px = property_set(net, x);
  const auto py = property_set(net, y);
  const bool x_in_y = !px.empty() && std::includes(py.begin(), py.end(), px.begin(), px.end());
  const bool y_in_x = !py.empty() && std::includes(px.begin(), px.end(), py.begin(), py.end());
  if (x_in_y && !y_in_x) return std::pair{y, x};
  if (y_in_x && !x_in_y) return std::pair{x, y};
  if (!(x_in_y || score >= params.merge_threshold)) return std::nullopt;
  const auto& nx = net.nodes.at(x);
  const auto& ny = net.nodes.at(y);
  if (nx.frequency != ny.frequency) return nx.frequency > ny.frequency ? std::pair{x, y} : std::pair{y, x};
  if (nx.canonical_name != ny.canonical_name) {
    return nx.canonical_name < ny.canonical_name ? std::pair{x, y} : std::pair{y, x};
  }
  return x < y ? std::pair{x, y} : std::pair{y, x};
}

}  // namespace detail

/// Merges aligned class pairs when one property set is fully included in the
/// other (the included class is absorbed) or when the score reaches
/// merge_threshold (the less frequent class is absorbed; equal frequency keeps
/// the lexicographically smaller name). Repeats until nothing changes. Aligned
/// pairs left unmerged with score >= align_threshold and more than one source
/// family between them get a relatedTo edge.
inline SemanticNetwork merge_network(SemanticNetwork net, const std::vector<Alignment>& alignments,
                                     const MergeParams& params) {
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& al : alignments) {
      const auto x = detail::resolve(net, al.a);
      const auto y = detail::resolve(net, al.b);
      if (x == y || !net.nodes.contains(x) || !net.nodes.contains(y)) continue;
      if (net.nodes.at(x).kind != ConceptKind::kClass || net.nodes.at(y).kind != ConceptKind::kClass) continue;
      if (auto dir = detail::merge_direction(net, x, y, al.score, params)) {
        detail::absorb(net, dir->first, dir->second, al.score);
        changed = true;
      }
    }
  }
  for (const auto& al : alignments) {
    if (al.score < params.align_threshold) continue;
    auto x = detail::resolve(net, al.a);
    auto y = detail::resolve(net, al.b);
    if (x == y || !net.nodes.contains(x) || !net.nodes.contains(y)) continue;
    auto families = net.nodes.at(x).families;
    families.insert(net.nodes.at(y).families.begin(), net.nodes.at(y).families.end());
    if (families.size() < 2) continue;
    if (y < x) std::swap(x, y);
    net.add_edge({x, y, RelationKind::kRelatedTo, std::nullopt, al.score});
  }
  return net;
}

/// Adds synonym edges between same-kind single-token concepts whose tokens
/// share a synset, and one sharedTerm edge per common token between
/// compound-named concepts (weight 1 / global term frequency).
inline SemanticNetwork annotate_edges(SemanticNetwork net, const similarity::SynonymLexicon& lex,
                                      const lexical::TermStatsMap& term_stats) {
  std::vector<const ConceptNode*> singles;
  std::map<std::string, std::vector<std::string>> compound_index;  // term -> concept ids
  for (const auto& [id, c] : net.nodes) {
    if (c.tokens.size() == 1) singles.push_back(&c);
    if (c.tokens.size() >= 2) {
      std::set<std::string> terms(c.tokens.begin(), c.tokens.end());
      for (const auto& t : terms) compound_index[t].push_back(id);
    }
  }
  std::vector<Relationship> fresh;
  for (std::size_t i = 0; i < singles.size(); ++i) {
    for (std::size_t j = i + 1; j < singles.size(); ++j) {
      const auto& a = *singles[i];
      const auto& b = *singles[j];
      if (a.kind != b.kind || a.tokens[0] == b.tokens[0]) continue;
      if (lex.are_synonyms(a.tokens[0], b.tokens[0])) {
        fresh.push_back({a.concept_id, b.concept_id, RelationKind::kSynonym, std::nullopt, 1.0});
      }
    }
  }
  for (const auto& [term, ids] : compound_index) {
    double weight = 1.0;
    if (auto it = term_stats.find(term); it != term_stats.end() && it->second.global_frequency > 0) {
      weight = 1.0 / static_cast<double>(it->second.global_frequency);
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        fresh.push_back({ids[i], ids[j], RelationKind::kSharedTerm, term, weight});
      }
    }
  }
  for (auto& r : fresh) net.add_edge(std::move(r));
  return net;
}

}  // namespace janus::taxonomy
