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

// Knowledge base: pipeline orchestration, re-parameterization, config files
// and versioned JSON persistence.

#pragma once

#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "janus/error.hpp"
#include "janus/ingest.hpp"
#include "janus/lexical.hpp"
#include "janus/owl.hpp"
#include "janus/similarity.hpp"
#include "janus/taxonomy.hpp"

namespace janus {

// JSON mappings for the persisted types. They live next to the types so
// nlohmann's ADL lookup finds them inside containers.

namespace detail {

template <class T>
nlohmann::json optional_to_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> optional_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

}  // namespace detail

namespace ingest {

inline void to_json(nlohmann::json& j, const SchemaDoc& d) {
  j = {{"doc_id", d.doc_id}, {"family_id", d.family_id}, {"source_path", d.source_path},
       {"target_namespace", janus::detail::optional_to_json(d.target_namespace)}};
}
inline void from_json(const nlohmann::json& j, SchemaDoc& d) {
  j.at("doc_id").get_to(d.doc_id);
  j.at("family_id").get_to(d.family_id);
  j.at("source_path").get_to(d.source_path);
  d.target_namespace = janus::detail::optional_from_json<std::string>(j.at("target_namespace"));
}

inline void to_json(nlohmann::json& j, const SchemaFamily& f) {
  j = {{"family_id", f.family_id}, {"name", f.name}, {"docs", f.docs}};
}
inline void from_json(const nlohmann::json& j, SchemaFamily& f) {
  j.at("family_id").get_to(f.family_id);
  j.at("name").get_to(f.name);
  j.at("docs").get_to(f.docs);
}

inline void to_json(nlohmann::json& j, const RawNode& n) {
  j = {{"node_id", n.node_id},
       {"name", n.name},
       {"kind", std::string(to_string(n.kind))},
       {"parent_id", janus::detail::optional_to_json(n.parent_id)},
       {"child_ids", n.child_ids},
       {"type_ref", janus::detail::optional_to_json(n.type_ref)},
       {"ref", janus::detail::optional_to_json(n.ref)},
       {"family_id", n.family_id},
       {"doc_id", n.doc_id},
       {"global", n.global}};
}
inline void from_json(const nlohmann::json& j, RawNode& n) {
  j.at("node_id").get_to(n.node_id);
  j.at("name").get_to(n.name);
  n.kind = node_kind_from_string(j.at("kind").get<std::string>());
  n.parent_id = janus::detail::optional_from_json<std::string>(j.at("parent_id"));
  j.at("child_ids").get_to(n.child_ids);
  n.type_ref = janus::detail::optional_from_json<std::string>(j.at("type_ref"));
  n.ref = janus::detail::optional_from_json<std::string>(j.at("ref"));
  j.at("family_id").get_to(n.family_id);
  j.at("doc_id").get_to(n.doc_id);
  j.at("global").get_to(n.global);
}

inline void to_json(nlohmann::json& j, const IngestReport& r) {
  j = {{"files_parsed", r.files_parsed},     {"nodes_extracted", r.nodes_extracted},
       {"unresolved_refs", r.unresolved_refs}, {"cycles", r.cycles},
       {"ignored_constructs", r.ignored_constructs}, {"errors", r.errors}};
}
inline void from_json(const nlohmann::json& j, IngestReport& r) {
  j.at("files_parsed").get_to(r.files_parsed);
  j.at("nodes_extracted").get_to(r.nodes_extracted);
  j.at("unresolved_refs").get_to(r.unresolved_refs);
  j.at("cycles").get_to(r.cycles);
  j.at("ignored_constructs").get_to(r.ignored_constructs);
  j.at("errors").get_to(r.errors);
}

}  // namespace ingest

namespace lexical {

inline void to_json(nlohmann::json& j, const TokenizedName& t) {
  j = {{"original", t.original}, {"tokens", t.tokens}, {"raw_tokens", t.raw_tokens}};
}
inline void from_json(const nlohmann::json& j, TokenizedName& t) {
  j.at("original").get_to(t.original);
  j.at("tokens").get_to(t.tokens);
  j.at("raw_tokens").get_to(t.raw_tokens);
}

inline void to_json(nlohmann::json& j, const TermStats& s) {
  j = {{"term", s.term}, {"global_frequency", s.global_frequency},
       {"per_family_frequency", s.per_family_frequency}, {"document_frequency", s.document_frequency}};
}
inline void from_json(const nlohmann::json& j, TermStats& s) {
  j.at("term").get_to(s.term);
  j.at("global_frequency").get_to(s.global_frequency);
  j.at("per_family_frequency").get_to(s.per_family_frequency);
  j.at("document_frequency").get_to(s.document_frequency);
}

inline void to_json(nlohmann::json& j, const AssociationRule& r) {
  j = {{"antecedent", r.antecedent}, {"consequent", r.consequent}, {"support", r.support},
       {"confidence", r.confidence}};
}
inline void from_json(const nlohmann::json& j, AssociationRule& r) {
  j.at("antecedent").get_to(r.antecedent);
  j.at("consequent").get_to(r.consequent);
  j.at("support").get_to(r.support);
  j.at("confidence").get_to(r.confidence);
}

}  // namespace lexical

namespace taxonomy {

inline void to_json(nlohmann::json& j, const MergeParams& p) {
  j = {{"align_threshold", p.align_threshold},
       {"merge_threshold", p.merge_threshold},
       {"min_frequency", p.min_frequency},
       {"lattice_min_extent", p.lattice_min_extent},
       {"lattice_min_intent", p.lattice_min_intent}};
}
inline void from_json(const nlohmann::json& j, MergeParams& p) {
  j.at("align_threshold").get_to(p.align_threshold);
  j.at("merge_threshold").get_to(p.merge_threshold);
  j.at("min_frequency").get_to(p.min_frequency);
  j.at("lattice_min_extent").get_to(p.lattice_min_extent);
  j.at("lattice_min_intent").get_to(p.lattice_min_intent);
}

inline void to_json(nlohmann::json& j, const ConceptNode& c) {
  j = {{"concept_id", c.concept_id},
       {"canonical_name", c.canonical_name},
       {"labels", c.labels},
       {"kind", std::string(to_string(c.kind))},
       {"tokens", c.tokens},
       {"frequency", c.frequency},
       {"family_attendance", c.family_attendance},
       {"source_instances", c.source_instances},
       {"merged_from", c.merged_from},
       {"families", c.families}};
}
inline void from_json(const nlohmann::json& j, ConceptNode& c) {
  j.at("concept_id").get_to(c.concept_id);
  j.at("canonical_name").get_to(c.canonical_name);
  j.at("labels").get_to(c.labels);
  c.kind = concept_kind_from_string(j.at("kind").get<std::string>());
  j.at("tokens").get_to(c.tokens);
  j.at("frequency").get_to(c.frequency);
  j.at("family_attendance").get_to(c.family_attendance);
  j.at("source_instances").get_to(c.source_instances);
  j.at("merged_from").get_to(c.merged_from);
  j.at("families").get_to(c.families);
}

inline void to_json(nlohmann::json& j, const Relationship& r) {
  j = {{"src", r.src}, {"dst", r.dst}, {"kind", std::string(to_string(r.kind))},
       {"label", janus::detail::optional_to_json(r.label)}, {"weight", r.weight}};
}
inline void from_json(const nlohmann::json& j, Relationship& r) {
  j.at("src").get_to(r.src);
  j.at("dst").get_to(r.dst);
  r.kind = relation_kind_from_string(j.at("kind").get<std::string>());
  r.label = janus::detail::optional_from_json<std::string>(j.at("label"));
  j.at("weight").get_to(r.weight);
}

inline void to_json(nlohmann::json& j, const AliasRecord& a) {
  j = {{"concept_id", a.concept_id}, {"canonical_name", a.canonical_name}, {"labels", a.labels},
       {"kind", std::string(to_string(a.kind))}, {"survivor", a.survivor}, {"score", a.score}};
}
inline void from_json(const nlohmann::json& j, AliasRecord& a) {
  j.at("concept_id").get_to(a.concept_id);
  j.at("canonical_name").get_to(a.canonical_name);
  j.at("labels").get_to(a.labels);
  a.kind = concept_kind_from_string(j.at("kind").get<std::string>());
  j.at("survivor").get_to(a.survivor);
  j.at("score").get_to(a.score);
}

inline void to_json(nlohmann::json& j, const SemanticNetwork& n) {
  j = {{"nodes", n.nodes},
       {"edges", n.edges},
       {"aliases", n.aliases},
       {"provenance",
        {{"corpus_id", n.provenance.corpus_id},
         {"params_id", n.provenance.params_id},
         {"filtered_out", n.provenance.filtered_out}}}};
}
inline void from_json(const nlohmann::json& j, SemanticNetwork& n) {
  j.at("nodes").get_to(n.nodes);
  j.at("edges").get_to(n.edges);
  j.at("aliases").get_to(n.aliases);
  const auto& p = j.at("provenance");
  p.at("corpus_id").get_to(n.provenance.corpus_id);
  p.at("params_id").get_to(n.provenance.params_id);
  p.at("filtered_out").get_to(n.provenance.filtered_out);
}

}  // namespace taxonomy

namespace kb {

inline constexpr int kSchemaVersion = 1;

/// 64-bit FNV-1a as 16 hex digits. Used for content ids only.
inline std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string params_id(const taxonomy::MergeParams& p) { return content_hash(nlohmann::json(p).dump()); }

struct Resources {
  lexical::StopwordSet stopwords;
  lexical::AbbreviationTable abbreviations;
  similarity::SynonymLexicon lexicon;

  friend bool operator==(const Resources&, const Resources&) = default;
};

struct MiningParams {
  double min_support = 0.1;
  double min_confidence = 0.6;

  friend bool operator==(const MiningParams&, const MiningParams&) = default;
};

struct Config {
  taxonomy::MergeParams params;
  MiningParams mining;
  std::string base_namespace = std::string(owl::kDefaultBase);
  std::optional<std::string> stopwords;
  std::optional<std::string> abbreviations;
  std::optional<std::string> synonyms;
};

namespace detail {

inline double parse_real(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw InvalidParams(key, "not a number: '" + value + "'");
  return v;
}

inline std::size_t parse_count(const std::string& key, const std::string& value) {
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
    throw InvalidParams(key, "not a non-negative integer: '" + value + "'");
  }
  return static_cast<std::size_t>(std::stoull(value));
}

}  // namespace detail

/// Sets one MergeParams field by name. Returns false for unknown keys.
inline bool set_param(taxonomy::MergeParams& p, const std::string& key, const std::string& value) {
  if (key == "align_threshold") p.align_threshold = detail::parse_real(key, value);
  else if (key == "merge_threshold") p.merge_threshold = detail::parse_real(key, value);
  else if (key == "min_frequency") p.min_frequency = detail::parse_count(key, value);
  else if (key == "lattice_min_extent") p.lattice_min_extent = detail::parse_count(key, value);
  else if (key == "lattice_min_intent") p.lattice_min_intent = detail::parse_count(key, value);
  else return false;
  return true;
}

/// key=value lines; '#' at line start or after whitespace starts a comment,
/// so IRIs ending in '#' survive. Relative resource paths resolve
/// against `base_dir`.
inline Config parse_config(std::string_view text, const std::filesystem::path& base_dir = {}) {
  Config cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
        line.erase(i);
        break;
      }
    }
    line = lexical::detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParseError, "config line " + std::to_string(lineno) + ": expected key=value");
    }
    const auto key = lexical::detail::trim(line.substr(0, eq));
    const auto value = lexical::detail::trim(line.substr(eq + 1));
    auto path = [&] { return (base_dir / value).lexically_normal().string(); };
    if (set_param(cfg.params, key, value)) continue;
    if (key == "min_support") cfg.mining.min_support = detail::parse_real(key, value);
    else if (key == "min_confidence") cfg.mining.min_confidence = detail::parse_real(key, value);
    else if (key == "base_namespace") cfg.base_namespace = value;
    else if (key == "stopwords") cfg.stopwords = path();
    else if (key == "abbreviations") cfg.abbreviations = path();
    else if (key == "synonyms") cfg.synonyms = path();
    else throw InvalidParams(key, "unknown config key");
  }
  cfg.params.validate();
  if (cfg.base_namespace.empty()) throw InvalidParams("base_namespace", "must not be empty");
  return cfg;
}

inline Config load_config(const std::string& path) {
  return parse_config(lexical::read_text_file(path), std::filesystem::path(path).parent_path());
}

inline Resources load_resources(const Config& cfg) {
  Resources r;
  if (cfg.stopwords) r.stopwords = lexical::parse_stopwords(lexical::read_text_file(*cfg.stopwords));
  if (cfg.abbreviations) r.abbreviations = lexical::parse_abbreviations(lexical::read_text_file(*cfg.abbreviations));
  if (cfg.synonyms) r.lexicon = similarity::parse_synonyms(lexical::read_text_file(*cfg.synonyms));
  return r;
}

/// Everything computed from the XSD files alone; untouched by rebuilds.
struct CorpusSnapshot {
  std::string corpus_id;
  std::vector<ingest::SchemaFamily> families;
  std::vector<ingest::RawNode> nodes;
  ingest::IngestReport report;
  std::map<std::string, lexical::TokenizedName> tokenized;  // by RawNode id
  lexical::TermStatsMap term_stats;
  MiningParams mining;
  std::vector<lexical::AssociationRule> associations;
  taxonomy::SemanticNetwork candidates;

  friend bool operator==(const CorpusSnapshot&, const CorpusSnapshot&) = default;
};

struct HistoryEntry {
  taxonomy::MergeParams params;
  std::string params_id;
  std::string timestamp;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct KnowledgeBase {
  CorpusSnapshot corpus;
  Resources resources;
  std::string base_namespace = std::string(owl::kDefaultBase);
  taxonomy::MergeParams params;
  taxonomy::SemanticNetwork network;
  std::vector<HistoryEntry> history;

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

using Clock = std::function<std::string()>;

/// Current UTC time as ISO-8601 with second precision.
inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// align -> filter -> merge -> annotate over the stored candidates.
inline taxonomy::SemanticNetwork build_network(const CorpusSnapshot& corpus, const Resources& resources,
                                               const taxonomy::MergeParams& params) {
  params.validate();
  const auto alignments = taxonomy::align_candidates(corpus.candidates, resources.lexicon, params);
  auto net = taxonomy::filter_by_frequency(corpus.candidates, params.min_frequency);
  net = taxonomy::merge_network(std::move(net), alignments, params);
  net = taxonomy::annotate_edges(std::move(net), resources.lexicon, corpus.term_stats);
  net.provenance.corpus_id = corpus.corpus_id;
  net.provenance.params_id = params_id(params);
  return net;
}

inline CorpusSnapshot analyze_corpus(ingest::Corpus corpus, const Resources& resources, const MiningParams& mining) {
  CorpusSnapshot snap;
  snap.families = std::move(corpus.families);
  snap.nodes = std::move(corpus.nodes);
  snap.report = std::move(corpus.report);
  snap.corpus_id = content_hash(nlohmann::json(snap.nodes).dump());
  std::vector<lexical::TermOccurrence> occurrences;
  std::vector<lexical::TokenizedName> names;
  for (const auto& n : snap.nodes) {
    auto t = lexical::normalize_name(n.name, resources.abbreviations, resources.stopwords);
    occurrences.push_back({t, n.family_id, n.doc_id});
    names.push_back(t);
    snap.tokenized.emplace(n.node_id, std::move(t));
  }
  snap.term_stats = lexical::compute_term_stats(occurrences, resources.stopwords);
  snap.mining = mining;
  snap.associations = lexical::mine_associations(names, mining.min_support, mining.min_confidence);
  snap.candidates = taxonomy::build_candidates(snap.nodes, snap.tokenized);
  snap.candidates.provenance.corpus_id = snap.corpus_id;
  return snap;
}

namespace detail {

inline void record(KnowledgeBase& kb, const Clock& clock) {
  kb.history.push_back({kb.params, params_id(kb.params), clock ? clock() : utc_now(), kb.network.nodes.size(),
                        kb.network.edges.size()});
}

}  // namespace detail

inline KnowledgeBase run_pipeline(const std::vector<ingest::FamilySpec>& families, const Config& cfg,
                                  const Clock& clock = utc_now) {
  cfg.params.validate();
  KnowledgeBase kb;
  kb.resources = load_resources(cfg);
  kb.base_namespace = cfg.base_namespace;
  kb.corpus = analyze_corpus(ingest::ingest_corpus(families), kb.resources, cfg.mining);
  kb.params = cfg.params;
  kb.network = build_network(kb.corpus, kb.resources, kb.params);
  detail::record(kb, clock);
  return kb;
}

/// Rebuilds the network from the stored candidates under new params. The
/// input is left untouched; callers swap in the result when it is complete.
inline KnowledgeBase reparameterize(const KnowledgeBase& kb, const taxonomy::MergeParams& params,
                                    const Clock& clock = utc_now) {
  params.validate();
  KnowledgeBase out = kb;
  out.params = params;
  out.network = build_network(out.corpus, out.resources, params);
  detail::record(out, clock);
  return out;
}

// Persistence ---------------------------------------------------------------

inline nlohmann::json to_json(const KnowledgeBase& kb) {
  nlohmann::json resources = {
      {"stopwords", kb.resources.stopwords},
      {"abbreviations", kb.resources.abbreviations},
      {"synonyms", kb.resources.lexicon.synsets()},
  };
  nlohmann::json history = nlohmann::json::array();
  for (const auto& h : kb.history) {
    history.push_back({{"params", h.params}, {"params_id", h.params_id}, {"timestamp", h.timestamp},
                       {"node_count", h.node_count}, {"edge_count", h.edge_count}});
  }
  const auto& c = kb.corpus;
  return {
      {"schema_version", kSchemaVersion},
      {"corpus",
       {{"corpus_id", c.corpus_id},
        {"families", c.families},
        {"nodes", c.nodes},
        {"report", c.report},
        {"tokenized", c.tokenized},
        {"term_stats", c.term_stats},
        {"mining", {{"min_support", c.mining.min_support}, {"min_confidence", c.mining.min_confidence}}},
        {"associations", c.associations},
        {"candidates", c.candidates}}},
      {"resources", std::move(resources)},
      {"base_namespace", kb.base_namespace},
      {"params", kb.params},
      {"network", kb.network},
      {"history", std::move(history)},
  };
}

inline KnowledgeBase from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
    throw Error(ErrorCode::kVersionMismatch, "missing schema_version");
  }
  if (const int v = j["schema_version"].get<int>(); v != kSchemaVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "schema_version " + std::to_string(v) + " (expected " + std::to_string(kSchemaVersion) + ")");
  }
  try {
    KnowledgeBase kb;
    const auto& c = j.at("corpus");
    c.at("corpus_id").get_to(kb.corpus.corpus_id);
    c.at("families").get_to(kb.corpus.families);
    c.at("nodes").get_to(kb.corpus.nodes);
    c.at("report").get_to(kb.corpus.report);
    c.at("tokenized").get_to(kb.corpus.tokenized);
    c.at("term_stats").get_to(kb.corpus.term_stats);
    c.at("mining").at("min_support").get_to(kb.corpus.mining.min_support);
    c.at("mining").at("min_confidence").get_to(kb.corpus.mining.min_confidence);
    c.at("associations").get_to(kb.corpus.associations);
    c.at("candidates").get_to(kb.corpus.candidates);
    const auto& r = j.at("resources");
    r.at("stopwords").get_to(kb.resources.stopwords);
    r.at("abbreviations").get_to(kb.resources.abbreviations);
    for (const auto& synset : r.at("synonyms")) kb.resources.lexicon.add_synset(synset.get<std::vector<std::string>>());
    j.at("base_namespace").get_to(kb.base_namespace);
    j.at("params").get_to(kb.params);
    j.at("network").get_to(kb.network);
    for (const auto& h : j.at("history")) {
      HistoryEntry e;
      h.at("params").get_to(e.params);
      h.at("params_id").get_to(e.params_id);
      h.at("timestamp").get_to(e.timestamp);
      h.at("node_count").get_to(e.node_count);
      h.at("edge_count").get_to(e.edge_count);
      kb.history.push_back(std::move(e));
    }
    return kb;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("knowledge base: ") + e.what());
  }
}

inline std::string serialize_kb(const KnowledgeBase& kb) { return to_json(kb).dump(1) + "\n"; }

inline void save_kb(const KnowledgeBase& kb, const std::string& path) {
  const auto bytes = serialize_kb(kb);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

inline KnowledgeBase load_kb(const std::string& path) {
  const auto text = lexical::read_text_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace kb
}  // namespace janus
