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

// RDFS/OWL and JSON graph export of a SemanticNetwork.

#pragma once

#include <cstddef>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "janus/error.hpp"
#include "janus/taxonomy.hpp"

namespace janus::owl {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kDefaultBase = "http://example.org/janus#";

struct RdfTerm {
  enum class Kind { kIri, kLiteral };
  Kind kind = Kind::kIri;
  std::string value;

  static RdfTerm iri(std::string v) { return {Kind::kIri, std::move(v)}; }
  static RdfTerm literal(std::string v) { return {Kind::kLiteral, std::move(v)}; }

  friend auto operator<=>(const RdfTerm&, const RdfTerm&) = default;
};

struct RdfTriple {
  std::string subject;    // absolute IRI
  std::string predicate;  // absolute IRI
  RdfTerm object;

  friend auto operator<=>(const RdfTriple&, const RdfTriple&) = default;
};

using TripleSet = std::set<RdfTriple>;

/// Percent-encodes every byte outside the RFC 3986 unreserved set.
inline std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    const bool unreserved = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                            c == '-' || c == '.' || c == '_' || c == '~';
    if (unreserved) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

/// IRIs for concepts and vocabulary under one base namespace.
class Vocabulary {
 public:
  explicit Vocabulary(std::string base = std::string(kDefaultBase)) : base_(std::move(base)) {
    if (base_.empty()) throw Error(ErrorCode::kInvalidNetwork, "empty base namespace");
  }

  const std::string& base() const noexcept { return base_; }
  std::string ontology() const {
    if (base_.back() == '#' || base_.back() == '/') return base_.substr(0, base_.size() - 1);
    return base_;
  }
  std::string concept_iri(std::string_view concept_id) const { return base_ + percent_encode(concept_id); }
  std::string shares_term() const { return base_ + "sharesTerm"; }
  std::string alt_label() const { return base_ + "altLabel"; }

  static std::string rdf(std::string_view local) { return std::string(kRdf) + std::string(local); }
  static std::string rdfs(std::string_view local) { return std::string(kRdfs) + std::string(local); }
  static std::string owl(std::string_view local) { return std::string(kOwl) + std::string(local); }

 private:
  std::string base_;
};

/// Header triples (ontology and annotation property declarations) present in
/// every export.
inline TripleSet header_triples(const Vocabulary& v) {
  const auto type = Vocabulary::rdf("type");
  return {
      {v.ontology(), type, RdfTerm::iri(Vocabulary::owl("Ontology"))},
      {v.shares_term(), type, RdfTerm::iri(Vocabulary::owl("AnnotationProperty"))},
      {v.alt_label(), type, RdfTerm::iri(Vocabulary::owl("AnnotationProperty"))},
  };
}

/// Classes map to owl:Class, properties to owl:DatatypeProperty with an
/// rdfs:domain per propertyOf edge, synonyms to janus:altLabel on both ends,
/// shared terms to janus:sharesTerm literals, merges to owl:sameAs towards
/// each absorbed alias, and unmerged relatedTo edges to rdfs:seeAlso.
inline TripleSet to_rdf_graph(const taxonomy::SemanticNetwork& net, const Vocabulary& v = Vocabulary()) {
  using taxonomy::ConceptKind;
  using taxonomy::RelationKind;
  net.validate();
  TripleSet out = header_triples(v);
  const auto type = Vocabulary::rdf("type");
  const auto label = Vocabulary::rdfs("label");
  for (const auto& [id, c] : net.nodes) {
    const auto iri = v.concept_iri(id);
    out.insert({iri, type,
                RdfTerm::iri(Vocabulary::owl(c.kind == ConceptKind::kClass ? "Class" : "DatatypeProperty"))});
    for (const auto& l : c.labels) out.insert({iri, label, RdfTerm::literal(l)});
    for (const auto& m : c.merged_from) {
      const auto alias_iri = v.concept_iri(m);
      out.insert({iri, Vocabulary::owl("sameAs"), RdfTerm::iri(alias_iri)});
      if (auto it = net.aliases.find(m); it != net.aliases.end()) {
        for (const auto& l : it->second.labels) out.insert({alias_iri, label, RdfTerm::literal(l)});
      }
    }
  }
  for (const auto& e : net.edges) {
    const auto src = v.concept_iri(e.src);
    const auto dst = v.concept_iri(e.dst);
    switch (e.kind) {
      case RelationKind::kPropertyOf:
        out.insert({src, Vocabulary::rdfs("domain"), RdfTerm::iri(dst)});
        break;
      case RelationKind::kSynonym:
        out.insert({src, v.alt_label(), RdfTerm::literal(net.nodes.at(e.dst).canonical_name)});
        out.insert({dst, v.alt_label(), RdfTerm::literal(net.nodes.at(e.src).canonical_name)});
        break;
      case RelationKind::kSharedTerm:
        out.insert({src, v.shares_term(), RdfTerm::literal(e.label.value_or(""))});
        out.insert({dst, v.shares_term(), RdfTerm::literal(e.label.value_or(""))});
        break;
      case RelationKind::kRelatedTo:
        out.insert({src, Vocabulary::rdfs("seeAlso"), RdfTerm::iri(dst)});
        break;
    }
  }
  return out;
}

enum class RdfFormat { kTurtle, kRdfXml };

inline RdfFormat rdf_format_from_string(std::string_view s) {
  if (s == "ttl" || s == "turtle") return RdfFormat::kTurtle;
  if (s == "rdfxml" || s == "rdf" || s == "xml") return RdfFormat::kRdfXml;
  throw Error(ErrorCode::kUnsupportedFormat, "unsupported RDF format '" + std::string(s) + "'");
}

namespace detail {

struct Prefix {
  std::string_view name;
  std::string ns;
};

inline std::vector<Prefix> prefixes(const Vocabulary& v) {
  return {{"janus", v.base()}, {"owl", std::string(kOwl)}, {"rdf", std::string(kRdf)}, {"rdfs", std::string(kRdfs)}};
}

inline bool simple_local(std::string_view s) {
  if (s.empty() || !((s[0] >= 'a' && s[0] <= 'z') || (s[0] >= 'A' && s[0] <= 'Z'))) return false;
  for (char c : s) {
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_')) return false;
  }
  return true;
}

// Splits an IRI into (prefix name, local) when it falls in a declared
// namespace with a plain local name.
inline std::optional<std::pair<std::string, std::string>> qname(const std::vector<Prefix>& ps, std::string_view iri) {
  for (const auto& p : ps) {
    if (iri.size() > p.ns.size() && iri.starts_with(p.ns) && simple_local(iri.substr(p.ns.size()))) {
      return std::pair{std::string(p.name), std::string(iri.substr(p.ns.size()))};
    }
  }
  return std::nullopt;
}

inline std::string turtle_iri(const std::vector<Prefix>& ps, std::string_view iri) {
  if (auto q = qname(ps, iri)) return q->first + ":" + q->second;
  return "<" + std::string(iri) + ">";
}

inline std::string turtle_literal(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string to_turtle(const TripleSet& triples, const Vocabulary& v) {
  const auto ps = prefixes(v);
  std::ostringstream os;
  for (const auto& p : ps) os << "@prefix " << p.name << ": <" << p.ns << "> .\n";
  const auto type = Vocabulary::rdf("type");
  const std::string* subject = nullptr;
  for (const auto& t : triples) {
    if (!subject || *subject != t.subject) {
      if (subject) os << " .\n";
      os << "\n" << turtle_iri(ps, t.subject) << "\n    ";
      subject = &t.subject;
    } else {
      os << " ;\n    ";
    }
    os << (t.predicate == type ? std::string("a") : turtle_iri(ps, t.predicate)) << " ";
    os << (t.object.kind == RdfTerm::Kind::kIri ? turtle_iri(ps, t.object.value) : turtle_literal(t.object.value));
  }
  if (subject) os << " .\n";
  return os.str();
}

inline std::string to_rdfxml(const TripleSet& triples, const Vocabulary& v) {
  const auto ps = prefixes(v);
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<rdf:RDF";
  for (const auto& p : ps) os << "\n    xmlns:" << p.name << "=\"" << xml_escape(p.ns) << "\"";
  os << ">\n";
  const std::string* subject = nullptr;
  for (const auto& t : triples) {
    if (!subject || *subject != t.subject) {
      if (subject) os << "  </rdf:Description>\n";
      os << "  <rdf:Description rdf:about=\"" << xml_escape(t.subject) << "\">\n";
      subject = &t.subject;
    }
    const auto q = qname(ps, t.predicate);
    if (!q) throw Error(ErrorCode::kUnsupportedFormat, "predicate has no RDF/XML qname: " + t.predicate);
    const auto tag = q->first + ":" + q->second;
    if (t.object.kind == RdfTerm::Kind::kIri) {
      os << "    <" << tag << " rdf:resource=\"" << xml_escape(t.object.value) << "\"/>\n";
    } else {
      os << "    <" << tag << ">" << xml_escape(t.object.value) << "</" << tag << ">\n";
    }
  }
  if (subject) os << "  </rdf:Description>\n";
  os << "</rdf:RDF>\n";
  return os.str();
}

}  // namespace detail

/// Writes triples in (subject, predicate, object) order with the fixed
/// janus/owl/rdf/rdfs prefixes.
inline std::string serialize(const TripleSet& triples, RdfFormat format, const Vocabulary& v = Vocabulary()) {
  switch (format) {
    case RdfFormat::kTurtle: return detail::to_turtle(triples, v);
    case RdfFormat::kRdfXml: return detail::to_rdfxml(triples, v);
  }
  throw Error(ErrorCode::kUnsupportedFormat, "unknown RDF format");
}

inline nlohmann::json node_to_json(const taxonomy::ConceptNode& c) {
  return {
      {"id", c.concept_id},
      {"label", c.canonical_name},
      {"kind", std::string(to_string(c.kind))},
      {"frequency", c.frequency},
      {"family_attendance", c.family_attendance},
      {"labels", c.labels},
      {"merged_from", c.merged_from},
  };
}

inline nlohmann::json edge_to_json(const taxonomy::Relationship& e) {
  return {
      {"src", e.src},
      {"dst", e.dst},
      {"kind", std::string(to_string(e.kind))},
      {"label", e.label ? nlohmann::json(*e.label) : nlohmann::json(nullptr)},
      {"weight", e.weight},
  };
}

/// Graph document restricted to `node_ids` (all nodes when null) and edges
/// of the given kinds between kept nodes.
inline nlohmann::json graph_to_json(const taxonomy::SemanticNetwork& net,
                                    const std::set<std::string>* node_ids = nullptr,
                                    const std::set<taxonomy::RelationKind>* kinds = nullptr) {
  auto nodes = nlohmann::json::array();
  auto edges = nlohmann::json::array();
  for (const auto& [id, c] : net.nodes) {
    if (!node_ids || node_ids->contains(id)) nodes.push_back(node_to_json(c));
  }
  for (const auto& e : net.edges) {
    if (kinds && !kinds->contains(e.kind)) continue;
    if (node_ids && (!node_ids->contains(e.src) || !node_ids->contains(e.dst))) continue;
    edges.push_back(edge_to_json(e));
  }
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

/// Compact JSON with sorted keys; nodes by id, edges by (src, dst, kind, label).
inline std::string serialize_json_graph(const taxonomy::SemanticNetwork& net) {
  return graph_to_json(net).dump();
}

}  // namespace janus::owl
