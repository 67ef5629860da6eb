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

// XSD corpus ingestion: family loading, schema parsing into RawNodes and
// type/element reference resolution.

#pragma once

#include <expat.h>

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "janus/error.hpp"
#include "janus/lexical.hpp"

namespace janus::ingest {

inline constexpr std::string_view kXsdNamespace = "http://www.w3.org/2001/XMLSchema";

enum class NodeKind { kElement, kComplexType, kSimpleType, kAttribute };

inline std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::kElement: return "element";
    case NodeKind::kComplexType: return "complexType";
    case NodeKind::kSimpleType: return "simpleType";
    case NodeKind::kAttribute: return "attribute";
  }
  return "element";
}

inline NodeKind node_kind_from_string(std::string_view s) {
  if (s == "element") return NodeKind::kElement;
  if (s == "complexType") return NodeKind::kComplexType;
  if (s == "simpleType") return NodeKind::kSimpleType;
  if (s == "attribute") return NodeKind::kAttribute;
  throw Error(ErrorCode::kParseError, "unknown node kind '" + std::string(s) + "'");
}

struct SchemaDoc {
  std::string doc_id;
  std::string family_id;
  std::string source_path;
  std::optional<std::string> target_namespace;

  friend bool operator==(const SchemaDoc&, const SchemaDoc&) = default;
};

struct SchemaFamily {
  std::string family_id;
  std::string name;
  std::vector<SchemaDoc> docs;

  friend bool operator==(const SchemaFamily&, const SchemaFamily&) = default;
};

struct RawNode {
  std::string node_id;  // "familyId/docId/seq"
  std::string name;
  NodeKind kind = NodeKind::kElement;
  std::optional<std::string> parent_id;
  std::vector<std::string> child_ids;
  /// Referenced type; built-ins are spelled "xs:<name>", others by local name.
  std::optional<std::string> type_ref;
  /// Target of an element/attribute `ref=` declaration (local name).
  std::optional<std::string> ref;
  std::string family_id;
  std::string doc_id;
  /// Declared directly under xs:schema.
  bool global = false;

  friend bool operator==(const RawNode&, const RawNode&) = default;
};

using DocRef = std::pair<std::string, std::string>;  // (doc_id, name or message)

struct IngestReport {
  std::size_t files_parsed = 0;
  std::map<std::string, std::size_t> nodes_extracted;  // by kind name
  std::vector<DocRef> unresolved_refs;
  std::vector<DocRef> cycles;
  std::map<std::string, std::size_t> ignored_constructs;
  std::vector<std::pair<std::string, std::string>> errors;  // (path, message)

  void count_nodes(const std::vector<RawNode>& nodes) {
    nodes_extracted.clear();
    for (auto k : {NodeKind::kElement, NodeKind::kComplexType, NodeKind::kSimpleType, NodeKind::kAttribute}) {
      nodes_extracted[std::string(to_string(k))] = 0;
    }
    for (const auto& n : nodes) ++nodes_extracted[std::string(to_string(n.kind))];
  }

  friend bool operator==(const IngestReport&, const IngestReport&) = default;
};

inline bool is_builtin_type(std::string_view type_ref) { return type_ref.starts_with("xs:"); }

namespace detail {

using NamespaceScope = std::map<std::string, std::string>;  // prefix ("" = default) -> uri

struct XmlElement {
  std::string ns;
  std::string local;
  std::map<std::string, std::string> attrs;
  std::vector<XmlElement> children;
  std::shared_ptr<const NamespaceScope> scope;

  const std::string* attr(const std::string& key) const {
    auto it = attrs.find(key);
    return it == attrs.end() ? nullptr : &it->second;
  }
};

class XmlReader {
 public:
  static XmlElement parse(std::string_view bytes, const std::string& label) {
    XmlReader reader;
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreateNS(nullptr, '|'),
                                                                        &XML_ParserFree);
    if (!parser) throw Error(ErrorCode::kIoError, "cannot allocate XML parser");
    XML_SetUserData(parser.get(), &reader);
    XML_SetElementHandler(parser.get(), &XmlReader::on_start, &XmlReader::on_end);
    XML_SetNamespaceDeclHandler(parser.get(), &XmlReader::on_ns_start, nullptr);
    reader.scopes_.push_back(std::make_shared<const NamespaceScope>());
    if (XML_Parse(parser.get(), bytes.data(), static_cast<int>(bytes.size()), XML_TRUE) == XML_STATUS_ERROR) {
      throw Error(ErrorCode::kXmlMalformed,
                  label + ":" + std::to_string(XML_GetCurrentLineNumber(parser.get())) + ": " +
                      XML_ErrorString(XML_GetErrorCode(parser.get())));
    }
    if (!reader.root_) throw Error(ErrorCode::kXmlMalformed, label + ": no root element");
    return std::move(*reader.root_);
  }

 private:
  static void on_ns_start(void* data, const XML_Char* prefix, const XML_Char* uri) {
    auto* self = static_cast<XmlReader*>(data);
    self->pending_.emplace_back(prefix ? prefix : "", uri ? uri : "");
  }

  static void on_start(void* data, const XML_Char* name, const XML_Char** atts) {
    auto* self = static_cast<XmlReader*>(data);
    auto scope = self->scopes_.back();
    if (!self->pending_.empty()) {
      auto next = std::make_shared<NamespaceScope>(*scope);
      for (auto& [p, u] : self->pending_) (*next)[p] = u;
      self->pending_.clear();
      scope = std::move(next);
    }
    self->scopes_.push_back(scope);

    XmlElement el;
    std::string_view qn(name);
    if (auto bar = qn.find('|'); bar != std::string_view::npos) {
      el.ns = std::string(qn.substr(0, bar));
      el.local = std::string(qn.substr(bar + 1));
    } else {
      el.local = std::string(qn);
    }
    for (std::size_t i = 0; atts[i]; i += 2) el.attrs.emplace(atts[i], atts[i + 1]);
    el.scope = scope;

    if (self->stack_.empty()) {
      self->root_ = std::make_unique<XmlElement>(std::move(el));
      self->stack_.push_back(self->root_.get());
    } else {
      auto& kids = self->stack_.back()->children;
      kids.push_back(std::move(el));
      self->stack_.push_back(&kids.back());
    }
  }

  static void on_end(void* data, const XML_Char*) {
    auto* self = static_cast<XmlReader*>(data);
    self->stack_.pop_back();
    self->scopes_.pop_back();
  }

  std::unique_ptr<XmlElement> root_;
  // Open elements. A children vector only grows after its previous last
  // child has closed, so the pointers held here never dangle.
  std::vector<XmlElement*> stack_;
  std::vector<std::shared_ptr<const NamespaceScope>> scopes_;
  std::vector<std::pair<std::string, std::string>> pending_;
};

inline std::string local_part(std::string_view qname) {
  auto colon = qname.rfind(':');
  return std::string(colon == std::string_view::npos ? qname : qname.substr(colon + 1));
}

/// Built-in XSD types become "xs:<local>", everything else its local name.
inline std::string normalize_qname(std::string_view qname, const NamespaceScope& scope) {
  std::string prefix;
  if (auto colon = qname.find(':'); colon != std::string_view::npos) prefix = std::string(qname.substr(0, colon));
  const auto local = local_part(qname);
  auto it = scope.find(prefix);
  if (it != scope.end() && it->second == kXsdNamespace) return "xs:" + local;
  return local;
}

inline std::string read_file(const std::string& path) {
  try {
    return lexical::read_text_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::kIoError, "cannot read '" + path + "'");
  }
}

inline XmlElement parse_schema_root(std::string_view bytes, const std::string& label) {
  auto root = XmlReader::parse(bytes, label);
  if (root.ns != kXsdNamespace || root.local != "schema") {
    throw Error(ErrorCode::kNotASchema, label + ": root element is '" + root.local + "', not xs:schema");
  }
  return root;
}

class SchemaWalker {
 public:
  SchemaWalker(std::string family_id, std::string doc_id, IngestReport* report)
      : family_id_(std::move(family_id)), doc_id_(std::move(doc_id)), report_(report) {}

  std::vector<RawNode> run(const XmlElement& schema) {
    for (const auto& child : schema.children) walk(child, std::nullopt, true);
    return std::move(nodes_);
  }

 private:
  void ignore(const std::string& what) {
    if (report_) ++report_->ignored_constructs[what];
  }

  std::size_t add(const XmlElement& el, std::string name, NodeKind kind,
                  const std::optional<std::size_t>& parent, bool global) {
    RawNode n;
    n.node_id = family_id_ + "/" + doc_id_ + "/" + std::to_string(nodes_.size());
    n.name = std::move(name);
    n.kind = kind;
    n.family_id = family_id_;
    n.doc_id = doc_id_;
    n.global = global;
    if (const auto* t = el.attr("type")) n.type_ref = normalize_qname(*t, *el.scope);
    if (parent) {
      n.parent_id = nodes_[*parent].node_id;
      nodes_[*parent].child_ids.push_back(n.node_id);
    }
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
  }

  void walk_children(const XmlElement& el, const std::optional<std::size_t>& parent) {
    for (const auto& c : el.children) walk(c, parent, false);
  }

  void walk(const XmlElement& el, const std::optional<std::size_t>& parent, bool global) {
    if (el.ns != kXsdNamespace) return;
    const std::string& tag = el.local;
    if (tag == "element" || tag == "attribute") {
      const auto kind = tag == "element" ? NodeKind::kElement : NodeKind::kAttribute;
      std::optional<std::string> ref;
      std::string name;
      if (const auto* n = el.attr("name")) {
        name = *n;
      } else if (const auto* r = el.attr("ref")) {
        ref = normalize_qname(*r, *el.scope);
        name = local_part(*r);
      } else {
        ignore("unnamed " + tag);
        return;
      }
      if (el.attr("substitutionGroup")) ignore("substitutionGroup");
      const auto idx = add(el, std::move(name), kind, parent, global);
      nodes_[idx].ref = std::move(ref);
      if (kind == NodeKind::kElement) {
        walk_children(el, idx);
      } else if (!el.children.empty()) {
        ignore("attribute inline type");
      }
    } else if (tag == "complexType") {
      if (const auto* n = el.attr("name")) {
        const auto idx = add(el, *n, NodeKind::kComplexType, parent, global);
        walk_children(el, idx);
      } else {
        walk_children(el, parent);  // anonymous: fold into the enclosing element
      }
    } else if (tag == "simpleType") {
      if (const auto* n = el.attr("name")) {
        add(el, *n, NodeKind::kSimpleType, parent, global);
      }
      ignore("facet");
    } else if (tag == "extension" || tag == "restriction") {
      if (const auto* base = el.attr("base"); base && parent && !nodes_[*parent].type_ref) {
        nodes_[*parent].type_ref = normalize_qname(*base, *el.scope);
      }
      walk_children(el, parent);
    } else if (tag == "sequence" || tag == "choice" || tag == "all" || tag == "complexContent" ||
               tag == "simpleContent") {
      walk_children(el, parent);
    } else if (tag == "annotation" || tag == "include" || tag == "import") {
      // includes/imports resolve by name against the family's own files
    } else {
      ignore(tag);
    }
  }

  std::string family_id_;
  std::string doc_id_;
  IngestReport* report_;
  std::vector<RawNode> nodes_;
};

inline std::string sanitize_id(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '-' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? std::string("_") : out;
}

}  // namespace detail

/// Parses schema text. Node ids follow document order.
inline std::vector<RawNode> parse_schema_text(std::string_view bytes, const std::string& family_id,
                                              const std::string& doc_id, IngestReport* report = nullptr) {
  const auto root = detail::parse_schema_root(bytes, family_id + "/" + doc_id);
  return detail::SchemaWalker(family_id, doc_id, report).run(root);
}

inline std::vector<RawNode> parse_schema(const SchemaDoc& doc, IngestReport* report = nullptr) {
  return parse_schema_text(detail::read_file(doc.source_path), doc.family_id, doc.doc_id, report);
}

/// Loads one family. Directories expand to their *.xsd files; inputs are
/// processed in path order. Files that fail are recorded in `report`; the
/// call fails only when nothing parses.
inline SchemaFamily load_family(const std::vector<std::string>& paths, const std::string& name,
                                IngestReport& report) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(p, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".xsd") found.push_back(entry.path().string());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());

  SchemaFamily family;
  family.family_id = detail::sanitize_id(name);
  family.name = name;
  std::set<std::string> used_ids;
  for (const auto& path : files) {
    try {
      const auto root = detail::parse_schema_root(detail::read_file(path), path);
      SchemaDoc doc;
      doc.family_id = family.family_id;
      doc.source_path = path;
      const auto stem = detail::sanitize_id(fs::path(path).stem().string());
      doc.doc_id = stem;
      for (int k = 2; used_ids.contains(doc.doc_id); ++k) doc.doc_id = stem + "-" + std::to_string(k);
      used_ids.insert(doc.doc_id);
      if (const auto* tns = root.attr("targetNamespace")) doc.target_namespace = *tns;
      family.docs.push_back(std::move(doc));
      ++report.files_parsed;
    } catch (const Error& e) {
      report.errors.emplace_back(path, e.what());
    }
  }
  if (family.docs.empty()) {
    throw Error(ErrorCode::kAllFilesFailed, "family '" + name + "': no parseable schema among " +
                                                std::to_string(files.size()) + " file(s)");
  }
  return family;
}

namespace detail {

class Linker {
 public:
  Linker(const std::vector<RawNode>& nodes, IngestReport& report) : in_(nodes), report_(report) {
    for (std::size_t i = 0; i < in_.size(); ++i) {
      const auto& n = in_[i];
      const DocKey doc{n.family_id, n.doc_id};
      auto& next = next_seq_[doc];
      if (auto slash = n.node_id.rfind('/'); slash != std::string::npos) {
        try {
          next = std::max(next, std::stoul(n.node_id.substr(slash + 1)) + 1);
        } catch (const std::exception&) {
        }
      }
      if (!n.global) continue;
      const bool is_type = n.kind == NodeKind::kComplexType || n.kind == NodeKind::kSimpleType;
      auto& table = is_type ? types_ : globals_;
      const auto key = (is_type ? std::string("type") : std::string(to_string(n.kind))) + ":" + n.name;
      table.by_doc.try_emplace({n.family_id, n.doc_id, key}, i);
      table.by_family.try_emplace({n.family_id, "", key}, i);
    }
  }

  std::vector<RawNode> run() {
    out_ = in_;
    for (auto& n : out_) n.child_ids.clear();
    for (std::size_t i = 0; i < in_.size(); ++i) {
      const auto& n = in_[i];
      Chain chain;
      std::vector<std::string> prefix;
      std::vector<std::string> suffix;
      if (n.kind == NodeKind::kComplexType) {
        chain.insert(i);
        for (const auto& [t, ch] : base_children(i, chain)) prefix.push_back(clone(t, i, ch));
      } else {
        if (n.ref) {
          if (auto g = lookup_global(n, *n.ref); g && in_[*g].type_ref && !n.type_ref) {
            out_[i].type_ref = in_[*g].type_ref;
          }
        }
        for (const auto& [t, ch] : templates(i, chain)) suffix.push_back(clone(t, i, ch));
      }
      auto& kids = out_[i].child_ids;
      kids = std::move(prefix);
      kids.insert(kids.end(), n.child_ids.begin(), n.child_ids.end());
      kids.insert(kids.end(), suffix.begin(), suffix.end());
    }
    return std::move(out_);
  }

 private:
  using DocKey = std::pair<std::string, std::string>;
  using Chain = std::set<std::size_t>;
  using Template = std::pair<std::size_t, Chain>;

  struct Table {
    // (family, doc or "", "type:Name" / "element:Name" / "attribute:Name") -> index
    std::map<std::tuple<std::string, std::string, std::string>, std::size_t> by_doc;
    std::map<std::tuple<std::string, std::string, std::string>, std::size_t> by_family;

    std::optional<std::size_t> find(const RawNode& from, const std::string& key) const {
      if (auto it = by_doc.find({from.family_id, from.doc_id, key}); it != by_doc.end()) return it->second;
      if (auto it = by_family.find({from.family_id, "", key}); it != by_family.end()) return it->second;
      return std::nullopt;
    }
  };

  std::optional<std::size_t> lookup_type(const RawNode& from, const std::string& name) {
    auto found = types_.find(from, "type:" + name);
    if (!found) note(report_.unresolved_refs, {from.doc_id, name});
    return found;
  }

  std::optional<std::size_t> lookup_global(const RawNode& from, const std::string& name) {
    const auto kind = from.kind == NodeKind::kAttribute ? "attribute:" : "element:";
    auto found = globals_.find(from, kind + name);
    if (!found) note(report_.unresolved_refs, {from.doc_id, name});
    return found;
  }

  static void note(std::vector<DocRef>& list, DocRef entry) {
    if (std::find(list.begin(), list.end(), entry) == list.end()) list.push_back(std::move(entry));
  }

  std::vector<std::size_t> declared_children(std::size_t i) const {
    std::vector<std::size_t> out;
    for (const auto& id : in_[i].child_ids) {
      if (auto it = index_of(id)) out.push_back(*it);
    }
    return out;
  }

  std::optional<std::size_t> index_of(const std::string& id) const {
    if (ids_.empty()) {
      for (std::size_t i = 0; i < in_.size(); ++i) ids_.emplace(in_[i].node_id, i);
    }
    auto it = ids_.find(id);
    return it == ids_.end() ? std::nullopt : std::optional<std::size_t>(it->second);
  }

  // Children inherited from the complexContent base of complexType `t`.
  std::vector<Template> base_children(std::size_t t, const Chain& chain) {
    std::vector<Template> out;
    const auto& type = in_[t];
    if (!type.type_ref || is_builtin_type(*type.type_ref)) return out;
    const auto base = lookup_type(type, *type.type_ref);
    if (!base || in_[*base].kind != NodeKind::kComplexType) return out;
    if (chain.contains(*base)) {
      note(report_.cycles, {type.doc_id, type.name});
      return out;
    }
    Chain next = chain;
    next.insert(*base);
    out = base_children(*base, next);
    for (auto c : declared_children(*base)) out.emplace_back(c, next);
    return out;
  }

  // Full child list of complexType `t` (inherited first, then declared).
  std::vector<Template> typed_children(std::size_t t, const Chain& chain) {
    auto out = base_children(t, chain);
    for (auto c : declared_children(t)) out.emplace_back(c, chain);
    return out;
  }

  // Children contributed to node `i` by its ref= target and its type.
  std::vector<Template> templates(std::size_t i, const Chain& chain) {
    std::vector<Template> out;
    const auto& n = in_[i];
    std::optional<std::string> type = n.type_ref;
    Chain current = chain;
    if (n.ref) {
      const auto target = lookup_global(n, *n.ref);
      if (target) {
        if (current.contains(*target)) {
          note(report_.cycles, {n.doc_id, n.name});
          return out;
        }
        current.insert(*target);
        for (auto c : declared_children(*target)) out.emplace_back(c, current);
        if (!type) type = in_[*target].type_ref;
      }
    }
    if (!type || is_builtin_type(*type) || n.kind == NodeKind::kAttribute) return out;
    const auto t = lookup_type(n, *type);
    if (!t || in_[*t].kind != NodeKind::kComplexType) return out;
    if (current.contains(*t)) {
      note(report_.cycles, {n.doc_id, n.name});
      return out;
    }
    current.insert(*t);
    auto typed = typed_children(*t, current);
    out.insert(out.end(), typed.begin(), typed.end());
    return out;
  }

  // Copies template node `t` (and everything it expands to) under out_[parent].
  std::string clone(std::size_t t, std::size_t parent, const Chain& chain) {
    RawNode copy = in_[t];
    const auto& owner = out_[parent];
    copy.family_id = owner.family_id;
    copy.doc_id = owner.doc_id;
    copy.node_id = owner.family_id + "/" + owner.doc_id + "/" +
                   std::to_string(next_seq_[{owner.family_id, owner.doc_id}]++);
    copy.parent_id = owner.node_id;
    copy.child_ids.clear();
    copy.global = false;
    if (copy.ref && !copy.type_ref) {
      if (auto g = globals_.find(in_[t], std::string(copy.kind == NodeKind::kAttribute ? "attribute:" : "element:") +
                                            *copy.ref)) {
        copy.type_ref = in_[*g].type_ref;
      }
    }
    out_.push_back(std::move(copy));
    const std::size_t me = out_.size() - 1;
    const std::string my_id = out_[me].node_id;
    std::vector<std::string> kids;
    for (auto d : declared_children(t)) kids.push_back(clone(d, me, chain));
    for (const auto& [tt, ch] : templates(t, chain)) kids.push_back(clone(tt, me, ch));
    out_[me].child_ids = std::move(kids);
    return my_id;
  }

  const std::vector<RawNode>& in_;
  IngestReport& report_;
  std::vector<RawNode> out_;
  Table types_;
  Table globals_;
  std::map<DocKey, std::size_t> next_seq_;
  mutable std::map<std::string, std::size_t> ids_;
};

}  // namespace detail

/// Resolves type and element references. Every element whose type is a
/// complexType of the same family receives copies of that type's children
/// (fresh node ids, parent set to the element); complexContent bases are
/// inherited the same way. Reference cycles are cut by expanding each type
/// at most once per resolution chain.
inline std::vector<RawNode> link_structure(const std::vector<RawNode>& nodes, IngestReport& report) {
  return detail::Linker(nodes, report).run();
}

struct FamilySpec {
  std::string name;
  std::vector<std::string> paths;
};

struct Corpus {
  std::vector<SchemaFamily> families;
  std::vector<RawNode> nodes;
  IngestReport report;
};

inline Corpus ingest_corpus(const std::vector<FamilySpec>& specs) {
  if (specs.empty()) throw InvalidParams("families", "at least one family is required");
  Corpus corpus;
  std::set<std::string> ids;
  std::vector<RawNode> parsed;
  for (const auto& spec : specs) {
    if (spec.paths.empty()) throw InvalidParams("families", "family '" + spec.name + "' has no paths");
    auto family = load_family(spec.paths, spec.name, corpus.report);
    if (!ids.insert(family.family_id).second) {
      throw InvalidParams("families", "duplicate family id '" + family.family_id + "'");
    }
    for (const auto& doc : family.docs) {
      auto nodes = parse_schema(doc, &corpus.report);
      parsed.insert(parsed.end(), std::make_move_iterator(nodes.begin()), std::make_move_iterator(nodes.end()));
    }
    corpus.families.push_back(std::move(family));
  }
  corpus.nodes = link_structure(parsed, corpus.report);
  corpus.report.count_nodes(corpus.nodes);
  return corpus;
}

}  // namespace janus::ingest
