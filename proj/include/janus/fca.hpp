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

// Formal concept analysis: derivation operators, Next-Closure lattice
// construction, Hasse covers and cluster extraction over a FormalContext.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "janus/bitset.hpp"
#include "janus/error.hpp"

namespace janus::fca {

struct ObjectTag {};
struct AttributeTag {};

/// A subset of one side of a context. The tag keeps object and attribute
/// sets from being mixed up at compile time.
template <class Tag>
struct IndexSet {
  Bitset bits;

  IndexSet() = default;
  explicit IndexSet(Bitset b) : bits(std::move(b)) {}

  std::size_t size() const noexcept { return bits.count(); }
  bool empty() const noexcept { return bits.none(); }
  bool contains(std::size_t i) const noexcept { return bits.test(i); }
  bool is_subset_of(const IndexSet& o) const noexcept { return bits.is_subset_of(o.bits); }
  std::vector<std::size_t> indices() const { return bits.indices(); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend bool operator<(const IndexSet& a, const IndexSet& b) { return a.bits < b.bits; }
};

using ObjectSet = IndexSet<ObjectTag>;
using AttributeSet = IndexSet<AttributeTag>;

class FormalContext {
 public:
  FormalContext() = default;
  FormalContext(std::vector<std::string> objects, std::vector<std::string> attributes)
      : objects_(std::move(objects)), attributes_(std::move(attributes)) {
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      if (!object_index_.emplace(objects_[i], i).second) {
        throw Error(ErrorCode::kParseError, "duplicate object id '" + objects_[i] + "'");
      }
    }
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      if (!attribute_index_.emplace(attributes_[i], i).second) {
        throw Error(ErrorCode::kParseError, "duplicate attribute id '" + attributes_[i] + "'");
      }
    }
    rows_.assign(objects_.size(), Bitset(attributes_.size()));
  }

  std::size_t object_count() const noexcept { return objects_.size(); }
  std::size_t attribute_count() const noexcept { return attributes_.size(); }
  const std::vector<std::string>& objects() const noexcept { return objects_; }
  const std::vector<std::string>& attributes() const noexcept { return attributes_; }

  void set(std::size_t object, std::size_t attribute, bool value = true) {
    rows_.at(object).set(attribute, value);
  }
  void set(const std::string& object, const std::string& attribute, bool value = true) {
    rows_[object_index(object)].set(attribute_index(attribute), value);
  }
  bool incident(std::size_t object, std::size_t attribute) const {
    return rows_.at(object).test(attribute);
  }
  /// Attribute bitset of one object.
  const Bitset& row(std::size_t object) const { return rows_.at(object); }

  std::size_t object_index(const std::string& id) const {
    auto it = object_index_.find(id);
    if (it == object_index_.end()) throw Error(ErrorCode::kUnknownId, "unknown object '" + id + "'");
    return it->second;
  }
  std::size_t attribute_index(const std::string& id) const {
    auto it = attribute_index_.find(id);
    if (it == attribute_index_.end()) {
      throw Error(ErrorCode::kUnknownId, "unknown attribute '" + id + "'");
    }
    return it->second;
  }

  ObjectSet no_objects() const { return ObjectSet(Bitset(objects_.size())); }
  ObjectSet all_objects() const { return ObjectSet(Bitset(objects_.size(), true)); }
  AttributeSet no_attributes() const { return AttributeSet(Bitset(attributes_.size())); }
  AttributeSet all_attributes() const { return AttributeSet(Bitset(attributes_.size(), true)); }

  ObjectSet object_set(const std::vector<std::string>& ids) const {
    ObjectSet s = no_objects();
    for (const auto& id : ids) s.bits.set(object_index(id));
    return s;
  }
  AttributeSet attribute_set(const std::vector<std::string>& ids) const {
    AttributeSet s = no_attributes();
    for (const auto& id : ids) s.bits.set(attribute_index(id));
    return s;
  }
  std::vector<std::string> names(const ObjectSet& s) const {
    std::vector<std::string> out;
    for (auto i : s.indices()) out.push_back(objects_[i]);
    return out;
  }
  std::vector<std::string> names(const AttributeSet& s) const {
    std::vector<std::string> out;
    for (auto i : s.indices()) out.push_back(attributes_[i]);
    return out;
  }

  friend bool operator==(const FormalContext& a, const FormalContext& b) {
    return a.objects_ == b.objects_ && a.attributes_ == b.attributes_ && a.rows_ == b.rows_;
  }

 private:
  std::vector<std::string> objects_;
  std::vector<std::string> attributes_;
  std::vector<Bitset> rows_;
  std::map<std::string, std::size_t> object_index_;
  std::map<std::string, std::size_t> attribute_index_;
};

/// Attributes shared by every object in `objects`; all attributes for the
/// empty set.
inline AttributeSet prime(const FormalContext& ctx, const ObjectSet& objects) {
  AttributeSet out = ctx.all_attributes();
  for (auto g : objects.indices()) out.bits &= ctx.row(g);
  return out;
}

/// Objects carrying every attribute in `attributes`.
inline ObjectSet prime(const FormalContext& ctx, const AttributeSet& attributes) {
  ObjectSet out = ctx.no_objects();
  for (std::size_t g = 0; g < ctx.object_count(); ++g) {
    if (attributes.bits.is_subset_of(ctx.row(g))) out.bits.set(g);
  }
  return out;
}

inline AttributeSet closure(const FormalContext& ctx, const AttributeSet& attributes) {
  return prime(ctx, prime(ctx, attributes));
}

inline ObjectSet closure(const FormalContext& ctx, const ObjectSet& objects) {
  return prime(ctx, prime(ctx, objects));
}

// Name-based conveniences; unknown ids raise UnknownId.
inline std::vector<std::string> prime_objects(const FormalContext& ctx,
                                              const std::vector<std::string>& objects) {
  return ctx.names(prime(ctx, ctx.object_set(objects)));
}
inline std::vector<std::string> prime_attributes(const FormalContext& ctx,
                                                 const std::vector<std::string>& attributes) {
  return ctx.names(prime(ctx, ctx.attribute_set(attributes)));
}
inline std::vector<std::string> closure(const FormalContext& ctx,
                                        const std::vector<std::string>& attributes) {
  return ctx.names(closure(ctx, ctx.attribute_set(attributes)));
}

struct FormalConcept {
  ObjectSet extent;
  AttributeSet intent;

  friend bool operator==(const FormalConcept&, const FormalConcept&) = default;
  friend bool operator<(const FormalConcept& a, const FormalConcept& b) {
    if (a.extent == b.extent) return a.intent < b.intent;
    return a.extent < b.extent;
  }
};

struct ConceptLattice {
  /// Ordered by extent size, ties kept in lectic (Next-Closure) order, so the
  /// bottom concept comes first and the top concept last.
  std::vector<FormalConcept> concepts;
  /// (lower, upper) index pairs into `concepts`.
  std::vector<std::pair<std::size_t, std::size_t>> covers;

  std::size_t bottom() const noexcept { return 0; }
  std::size_t top() const noexcept { return concepts.empty() ? 0 : concepts.size() - 1; }
};

/// All concept intents of `ctx` in lectic order (Ganter's Next-Closure).
inline std::vector<AttributeSet> next_closure_intents(const FormalContext& ctx) {
  const std::size_t m = ctx.attribute_count();
  std::vector<AttributeSet> intents;
  AttributeSet current = closure(ctx, ctx.no_attributes());
  for (;;) {
    intents.push_back(current);
    bool advanced = false;
    AttributeSet prefix = current;
    for (std::size_t i = m; i-- > 0;) {
      if (prefix.contains(i)) {
        prefix.bits.reset(i);
        continue;
      }
      AttributeSet candidate = prefix;
      candidate.bits.set(i);
      candidate = closure(ctx, candidate);
      // Canonicity: the closure may not add any attribute below i.
      Bitset added = candidate.bits;
      added.subtract(prefix.bits);
      if (added.first() >= i) {
        current = std::move(candidate);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return intents;
}

/// (x, y) is a cover iff extent(x) is a proper subset of extent(y) with no
/// concept strictly in between.
inline std::vector<std::pair<std::size_t, std::size_t>> hasse_cover(
    const std::vector<FormalConcept>& concepts) {
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  const std::size_t n = concepts.size();
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<std::size_t> above;
    for (std::size_t y = 0; y < n; ++y) {
      if (concepts[x].extent.bits.is_proper_subset_of(concepts[y].extent.bits)) above.push_back(y);
    }
    for (std::size_t y : above) {
      bool direct = true;
      for (std::size_t z : above) {
        if (z != y && concepts[z].extent.bits.is_proper_subset_of(concepts[y].extent.bits)) {
          direct = false;
          break;
        }
      }
      if (direct) covers.emplace_back(x, y);
    }
  }
  return covers;
}

inline ConceptLattice build_lattice(const FormalContext& ctx) {
  ConceptLattice lattice;
  for (auto& intent : next_closure_intents(ctx)) {
    ObjectSet extent = prime(ctx, intent);
    lattice.concepts.push_back(FormalConcept{std::move(extent), std::move(intent)});
  }
  std::stable_sort(lattice.concepts.begin(), lattice.concepts.end(),
                   [](const FormalConcept& a, const FormalConcept& b) {
                     return a.extent.size() < b.extent.size();
                   });
  lattice.covers = hasse_cover(lattice.concepts);
  return lattice;
}

/// Extents of concepts with at least `min_extent` objects and `min_intent`
/// attributes. Larger extents come first, then larger intents, then the
/// extent's index order.
inline std::vector<ObjectSet> extract_cluster_sets(const ConceptLattice& lattice,
                                                   std::size_t min_extent,
                                                   std::size_t min_intent) {
  std::vector<const FormalConcept*> picked;
  for (const auto& c : lattice.concepts) {
    if (c.extent.size() >= min_extent && c.intent.size() >= min_intent) picked.push_back(&c);
  }
  std::sort(picked.begin(), picked.end(), [](const FormalConcept* a, const FormalConcept* b) {
    if (a->extent.size() != b->extent.size()) return a->extent.size() > b->extent.size();
    if (a->intent.size() != b->intent.size()) return a->intent.size() > b->intent.size();
    return a->extent < b->extent;
  });
  std::vector<ObjectSet> out;
  for (const auto* c : picked) out.push_back(c->extent);
  return out;
}

inline std::vector<std::vector<std::string>> extract_clusters(const FormalContext& ctx,
                                                              const ConceptLattice& lattice,
                                                              std::size_t min_extent,
                                                              std::size_t min_intent) {
  std::vector<std::vector<std::string>> out;
  for (const auto& s : extract_cluster_sets(lattice, min_extent, min_intent)) {
    out.push_back(ctx.names(s));
  }
  return out;
}

// Burmeister plain-text format:
//   B
//   <name>
//   <object count>
//   <attribute count>
//   <blank>
//   object names, attribute names, then one X/. row per object.

inline std::string to_burmeister(const FormalContext& ctx, std::string_view name = "") {
  std::ostringstream os;
  os << "B\n" << name << "\n" << ctx.object_count() << "\n" << ctx.attribute_count() << "\n\n";
  for (const auto& o : ctx.objects()) os << o << "\n";
  for (const auto& a : ctx.attributes()) os << a << "\n";
  for (std::size_t g = 0; g < ctx.object_count(); ++g) {
    for (std::size_t m = 0; m < ctx.attribute_count(); ++m) os << (ctx.incident(g, m) ? 'X' : '.');
    os << "\n";
  }
  return os.str();
}

inline FormalContext parse_burmeister(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::string line;
    std::istringstream is{std::string(text)};
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
  }
  auto fail = [](const std::string& msg) { return Error(ErrorCode::kParseError, "burmeister: " + msg); };
  if (lines.size() < 4 || lines[0] != "B") throw fail("missing 'B' header");
  std::size_t n = 0;
  std::size_t m = 0;
  try {
    n = std::stoul(lines[2]);
    m = std::stoul(lines[3]);
  } catch (const std::exception&) {
    throw fail("bad object/attribute counts");
  }
  std::size_t pos = 4;
  while (pos < lines.size() && lines[pos].empty()) ++pos;
  if (lines.size() < pos + n + m + n) throw fail("truncated context");
  std::vector<std::string> objects(lines.begin() + pos, lines.begin() + pos + n);
  pos += n;
  std::vector<std::string> attributes(lines.begin() + pos, lines.begin() + pos + m);
  pos += m;
  FormalContext ctx(std::move(objects), std::move(attributes));
  for (std::size_t g = 0; g < n; ++g, ++pos) {
    const std::string& row = lines[pos];
    if (row.size() < m) throw fail("short incidence row " + std::to_string(g));
    for (std::size_t a = 0; a < m; ++a) {
      const char c = row[a];
      if (c == 'X' || c == 'x') {
        ctx.set(g, a);
      } else if (c != '.') {
        throw fail(std::string("unexpected incidence character '") + c + "'");
      }
    }
  }
  return ctx;
}

}  // namespace janus::fca
