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

#include <numeric>
#include <random>

#include "janus/taxonomy.hpp"

namespace janus::taxonomy {
namespace {

using Family = std::pair<std::string, std::string>;  // (family id, schema body)

std::string schema(const std::string& body) {
  return R"(<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">)" + body + "</xs:schema>";
}

// Element with anonymous sequence of string leaves.
std::string element(const std::string& name, const std::vector<std::string>& leaves = {}) {
  if (leaves.empty()) return R"(<xs:element name=")" + name + R"(" type="xs:string"/>)";
  std::string out = R"(<xs:element name=")" + name + R"("><xs:complexType><xs:sequence>)";
  for (const auto& l : leaves) out += element(l);
  return out + "</xs:sequence></xs:complexType></xs:element>";
}

struct Built {
  std::vector<ingest::RawNode> nodes;
  std::map<std::string, lexical::TokenizedName> tokenized;
  SemanticNetwork net;
};

Built build(const std::vector<Family>& families) {
  Built b;
  ingest::IngestReport report;
  for (const auto& [fam, body] : families) {
    auto parsed = ingest::parse_schema_text(schema(body), fam, "d" + std::to_string(b.nodes.size()));
    b.nodes.insert(b.nodes.end(), parsed.begin(), parsed.end());
  }
  b.nodes = ingest::link_structure(b.nodes, report);
  for (const auto& n : b.nodes) b.tokenized[n.node_id] = lexical::normalize_name(n.name, {}, {});
  b.net = build_candidates(b.nodes, b.tokenized);
  return b;
}

std::set<std::string> ids(const SemanticNetwork& net) {
  std::set<std::string> out;
  for (const auto& [id, c] : net.nodes) out.insert(id);
  return out;
}

std::size_t count_edges(const SemanticNetwork& net, RelationKind k) {
  return static_cast<std::size_t>(
      std::count_if(net.edges.begin(), net.edges.end(), [k](const Relationship& e) { return e.kind == k; }));
}

std::size_t class_frequency(const SemanticNetwork& net) {
  std::size_t total = 0;
  for (const auto& [id, c] : net.nodes) {
    if (c.kind == ConceptKind::kClass) total += c.frequency;
  }
  return total;
}

void expect_well_formed(const SemanticNetwork& net) {
  EXPECT_NO_THROW(net.validate());
  for (std::size_t i = 1; i < net.edges.size(); ++i) {
    EXPECT_LT(net.edges[i - 1].key(), net.edges[i].key()) << "edges sorted and unique";
  }
  for (const auto& [id, c] : net.nodes) {
    EXPECT_EQ(c.concept_id, id);
    EXPECT_EQ(c.frequency, c.source_instances.size()) << id;
    EXPECT_GE(c.frequency, c.merged_from.size()) << id;
    EXPECT_TRUE(c.labels.contains(c.canonical_name)) << id;
    // Family of each source instance is the first segment of its node id.
    std::set<std::string> families;
    for (const auto& s : c.source_instances) families.insert(s.substr(0, s.find('/')));
    EXPECT_EQ(c.family_attendance, families.size()) << id;
  }
  for (const auto& e : net.edges) {
    EXPECT_GE(e.weight, 0.0);
    EXPECT_LE(e.weight, 1.0);
    if (e.kind == RelationKind::kSharedTerm) {
      ASSERT_TRUE(e.label && !e.label->empty());
      for (const auto* end : {&net.nodes.at(e.src), &net.nodes.at(e.dst)}) {
        EXPECT_NE(std::find(end->tokens.begin(), end->tokens.end(), *e.label), end->tokens.end());
      }
    }
  }
}

TEST(BuildCandidates, AddressWithTwoLeaves) {
  const auto b = build({{"f1", element("Address", {"Street", "City"})}});
  EXPECT_EQ(ids(b.net), (std::set<std::string>{"class.address", "property.city", "property.street"}));
  EXPECT_EQ(b.net.count(ConceptKind::kClass), 1u);
  EXPECT_EQ(b.net.count(ConceptKind::kProperty), 2u);
  ASSERT_EQ(b.net.edges.size(), 2u);
  for (const auto& e : b.net.edges) {
    EXPECT_EQ(e.kind, RelationKind::kPropertyOf);
    EXPECT_EQ(e.dst, "class.address");
  }
  EXPECT_EQ(b.net.nodes.at("class.address").labels, (std::set<std::string>{"Address", "address"}));
  expect_well_formed(b.net);
}

TEST(BuildCandidates, SameNameAcrossFamiliesCollapses) {
  const auto b = build({{"f1", element("address", {"city"})}, {"f2", element("Address", {"City"})}});
  const auto& c = b.net.nodes.at("class.address");
  EXPECT_EQ(c.frequency, 2u);
  EXPECT_EQ(c.family_attendance, 2u);
  EXPECT_EQ(b.net.nodes.at("property.city").frequency, 2u);
  EXPECT_EQ(b.net.edges.size(), 1u);
  expect_well_formed(b.net);
}

TEST(BuildCandidates, EmptyCorpus) {
  const auto net = build_candidates({}, {});
  EXPECT_TRUE(net.nodes.empty());
  EXPECT_TRUE(net.edges.empty());
}

TEST(BuildCandidates, TypesAttributesAndSimpleTypes) {
  const auto b = build({{"f", R"(<xs:complexType name="PartyType"><xs:sequence>)" + element("Name") +
                                  R"(</xs:sequence><xs:attribute name="partyID" type="xs:string"/></xs:complexType>
                                  <xs:simpleType name="Code"><xs:restriction base="xs:string"/></xs:simpleType>)"}});
  EXPECT_EQ(ids(b.net), (std::set<std::string>{"class.party_type", "property.name", "property.party_id"}));
  EXPECT_EQ(count_edges(b.net, RelationKind::kPropertyOf), 2u);
}

TEST(BuildContext, SharedAttributesOfTwoAddresses) {
  const auto b = build({{"f", element("tender_address", {"street", "city"}) +
                                  element("post_box_address", {"street", "city", "post_code"})}});
  const auto ctx = build_context(b.net);
  EXPECT_EQ(ctx.objects(), (std::vector<std::string>{"class.post_box_address", "class.tender_address"}));
  const auto shared = fca::prime_objects(ctx, {"class.post_box_address", "class.tender_address"});
  EXPECT_EQ(shared, (std::vector<std::string>{"address", "has:city", "has:street"}));
  EXPECT_EQ(fca::prime_objects(ctx, {"class.post_box_address"}),
            (std::vector<std::string>{"address", "box", "has:city", "has:post_code", "has:street", "post"}));
}

TEST(BuildContext, SingleClassAndNoProperties) {
  const auto one = build_context(build({{"f", element("Address", {"City"})}}).net);
  EXPECT_EQ(one.object_count(), 1u);
  // A class reached only through a child class has no properties.
  const auto b = build({{"f", R"(<xs:element name="OrderLine"><xs:complexType><xs:sequence>)" +
                                  element("Item", {"Sku"}) + "</xs:sequence></xs:complexType></xs:element>"}});
  const auto ctx = build_context(b.net);
  EXPECT_EQ(fca::prime_objects(ctx, {"class.order_line"}), (std::vector<std::string>{"line", "order"}));
}

TEST(AlignCandidates, ClusterAdmitsPairBelowThreshold) {
  const auto b = build({{"f", element("tender_address", {"street", "city"}) +
                                  element("post_box_address", {"street", "city", "post_code"})}});
  MergeParams p;
  p.align_threshold = 0.9;
  p.merge_threshold = 0.9;
  p.lattice_min_intent = 10;  // no cluster can reach this
  EXPECT_TRUE(align_candidates(b.net, {}, p).empty());
  p.lattice_min_intent = 2;
  const auto al = align_candidates(b.net, {}, p);
  ASSERT_EQ(al.size(), 1u);
  EXPECT_EQ(al[0].a, "class.post_box_address");
  EXPECT_EQ(al[0].b, "class.tender_address");
  EXPECT_TRUE(al[0].by_cluster);
  // Optimal pairing: address-address 1, tender vs post/box 1-6/6 = 0; 1 / 3 tokens.
  EXPECT_NEAR(al[0].score, 1.0 / 3.0, 1e-12);
}

TEST(AlignCandidates, ZeroThresholdReturnsEverySameKindPair) {
  const auto b = build({{"f", element("Invoice", {"Amount", "IssueDate"}) + element("Order", {"Total"}) +
                                  element("Party", {"Name"})}});
  MergeParams p;
  p.align_threshold = 0.0;
  const auto al = align_candidates(b.net, {}, p);
  const std::size_t nc = b.net.count(ConceptKind::kClass);
  const std::size_t np = b.net.count(ConceptKind::kProperty);
  EXPECT_EQ(al.size(), nc * (nc - 1) / 2 + np * (np - 1) / 2);
  for (std::size_t i = 0; i < al.size(); ++i) {
    EXPECT_LT(al[i].a, al[i].b);
    EXPECT_EQ(b.net.nodes.at(al[i].a).kind, b.net.nodes.at(al[i].b).kind);
    if (i > 0) {
      EXPECT_TRUE(al[i - 1].score > al[i].score ||
                  (al[i - 1].score == al[i].score && std::tie(al[i - 1].a, al[i - 1].b) < std::tie(al[i].a, al[i].b)));
    }
  }
}

TEST(AlignCandidates, SynonymsScoreOne) {
  similarity::SynonymLexicon lex;
  lex.add_synset({"amount", "sum"});
  const auto b = build({{"f1", element("Amount")}, {"f2", element("Sum")}});
  const auto al = align_candidates(b.net, lex, MergeParams{});
  ASSERT_EQ(al.size(), 1u);
  EXPECT_EQ(al[0].score, 1.0);
}

TEST(FilterByFrequency, MinimumOneIsIdentity) {
  const auto b = build({{"f", element("Address", {"Street", "City"})}});
  EXPECT_EQ(filter_by_frequency(b.net, 1), b.net);
}

TEST(FilterByFrequency, RareClassTakesOrphansAlong) {
  const auto b = build({{"f1", element("Address", {"Street", "City"}) + element("Party", {"Name", "City"})},
                        {"f2", element("Party", {"Name"})}});
  const auto out = filter_by_frequency(b.net, 2);
  EXPECT_EQ(ids(out), (std::set<std::string>{"class.party", "property.city", "property.name"}));
  EXPECT_EQ(out.provenance.filtered_out, (std::vector<std::string>{"class.address", "property.street"}));
  expect_well_formed(out);
}

TEST(MergeNetwork, IncludedClassIsAbsorbed) {
  const auto b = build({{"f1", element("A", {"street", "city"})}, {"f2", element("B", {"street", "city", "post_code"})}});
  const auto out = merge_network(b.net, {{"class.a", "class.b", 0.0, true}}, MergeParams{});
  EXPECT_FALSE(out.nodes.contains("class.a"));
  const auto& survivor = out.nodes.at("class.b");
  EXPECT_EQ(survivor.merged_from, (std::vector<std::string>{"class.a"}));
  EXPECT_EQ(survivor.labels, (std::set<std::string>{"A", "B", "a", "b"}));
  EXPECT_EQ(survivor.frequency, 2u);
  EXPECT_EQ(survivor.family_attendance, 2u);
  ASSERT_TRUE(out.aliases.contains("class.a"));
  EXPECT_EQ(out.aliases.at("class.a").survivor, "class.b");
  EXPECT_EQ(property_set(out, "class.b"), (std::set<std::string>{"city", "post_code", "street"}));
  expect_well_formed(out);
}

TEST(MergeNetwork, ThresholdMergeKeepsMoreFrequent) {
  const auto b = build({{"f1", element("Buyer", {"Name"}) + element("Seller", {"Vat"})},
                        {"f2", element("Buyer", {"Email"})}});
  const auto out = merge_network(b.net, {{"class.buyer", "class.seller", 0.95, false}}, MergeParams{});
  EXPECT_EQ(out.nodes.at("class.buyer").merged_from, (std::vector<std::string>{"class.seller"}));
  EXPECT_FALSE(out.nodes.contains("class.seller"));
  EXPECT_EQ(property_set(out, "class.buyer"), (std::set<std::string>{"email", "name", "vat"}));
  // Below merge_threshold and without inclusion nothing happens.
  const auto kept = merge_network(b.net, {{"class.buyer", "class.seller", 0.8, false}}, MergeParams{});
  EXPECT_TRUE(kept.nodes.contains("class.seller"));
}

TEST(MergeNetwork, EqualFrequencyTieGoesToSmallerName) {
  const auto b = build({{"f1", element("Zeta", {"x"})}, {"f2", element("Alpha", {"y"})}});
  const auto out = merge_network(b.net, {{"class.alpha", "class.zeta", 0.95, false}}, MergeParams{});
  EXPECT_TRUE(out.nodes.contains("class.alpha"));
  EXPECT_FALSE(out.nodes.contains("class.zeta"));
}

TEST(MergeNetwork, ChainsReachFixpointAndAreIdempotent) {
  const auto b = build({{"f1", element("A", {"p"}) + element("B", {"p", "q"})},
                        {"f2", element("C", {"p", "q", "r"})}});
  const std::vector<Alignment> al{{"class.b", "class.c", 0.5, true}, {"class.a", "class.b", 0.5, true}};
  const auto once = merge_network(b.net, al, MergeParams{});
  EXPECT_EQ(ids(once), (std::set<std::string>{"class.c", "property.p", "property.q", "property.r"}));
  EXPECT_EQ(once.nodes.at("class.c").merged_from, (std::vector<std::string>{"class.a", "class.b"}));
  EXPECT_EQ(once.aliases.at("class.a").survivor, "class.c");
  EXPECT_EQ(merge_network(once, al, MergeParams{}), once);
}

TEST(MergeNetwork, UnmergedCrossFamilyPairGetsRelatedTo) {
  const auto b = build({{"f1", element("Invoice", {"x"})}, {"f2", element("Invoices", {"y"})}});
  const auto out = merge_network(b.net, {{"class.invoice", "class.invoices", 0.875, false}}, MergeParams{});
  ASSERT_EQ(count_edges(out, RelationKind::kRelatedTo), 1u);
  const auto& e = *std::find_if(out.edges.begin(), out.edges.end(),
                                [](const Relationship& r) { return r.kind == RelationKind::kRelatedTo; });
  EXPECT_EQ(e.src, "class.invoice");
  EXPECT_EQ(e.dst, "class.invoices");
  EXPECT_EQ(e.weight, 0.875);
}

TEST(AnnotateEdges, SharedTermAndSynonym) {
  similarity::SynonymLexicon lex;
  lex.add_synset({"amount", "sum"});
  const auto b = build({{"f", element("tender_address", {"amount"}) + element("post_box_address", {"sum"})}});
  lexical::TermStatsMap stats;
  stats["address"].global_frequency = 4;
  const auto out = annotate_edges(b.net, lex, stats);
  std::vector<Relationship> added;
  for (const auto& e : out.edges) {
    if (e.kind != RelationKind::kPropertyOf) added.push_back(e);
  }
  ASSERT_EQ(added.size(), 2u);
  EXPECT_EQ(added[0].src, "class.post_box_address");
  EXPECT_EQ(added[0].dst, "class.tender_address");
  EXPECT_EQ(added[0].kind, RelationKind::kSharedTerm);
  EXPECT_EQ(added[0].label, "address");
  EXPECT_EQ(added[0].weight, 0.25);
  EXPECT_EQ(added[1].src, "property.amount");
  EXPECT_EQ(added[1].dst, "property.sum");
  EXPECT_EQ(added[1].kind, RelationKind::kSynonym);
  EXPECT_EQ(annotate_edges(out, lex, stats), out);
  expect_well_formed(out);
}

TEST(AnnotateEdges, DisjointNamesAddNothing) {
  const auto b = build({{"f", element("Invoice", {"Price"}) + element("Party", {"Name"})}});
  EXPECT_EQ(annotate_edges(b.net, {}, {}), b.net);
}

TEST(MergeParams, Validation) {
  EXPECT_NO_THROW(MergeParams{}.validate());
  auto field_of = [](MergeParams p) {
    try {
      p.validate();
    } catch (const InvalidParams& e) {
      return e.field();
    }
    return std::string();
  };
  EXPECT_EQ(field_of({1.5, 1.5, 1, 2, 2}), "align_threshold");
  EXPECT_EQ(field_of({0.8, 0.7, 1, 2, 2}), "merge_threshold");
  EXPECT_EQ(field_of({0.5, 0.7, 0, 2, 2}), "min_frequency");
  EXPECT_EQ(field_of({0.5, 0.7, 1, 1, 2}), "lattice_min_extent");
  EXPECT_EQ(field_of({0.5, 0.7, 1, 2, 0}), "lattice_min_intent");
}

// Random small corpora drawn from a shared vocabulary so names collide.
std::vector<Family> random_corpus(std::mt19937& rng) {
  static const std::vector<std::string> classes{"Address", "TenderAddress", "PostBoxAddress", "Party",
                                                "BuyerParty", "Order", "OrderLine", "Invoice"};
  static const std::vector<std::string> props{"Street", "City", "PostCode", "Name", "PartyID",
                                              "Amount", "Total", "IssueDate", "Email"};
  std::uniform_int_distribution<std::size_t> nfam(1, 3), ncls(1, 4), nprop(0, 4);
  std::vector<Family> out;
  const auto families = nfam(rng);
  for (std::size_t f = 0; f < families; ++f) {
    std::string body;
    std::set<std::string> used;
    for (std::size_t c = ncls(rng); c > 0; --c) {
      const auto& name = classes[rng() % classes.size()];
      if (!used.insert(name).second) continue;
      std::set<std::string> leaves;
      for (std::size_t p = nprop(rng); p > 0; --p) leaves.insert(props[rng() % props.size()]);
      body += element(name, std::vector<std::string>(leaves.begin(), leaves.end()));
    }
    out.emplace_back("f" + std::to_string(f), body);
  }
  return out;
}

TEST(Properties, ConservationValidityAndAttendance) {
  std::mt19937 rng(7);
  similarity::SynonymLexicon lex;
  lex.add_synset({"amount", "total"});
  for (int trial = 0; trial < 200; ++trial) {
    const auto b = build(random_corpus(rng));
    MergeParams p;
    p.align_threshold = (rng() % 11) / 10.0;
    p.merge_threshold = std::max(p.align_threshold, (rng() % 11) / 10.0);
    const auto al = align_candidates(b.net, lex, p);
    const auto merged = merge_network(b.net, al, p);
    EXPECT_EQ(class_frequency(merged), class_frequency(b.net)) << "trial " << trial;
    EXPECT_EQ(merge_network(merged, al, p), merged);
    const auto filtered = filter_by_frequency(merged, 1 + rng() % 3);
    const auto annotated = annotate_edges(filtered, lex, {});
    for (const auto* net : {&b.net, &merged, &filtered, &annotated}) expect_well_formed(*net);
    // Attendance recount from the raw nodes themselves.
    std::map<std::string, std::string> family_of;
    for (const auto& n : b.nodes) family_of[n.node_id] = n.family_id;
    for (const auto& [id, c] : merged.nodes) {
      std::set<std::string> fams;
      for (const auto& s : c.source_instances) fams.insert(family_of.at(s));
      EXPECT_EQ(c.family_attendance, fams.size()) << id;
    }
  }
}

}  // namespace
}  // namespace janus::taxonomy
