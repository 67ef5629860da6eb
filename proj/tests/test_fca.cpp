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

#include <random>
#include <set>

#include "janus/fca.hpp"
#include "test_support.hpp"

namespace janus::fca {
namespace {

using Names = std::vector<std::string>;

// g1:{a,b}  g2:{b,c}  g3:{b}
FormalContext context_k() {
  FormalContext ctx({"g1", "g2", "g3"}, {"a", "b", "c"});
  ctx.set("g1", "a");
  ctx.set("g1", "b");
  ctx.set("g2", "b");
  ctx.set("g2", "c");
  ctx.set("g3", "b");
  return ctx;
}

TEST(Prime, ReadsOffIncidence) {
  const auto k = context_k();
  EXPECT_EQ(prime_objects(k, {"g1"}), (Names{"a", "b"}));
  EXPECT_EQ(prime_objects(k, {}), (Names{"a", "b", "c"}));
  EXPECT_EQ(prime_attributes(k, {"b"}), (Names{"g1", "g2", "g3"}));
  EXPECT_EQ(prime_attributes(k, {"a", "c"}), Names{});
}

TEST(Prime, UnknownIdThrows) {
  const auto k = context_k();
  try {
    prime_objects(k, {"g9"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownId);
  }
  EXPECT_THROW(closure(k, Names{"z"}), Error);
}

TEST(Closure, DoublePrimeOnK) {
  const auto k = context_k();
  EXPECT_EQ(closure(k, Names{"a"}), (Names{"a", "b"}));
  EXPECT_EQ(closure(k, Names{"b"}), (Names{"b"}));
  EXPECT_EQ(closure(k, Names{}), (Names{"b"}));
}

TEST(Closure, EmptySetWithoutUniversalAttributeIsEmpty) {
  FormalContext ctx({"g1", "g2"}, {"a", "b"});
  ctx.set("g1", "a");
  ctx.set("g2", "b");
  EXPECT_EQ(closure(ctx, Names{}), Names{});
}

TEST(Lattice, ContextKHasFourConcepts) {
  const auto k = context_k();
  const auto lattice = build_lattice(k);
  ASSERT_EQ(lattice.concepts.size(), 4u);
  std::set<std::pair<Names, Names>> got;
  for (const auto& c : lattice.concepts) got.emplace(k.names(c.extent), k.names(c.intent));
  const std::set<std::pair<Names, Names>> want = {
      {{}, {"a", "b", "c"}},
      {{"g1"}, {"a", "b"}},
      {{"g2"}, {"b", "c"}},
      {{"g1", "g2", "g3"}, {"b"}},
  };
  EXPECT_EQ(got, want);
  EXPECT_EQ(testing::as_plain(lattice), testing::brute_force_concepts(k));
  // bottom first, top last
  EXPECT_TRUE(lattice.concepts[lattice.bottom()].extent.empty());
  EXPECT_EQ(lattice.concepts[lattice.top()].extent.size(), 3u);
}

TEST(Lattice, EmptyContextHasOneConcept) {
  const auto lattice = build_lattice(FormalContext{});
  ASSERT_EQ(lattice.concepts.size(), 1u);
  EXPECT_TRUE(lattice.concepts[0].extent.empty());
  EXPECT_TRUE(lattice.concepts[0].intent.empty());
  EXPECT_TRUE(lattice.covers.empty());
}

TEST(Lattice, FullIncidenceMatchesBruteForce) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t m = 1; m <= 4; ++m) {
      Names objs, attrs;
      for (std::size_t i = 0; i < n; ++i) objs.push_back("g" + std::to_string(i));
      for (std::size_t j = 0; j < m; ++j) attrs.push_back("m" + std::to_string(j));
      FormalContext ctx(objs, attrs);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) ctx.set(i, j);
      }
      const auto oracle = testing::brute_force_concepts(ctx);
      // top and bottom coincide: (all objects, all attributes) is the only concept
      ASSERT_EQ(oracle.size(), 1u);
      EXPECT_EQ(testing::as_plain(build_lattice(ctx)), oracle);
    }
  }
}

TEST(HasseCover, ContextK) {
  const auto k = context_k();
  const auto lattice = build_lattice(k);
  std::set<std::pair<Names, Names>> got;
  for (auto [lo, hi] : lattice.covers) {
    got.emplace(k.names(lattice.concepts[lo].extent), k.names(lattice.concepts[hi].extent));
  }
  const std::set<std::pair<Names, Names>> want = {
      {{}, {"g1"}},
      {{}, {"g2"}},
      {{"g1"}, {"g1", "g2", "g3"}},
      {{"g2"}, {"g1", "g2", "g3"}},
  };
  EXPECT_EQ(got, want);
}

TEST(HasseCover, ChainAndSingleton) {
  FormalContext chain({"g1", "g2", "g3"}, {"a", "b", "c"});
  chain.set("g1", "a");
  chain.set("g2", "a");
  chain.set("g2", "b");
  chain.set("g3", "a");
  chain.set("g3", "b");
  chain.set("g3", "c");
  const auto lattice = build_lattice(chain);
  ASSERT_EQ(lattice.concepts.size(), 3u);
  EXPECT_EQ(lattice.covers.size(), 2u);

  std::vector<FormalConcept> single = {lattice.concepts[0]};
  EXPECT_TRUE(hasse_cover(single).empty());
}

TEST(HasseCover, MatchesPairwiseDefinitionOnRandomContexts) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ctx = testing::random_context(rng, 6, 6);
    const auto lattice = build_lattice(ctx);
    const auto& cs = lattice.concepts;
    std::set<std::pair<std::size_t, std::size_t>> want;
    for (std::size_t x = 0; x < cs.size(); ++x) {
      for (std::size_t y = 0; y < cs.size(); ++y) {
        if (!cs[x].extent.bits.is_proper_subset_of(cs[y].extent.bits)) continue;
        bool between = false;
        for (std::size_t z = 0; z < cs.size(); ++z) {
          between = between || (cs[x].extent.bits.is_proper_subset_of(cs[z].extent.bits) &&
                                cs[z].extent.bits.is_proper_subset_of(cs[y].extent.bits));
        }
        if (!between) want.emplace(x, y);
      }
    }
    std::set<std::pair<std::size_t, std::size_t>> got(lattice.covers.begin(), lattice.covers.end());
    EXPECT_EQ(got, want);
  }
}

TEST(Clusters, ContextK) {
  const auto k = context_k();
  const auto lattice = build_lattice(k);
  EXPECT_EQ(extract_clusters(k, lattice, 2, 1), (std::vector<Names>{{"g1", "g2", "g3"}}));
  EXPECT_TRUE(extract_clusters(k, lattice, 2, 2).empty());
  EXPECT_TRUE(extract_clusters(k, lattice, 4, 1).empty());
}

TEST(Clusters, LargerExtentsFirst) {
  FormalContext ctx({"g1", "g2", "g3", "g4"}, {"a", "b", "c"});
  for (auto g : {"g1", "g2", "g3", "g4"}) ctx.set(g, "a");
  ctx.set("g1", "b");
  ctx.set("g2", "b");
  ctx.set("g1", "c");
  ctx.set("g2", "c");
  ctx.set("g3", "c");
  const auto clusters = extract_clusters(ctx, build_lattice(ctx), 2, 1);
  ASSERT_EQ(clusters.size(), 3u);
  EXPECT_EQ(clusters[0].size(), 4u);
  EXPECT_EQ(clusters[1].size(), 3u);
  EXPECT_EQ(clusters[2], (Names{"g1", "g2"}));
}

TEST(Burmeister, RoundTrip) {
  const auto k = context_k();
  const auto text = to_burmeister(k, "K");
  EXPECT_EQ(text, "B\nK\n3\n3\n\ng1\ng2\ng3\na\nb\nc\nXX.\n.XX\n.X.\n");
  EXPECT_EQ(parse_burmeister(text), k);
}

TEST(Burmeister, RejectsMalformedInput) {
  EXPECT_THROW(parse_burmeister("X\n\n1\n1\n"), Error);
  EXPECT_THROW(parse_burmeister("B\n\n2\n1\n\ng1\ng2\na\nX\n"), Error);
  EXPECT_THROW(parse_burmeister("B\n\n1\n1\n\ng1\na\n?\n"), Error);
}

TEST(FormalContext, DuplicateIdsRejected) {
  EXPECT_THROW(FormalContext({"g", "g"}, {"a"}), Error);
  EXPECT_THROW(FormalContext({"g"}, {"a", "a"}), Error);
}

// Property tests on random contexts up to 8x8.

class RandomContexts : public ::testing::Test {
 protected:
  std::mt19937 rng{20260101};
};

TEST_F(RandomContexts, LatticeEqualsBruteForce) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto ctx = testing::random_context(rng);
    const auto lattice = build_lattice(ctx);
    ASSERT_EQ(testing::as_plain(lattice), testing::brute_force_concepts(ctx)) << to_burmeister(ctx);
    ASSERT_EQ(testing::as_plain(lattice).size(), lattice.concepts.size()) << "duplicate concepts";
    for (const auto& c : lattice.concepts) {
      EXPECT_EQ(prime(ctx, c.extent), c.intent);
      EXPECT_EQ(prime(ctx, c.intent), c.extent);
    }
  }
}

TEST_F(RandomContexts, GaloisConnectionAndClosureLaws) {
  std::uniform_int_distribution<int> bit(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ctx = testing::random_context(rng);
    auto random_objects = [&] {
      ObjectSet s = ctx.no_objects();
      for (std::size_t i = 0; i < ctx.object_count(); ++i) s.bits.set(i, bit(rng));
      return s;
    };
    auto random_attributes = [&] {
      AttributeSet s = ctx.no_attributes();
      for (std::size_t i = 0; i < ctx.attribute_count(); ++i) s.bits.set(i, bit(rng));
      return s;
    };
    const auto a = random_objects();
    const auto b = random_attributes();
    auto b2 = b;
    b2.bits |= random_attributes().bits;
    EXPECT_EQ(a.is_subset_of(prime(ctx, b)), b.is_subset_of(prime(ctx, a)));
    EXPECT_TRUE(prime(ctx, b2).is_subset_of(prime(ctx, b)));  // antitone
    const auto cb = closure(ctx, b);
    EXPECT_TRUE(b.is_subset_of(cb));                         // extensive
    EXPECT_TRUE(cb.is_subset_of(closure(ctx, b2)));          // monotone
    EXPECT_EQ(closure(ctx, cb), cb);                         // idempotent
  }
}

TEST_F(RandomContexts, DuplicatingARowKeepsIntentCount) {
  for (int trial = 0; trial < 100; ++trial) {
    const auto ctx = testing::random_context(rng, 7, 8);
    if (ctx.object_count() == 0) continue;
    auto objs = ctx.objects();
    objs.push_back("dup");
    FormalContext bigger(objs, ctx.attributes());
    for (std::size_t g = 0; g < ctx.object_count(); ++g) {
      for (std::size_t m = 0; m < ctx.attribute_count(); ++m) bigger.set(g, m, ctx.incident(g, m));
    }
    for (std::size_t m = 0; m < ctx.attribute_count(); ++m) bigger.set(objs.size() - 1, m, ctx.incident(0, m));
    EXPECT_EQ(build_lattice(bigger).concepts.size(), build_lattice(ctx).concepts.size());
  }
}

}  // namespace
}  // namespace janus::fca
