#include <gtest/gtest.h>

#include "fptmix/gen.hpp"
#include "fptmix/oracles.hpp"

using namespace fptmix;

TEST(Oracles, WspBacktrackingAndMemoAgree) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    gen::Rng rng(seed);
    auto fam = gen::setfamily(6 + seed % 6, 4 + seed % 12, {-5, 9}, rng);
    for (int k = 0; k <= 4; ++k) EXPECT_EQ(oracle_wsp(fam, k), oracle_wsp_memo(fam, k)) << seed << " " << k;
  }
}

TEST(Oracles, WspHandInstance) {
  OrderedUniverse u({"1", "2", "3", "4", "5", "6", "7"});
  WeightedSetFamily fam(u);
  fam.add(ElementSet{0, 1, 2}, 5);
  fam.add(ElementSet{2, 3, 4}, 9);
  fam.add(ElementSet{4, 5, 6}, 4);
  EXPECT_EQ(oracle_wsp(fam, 1), std::optional<Weight>(9));
  EXPECT_EQ(oracle_wsp(fam, 2), std::optional<Weight>(9));
  EXPECT_FALSE(oracle_wsp(fam, 3).has_value());
}

TEST(Oracles, P2DynamicProgramAndSearchAgree) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    gen::Rng rng(seed);
    auto g = gen::graph(5 + seed % 8, 0.25, rng);
    int best = oracle_p2p(g);
    for (int k = 1; k <= 4; ++k) EXPECT_EQ(oracle_p2p_search(g, k), best >= k) << seed << " " << k;
  }
}

TEST(Oracles, P2Triples) {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(2, 3);
  auto t = oracle_p2_triples(g);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(oracle_p2p(g), 1);
  EXPECT_EQ(oracle_p2p(Graph(0)), 0);
}

TEST(Oracles, MatchingKnownValues) {
  Graph k4(4);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) k4.add_edge(a, b);
  EXPECT_EQ(oracle_matching(k4), 2);
  Graph tri(3);
  tri.add_edge(0, 1);
  tri.add_edge(1, 2);
  tri.add_edge(0, 2);
  EXPECT_EQ(oracle_matching(tri), 1);
  EXPECT_THROW(oracle_matching(Graph(23)), InvalidInput);
}

TEST(Oracles, KiobKnownValues) {
  Digraph path(4);
  path.add_arc(0, 1);
  path.add_arc(1, 2);
  path.add_arc(2, 3);
  EXPECT_EQ(oracle_kiob_outtree(path), 3);
  Digraph none(3);
  none.add_arc(0, 1);
  EXPECT_EQ(oracle_kiob_outtree(none), -1);
  EXPECT_FALSE(oracle_kiob(none).has_value());
}

TEST(Oracles, TreeAndPathsHand) {
  // 0 -> 1 -> 2, 3 -> 4
  Digraph g(5);
  g.add_arc(0, 1);
  g.add_arc(1, 2);
  g.add_arc(3, 4);
  EXPECT_TRUE(oracle_tp(g, 0, 3, 2, 1));   // tree {0, 1} with internal 0 and leaf 1, path 3 -> 4
  EXPECT_TRUE(oracle_tp(g, 0, 2, 1, 0));   // tree 0 -> 1 -> 2
  EXPECT_FALSE(oracle_tp(g, 0, 3, 1, 0));  // needs a tree with three internal nodes
  EXPECT_FALSE(oracle_tp(g, 0, 1, 1, 1));  // empty tree
}

TEST(Oracles, KpathHand) {
  Digraph g(4);
  g.add_arc(0, 1, 5);
  g.add_arc(1, 2, 1);
  g.add_arc(0, 3, 1);
  g.add_arc(3, 2, 1);
  g.add_arc(2, 1, 1);
  auto p = oracle_kpath(g, 3);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->weight, 2);
  EXPECT_EQ(oracle_kpath_subset_dp(g, 4), std::optional<Weight>(3));
  EXPECT_FALSE(oracle_kpath(g, 5).has_value());
}

TEST(Oracles, BudgetIsCharged) {
  gen::Rng rng(1);
  auto g = gen::digraph(12, 0.5, {1, 9}, rng);
  Budget b(10);
  EXPECT_THROW(oracle_kpath(g, 8, &b), BudgetExceeded);
}
