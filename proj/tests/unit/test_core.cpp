#include <gtest/gtest.h>

#include "fptmix/core.hpp"

using namespace fptmix;

TEST(ElementSet, BasicOperations) {
  ElementSet s{1, 5, 100};
  EXPECT_EQ(s.size(), 3);
  EXPECT_TRUE(s.contains(100));
  EXPECT_EQ(s.min(), 1);
  EXPECT_EQ(s.max(), 100);
  EXPECT_EQ(s.without(5), (ElementSet{1, 100}));
  EXPECT_TRUE((ElementSet{1}).subset_of(s));
  EXPECT_FALSE(s.intersects(ElementSet{2, 3}));
  EXPECT_EQ(ElementSet::range(4).members(), (std::vector<int>{0, 1, 2, 3}));
}

TEST(ElementSet, RejectsOutOfRange) {
  ElementSet s;
  EXPECT_THROW(s.insert(ElementSet::capacity), InvalidInput);
  EXPECT_THROW(s.insert(-1), InvalidInput);
}

TEST(Weight, OverflowIsReported) {
  EXPECT_THROW(checked_add(INT64_MAX, 1), OverflowError);
  EXPECT_THROW(checked_sub(INT64_MIN, 1), OverflowError);
  EXPECT_EQ(checked_add(-3, 5), 2);
}

TEST(Combinatorics, BinomAndColexRank) {
  EXPECT_EQ(binom(10, 3), 120u);
  EXPECT_EQ(binom(3, 5), 0u);
  std::vector<std::uint64_t> ranks;
  for_each_subset(ElementSet::range(6), 3, [&](const ElementSet& s) { ranks.push_back(colex_rank(s)); });
  std::sort(ranks.begin(), ranks.end());
  ASSERT_EQ(ranks.size(), 20u);
  for (std::uint64_t i = 0; i < ranks.size(); ++i) EXPECT_EQ(ranks[i], i);
}

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(Rational::parse("1/12"), (Rational{1, 12}));
  EXPECT_EQ(Rational::parse("0.084"), (Rational{21, 250}));
  EXPECT_EQ(Rational::parse("2/4"), (Rational{1, 2}));
  EXPECT_THROW(Rational::parse("1/0"), ParseError);
  EXPECT_THROW(Rational::parse("abc"), ParseError);
  EXPECT_EQ(floor_product(Rational{7, 12}, Rational{84, 1000}, 27), 1);
}

TEST(OrderedUniverse, ReorderIdentityReversalAndInverse) {
  OrderedUniverse u({"a", "b", "c"});
  auto id = u.reordered({0, 1, 2});
  EXPECT_EQ(id.labels(), u.labels());
  auto rev = u.reordered({2, 1, 0});
  EXPECT_EQ(rev.rank("a"), 2);
  EXPECT_EQ(rev.rank("c"), 0);
  std::vector<int> p{1, 2, 0}, inv(3);
  for (int i = 0; i < 3; ++i) inv[p[i]] = i;
  auto there = u.reordered(p);
  EXPECT_EQ(there.reordered(inv).labels(), u.labels());
  EXPECT_THROW(u.reordered({0, 0, 1}), InvalidInput);
  EXPECT_THROW(OrderedUniverse({"a", "a"}), InvalidInput);
}

TEST(OrderedUniverse, BlockReorderPutsPiecesFirst) {
  // universe a,b,c,d with the piece {c,d} moved in front of the rest
  OrderedUniverse u({"a", "b", "c", "d"});
  auto v = u.reordered({2, 3, 0, 1});
  EXPECT_EQ(v.labels(), (std::vector<std::string>{"c", "d", "a", "b"}));
}

TEST(WeightedSetFamily, DeduplicationKeepsExtremalWeight) {
  WeightedSetFamily f(OrderedUniverse::numbered(4));
  f.add({0, 1}, 5);
  f.add({2, 3}, 1);
  f.add({0, 1}, 9);
  f.add({0, 1}, 2);
  auto mx = f.deduplicated(Objective::max);
  auto mn = f.deduplicated(Objective::min);
  ASSERT_EQ(mx.size(), 2u);
  EXPECT_EQ(mx[0].weight, 9);
  EXPECT_EQ(mn[0].weight, 2);
  EXPECT_THROW(f.add({7}, 1), InvalidInput);
}

TEST(Digraph, ParallelArcsKeepMinimumAndSelfLoopsFail) {
  Digraph g(3);
  g.add_arc(0, 1, 7);
  g.add_arc(0, 1, 3);
  g.add_arc(0, 1, 5);
  EXPECT_EQ(g.arc_weight(0, 1), 3);
  EXPECT_EQ(g.arc_count(), 1u);
  EXPECT_THROW(g.add_arc(2, 2, 1), InvalidInput);
  EXPECT_THROW(g.add_arc(0, 7, 1), InvalidInput);
  auto r = g.reachable_from(0);
  EXPECT_TRUE(r[1]);
  EXPECT_FALSE(r[2]);
}

TEST(Graph, EdgesAndInducedP2) {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  EXPECT_TRUE(spans_p2(g, 2, 0, 1));
  EXPECT_FALSE(spans_p2(g, 0, 1, 3));
  EXPECT_THROW(g.add_edge(1, 1), InvalidInput);
}

TEST(Budget, ThrowsWhenExceeded) {
  Budget b(3);
  b.charge(2);
  EXPECT_THROW(b.charge(2), BudgetExceeded);
}
