#include <gtest/gtest.h>

#include "fptmix/unisets.hpp"

using namespace fptmix;

namespace {

// Independent check: every k-window and every p-subset of it is realized by some function.
bool brute_universal(const std::vector<ElementSet>& fs, int n, int k, int p) {
  bool ok = true;
  for_each_subset(ElementSet::range(n), k, [&](const ElementSet& window) {
    for_each_subset(window, p, [&](const ElementSet& ones) {
      if (!ok) return;
      bool hit = false;
      for (const auto& f : fs)
        if ((f & window) == ones) hit = true;
      ok = hit;
    });
  });
  return ok;
}

}  // namespace

TEST(Unisets, GreedySmallCasesAreUniversal) {
  for (int n = 1; n <= 8; ++n)
    for (int k = 0; k <= std::min(n, 4); ++k)
      for (int p = 0; p <= k; ++p) {
        auto u = build_universal(n, k, p, UnisetMode::greedy);
        EXPECT_TRUE(brute_universal(u.functions, n, k, p)) << n << " " << k << " " << p;
        EXPECT_TRUE(check_universal(u));
      }
}

TEST(Unisets, RandomizedNeedsSeedAndIsReproducible) {
  EXPECT_THROW(build_universal(6, 3, 1, UnisetMode::randomized), InvalidInput);
  auto a = build_universal(7, 3, 1, UnisetMode::randomized, 11);
  auto b = build_universal(7, 3, 1, UnisetMode::randomized, 11);
  EXPECT_EQ(a.functions, b.functions);
  EXPECT_TRUE(brute_universal(a.functions, 7, 3, 1));
}

TEST(Unisets, SingleConstraint) {
  auto u = build_universal(1, 1, 1, UnisetMode::greedy);
  ASSERT_EQ(u.functions.size(), 1u);
  EXPECT_EQ(u.functions[0], ElementSet{0});
}

TEST(Unisets, CheckerFindsMissingPattern) {
  UniversalSet u{3, 2, 1, {ElementSet{0}, ElementSet{1}}};
  auto miss = find_uncovered(u);
  ASSERT_TRUE(miss.has_value());
  EXPECT_EQ(miss->first.size(), 1);
  EXPECT_EQ((miss->first | miss->second).size(), 2);
  EXPECT_FALSE(brute_universal(u.functions, 3, 2, 1));
}

TEST(Unisets, ParameterValidation) {
  EXPECT_THROW(build_universal(3, 4, 1, UnisetMode::greedy), InvalidInput);
  EXPECT_THROW(build_universal(3, 2, 3, UnisetMode::greedy), InvalidInput);
  EXPECT_THROW(parse_uniset_mode("fast"), InvalidInput);
}

TEST(Separator, GoodnessAndQuery) {
  auto sep = cached_separator(4, 2, 1);
  std::vector<ElementSet> fam;
  for (std::uint64_t i = 0; i < sep->size(); ++i) fam.push_back(sep->member(i));
  EXPECT_TRUE(brute_universal(fam, 4, 2, 1));
  for (int e = 0; e < 4; ++e) {
    std::vector<std::uint64_t> got, want;
    sep->containing(ElementSet{e}, got);
    for (std::uint64_t i = 0; i < fam.size(); ++i)
      if (fam[i].contains(e)) want.push_back(i);
    EXPECT_EQ(got, want);
  }
}

TEST(Separator, EmptyQueryReturnsAll) {
  auto sep = cached_separator(5, 2, 0);
  std::vector<std::uint64_t> got;
  sep->containing(ElementSet{}, got);
  EXPECT_EQ(got.size(), sep->size());
}

TEST(Separator, ImplicitFamilyRanksMatch) {
  auto sep = Separator::all_subsets(20, 20, 3);
  EXPECT_EQ(sep.size(), binom(20, 3));
  for (std::uint64_t i : {0ull, 7ull, 1139ull}) {
    std::vector<std::uint64_t> got;
    sep.containing(sep.member(i), got);
    ASSERT_EQ(got.size(), 1u);
    EXPECT_EQ(got[0], i);
  }
}

TEST(Separator, BuildOverPartLabels) {
  auto fam = build_separator(ElementSet{3, 8, 9}, 1, 1);
  std::vector<std::uint64_t> seen;
  ElementSet cover;
  for (const auto& s : fam) cover |= s;
  EXPECT_EQ(cover, (ElementSet{3, 8, 9}));
}
