#include <gtest/gtest.h>

#include "fptmix/gen.hpp"
#include "fptmix/oracles.hpp"
#include "fptmix/p2pack.hpp"

using namespace fptmix;

namespace {

std::vector<int> random_cut(gen::Rng& rng, int E, int n) {
  std::vector<int> f(E);
  for (auto& x : f) x = std::uniform_int_distribution<int>(0, n - 1)(rng);
  std::sort(f.begin(), f.end());
  return f;
}

Pro2Instance random_pro2(gen::Rng& rng, int n, int count, int E) {
  auto fam = gen::setfamily(n, 5 + n % 7, {1, 1}, rng);
  Pro2Instance p;
  p.universe_size = n;
  for (const auto& s : fam.sets()) p.sets.push_back(s.members);
  p.base_size = 1 + n % 2;
  for (int b = 0; b < 1 + n % 3; ++b) {
    auto q = gen::permutation(rng, n);
    ElementSet e;
    for (int t = 0; t < p.base_size; ++t) e.insert(q[t]);
    p.base.push_back(e);
  }
  p.count = count;
  p.inv_eps = E;
  p.f = random_cut(rng, E, n);
  return p;
}

}  // namespace

TEST(P2Path, RecognizesPathsOnThreeNodes) {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  auto p = p2_path_on(g, ElementSet{0, 1, 2});
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(*p, (P2Path{0, 1, 2}));
  EXPECT_FALSE(p2_path_on(g, ElementSet{0, 1, 3}).has_value());
  EXPECT_FALSE(p2_path_on(g, ElementSet{0, 1}).has_value());
}

TEST(CheckPacking, Failures) {
  Graph g(6);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(3, 4);
  g.add_edge(4, 5);
  EXPECT_FALSE(check_packing(g, {{0, 1, 2}, {3, 4, 5}}).has_value());
  EXPECT_TRUE(check_packing(g, {{0, 1, 2}, {2, 4, 5}}).has_value());
  EXPECT_TRUE(check_packing(g, {{0, 2, 1}}).has_value());
  EXPECT_TRUE(check_packing(g, {{0, 1, 9}}).has_value());
}

TEST(IcpMaxP, Values) {
  EXPECT_EQ(icp_max_p(1), 3);
  EXPECT_EQ(icp_max_p(2), 3);
  EXPECT_EQ(icp_max_p(3), 4);
  EXPECT_EQ(icp_max_p(5), 5);
}

TEST(Pro2Schedule, HandValues) {
  EXPECT_EQ(pro2_schedule(2, 4, 2), (std::vector<int>{0, 1, 3}));
  EXPECT_THROW(pro2_schedule(1, 1, 2), InvalidInput);
}

TEST(Pro2, AgreesWithOracle) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    gen::Rng rng(seed);
    int n = 6 + seed % 6;
    for (int count = 1; count <= 3; ++count)
      for (int E = 1; E <= count; ++E) {
        auto p = random_pro2(rng, n, count, E);
        auto cut = solve_cpro2(p);
        EXPECT_EQ(cut.verdict == Verdict::accept, oracle_pro2(p, true)) << seed << " " << count << " " << E;
        auto full = procedure2(p, E);
        bool want = oracle_pro2(p, false);
        ASSERT_EQ(full.verdict == Verdict::accept, want) << seed << " " << count << " " << E;
        if (!want) continue;
        ElementSet used = p.base[full.base_index];
        ASSERT_EQ(static_cast<int>(full.order.size()), count);
        for (auto i : full.order) {
          EXPECT_FALSE(p.sets[i].intersects(used));
          used |= p.sets[i];
        }
      }
  }
}

TEST(P2Packing, AgreesWithOracle) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    gen::Rng rng(seed);
    int n = 6 + seed % 7;
    auto g = gen::graph(n, 0.2 + 0.05 * (seed % 5), rng);
    if (seed % 2) gen::plant_p2(g, std::min(3, n / 3), rng);
    int best = oracle_p2p(g);
    for (int k = 1; k <= 4; ++k)
      for (int e = 1; e <= 2; ++e) {
        P2Options opt;
        opt.inv_eps = e;
        auto r = solve_p2packing(g, k, opt);
        ASSERT_EQ(r.verdict == Verdict::accept, best >= k) << seed << " " << k << " " << e;
        if (r.verdict != Verdict::accept) continue;
        EXPECT_EQ(static_cast<int>(r.packing.size()), k);
        EXPECT_FALSE(check_packing(g, r.packing).has_value());
      }
  }
}

TEST(P2Packing, CompressionRoundExtendsAMaximalPacking) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    gen::Rng rng(seed);
    auto g = gen::graph(9, 0.3, rng);
    gen::plant_p2(g, 3, rng);
    auto two = solve_p2packing(g, 2);
    ASSERT_EQ(two.verdict, Verdict::accept);
    Budget budget(Budget::default_limit);
    auto next = icp_round(IcpInstance{g, 3, two.packing}, P2Options{}, budget);
    ASSERT_TRUE(next.has_value()) << seed;
    EXPECT_EQ(next->size(), 3u);
    EXPECT_FALSE(check_packing(g, *next).has_value());
  }
}

TEST(P2Packing, EdgeCases) {
  Graph g(5);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  EXPECT_EQ(solve_p2packing(g, 0).verdict, Verdict::accept);
  EXPECT_EQ(solve_p2packing(g, 1).verdict, Verdict::accept);
  EXPECT_EQ(solve_p2packing(g, 2).verdict, Verdict::reject);
  EXPECT_THROW(solve_p2packing(g, -1), InvalidInput);
  gen::Rng rng(5);
  auto big = gen::graph(24, 0.3, rng);
  P2Options opt;
  opt.budget = 10;
  EXPECT_EQ(solve_p2packing(big, 6, opt).verdict, Verdict::budget_exceeded);
}

TEST(Pro1, RejectsBadRounds) {
  Graph g(6);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  EXPECT_THROW(icp_pro1(IcpInstance{g, 2, {}}, 3, 1), InvalidInput);
  EXPECT_THROW(icp_pro1(IcpInstance{g, 2, {{0, 1, 2}}}, 5, 2), InvalidInput);
  // one path entirely outside the empty packing leaves an empty X-part
  auto fam = icp_pro1(IcpInstance{g, 1, {}}, 3, 1);
  ASSERT_EQ(fam.sets.size(), 1u);
  EXPECT_TRUE(fam.sets[0].empty());
  ASSERT_EQ(fam.paths[0].size(), 1u);
  EXPECT_EQ(fam.paths[0][0], (P2Path{0, 1, 2}));
}
