#include <gtest/gtest.h>

#include "fptmix/gen.hpp"
#include "fptmix/kpath.hpp"
#include "fptmix/oracles.hpp"

using namespace fptmix;

namespace {

struct Witness {
  KcwpInstance in;
  Weight opt = 0;
};

Witness planted(std::uint64_t seed) {
  gen::Rng rng(seed);
  int k = 27 + seed % 3, n = k + seed % 4;
  auto g = gen::digraph(n, 0.05 + 0.05 * (seed % 4), {1, 9}, rng);
  auto path = gen::plant_path(g, k, {1, 9}, rng);
  Witness w{construct_kcwp_witness(g, path, 13, {1, 12}, {84, 1000}), 0};
  auto o = oracle_kcwp(w.in);
  if (o) w.opt = *o;
  return w;
}

}  // namespace

TEST(KcwpShape, DefaultsAtK27) {
  auto s = kcwp_shape(27, 13, {1, 12}, {84, 1000});
  EXPECT_EQ(s.E, 13);
  EXPECT_EQ(s.m, 6);
  EXPECT_EQ(s.mt, 1);
  EXPECT_EQ(s.P, 2);
  EXPECT_EQ(s.side_l(), 7);
  EXPECT_EQ(s.side_r(), 5);
  EXPECT_EQ(s.mid, 27 - 2 * 6 * 2 - 2);
  EXPECT_EQ(s.k1 + s.k2 + s.k3, 27 - 1 - 13);
}

TEST(KcwpShape, RejectsBadParameters) {
  EXPECT_THROW(kcwp_shape(27, 12, {1, 12}, {84, 1000}), InvalidInput);
  EXPECT_THROW(kcwp_shape(27, 9, {1, 8}, {84, 1000}), InvalidInput);
  EXPECT_THROW(kcwp_shape(26, 13, {1, 12}, {84, 1000}), InvalidInput);
  EXPECT_THROW(kcwp_shape(27, 13, {1, 7}, {84, 1000}), InvalidInput);
  EXPECT_THROW(kcwp_shape(27, 13, {1, 12}, {1, 5}), InvalidInput);
  EXPECT_THROW(kcwp_shape(27, 13, {1, 5}, {84, 1000}), InvalidInput);
}

TEST(Kcwp, WitnessInstancesAreValid) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto w = planted(seed);
    EXPECT_FALSE(validate_kcwp(w.in).has_value()) << seed;
    EXPECT_TRUE(kcwp_piece_chain(w.in).has_value()) << seed;
    EXPECT_TRUE(oracle_kcwp(w.in).has_value()) << seed;
  }
}

TEST(Kcwp, AgreesWithOracleAtTheThreshold) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto w = planted(seed);
    for (Weight W : {w.opt, w.opt - 1}) {
      w.in.W = W;
      for (bool reduce : {true, false}) {
        KcwpOptions opt;
        opt.reduce = reduce;
        auto r = solve_kcwp(w.in, opt);
        EXPECT_EQ(r.accept, W >= w.opt) << seed << " " << reduce;
        if (!r.accept) continue;
        EXPECT_EQ(r.weight, w.opt);
        auto c = check_kcwp_solution(w.in, r.pieces);
        ASSERT_TRUE(std::holds_alternative<Weight>(c)) << std::get<std::string>(c);
        auto path = assemble_kcwp_path(w.in, r.pieces);
        auto p = check_kpath(w.in.graph, path, w.in.k, W);
        ASSERT_TRUE(std::holds_alternative<Weight>(p)) << std::get<std::string>(p);
        EXPECT_EQ(std::get<Weight>(p), w.opt);
      }
    }
  }
}

TEST(Kcwp, InvalidInstanceThrows) {
  auto w = planted(2);
  w.in.vl = w.in.vr;
  EXPECT_TRUE(validate_kcwp(w.in).has_value());
  EXPECT_THROW(solve_kcwp(w.in), InvalidInput);
}

TEST(CheckKpath, Failures) {
  Digraph g(3);
  g.add_arc(0, 1, 4);
  g.add_arc(1, 2, 5);
  EXPECT_EQ(std::get<Weight>(check_kpath(g, {0, 1, 2}, 3, 9)), 9);
  EXPECT_TRUE(std::holds_alternative<std::string>(check_kpath(g, {0, 1, 2}, 3, 8)));
  EXPECT_TRUE(std::holds_alternative<std::string>(check_kpath(g, {0, 1}, 3, 9)));
  EXPECT_TRUE(std::holds_alternative<std::string>(check_kpath(g, {0, 2, 1}, 3, 9)));
  EXPECT_TRUE(std::holds_alternative<std::string>(check_kpath(g, {0, 1, 0}, 3, 9)));
}

TEST(PathAlg, SmallKUsesExhaustiveSearch) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    gen::Rng rng(seed);
    auto g = gen::digraph(7, 0.35, {1, 9}, rng);
    for (int k = 2; k <= 4; ++k) {
      auto best = oracle_kpath_subset_dp(g, k);
      Weight W = best ? *best : 100;
      auto r = path_alg(g, W, k);
      EXPECT_TRUE(r.used_fallback);
      EXPECT_EQ(r.verdict == Verdict::accept, best.has_value());
      if (best) {
        EXPECT_EQ(std::get<Weight>(check_kpath(g, r.path, k, W)), *best);
        EXPECT_EQ(path_alg(g, *best - 1, k).verdict, Verdict::reject);
      }
    }
  }
}

TEST(PathAlg, EdgeCases) {
  Digraph g(3);
  g.add_arc(0, 1, 2);
  EXPECT_EQ(path_alg(g, 0, 1).verdict, Verdict::accept);
  EXPECT_EQ(path_alg(g, 5, 4).verdict, Verdict::reject);
  PathAlgOptions opt;
  opt.budget = 0;
  EXPECT_EQ(path_alg(g, 5, 2, opt).verdict, Verdict::budget_exceeded);
  EXPECT_THROW(path_alg(g, 5, 0), InvalidInput);
}

TEST(PathAlg, ExceedsBudgetOnFullScale) {
  gen::Rng rng(3);
  auto g = gen::digraph(30, 0.2, {1, 9}, rng);
  gen::plant_path(g, 27, {1, 9}, rng);
  PathAlgOptions opt;
  opt.budget = 1000;
  EXPECT_EQ(path_alg(g, 1000, 27, opt).verdict, Verdict::budget_exceeded);
}

TEST(KpathOracles, DfsAndSubsetDpAgree) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    gen::Rng rng(seed);
    auto g = gen::digraph(6 + seed % 3, 0.3, {-3, 9}, rng);
    for (int k = 1; k <= 5; ++k) {
      auto a = oracle_kpath(g, k);
      auto b = oracle_kpath_subset_dp(g, k);
      ASSERT_EQ(a.has_value(), b.has_value());
      if (a) {
        EXPECT_EQ(a->weight, *b);
        EXPECT_EQ(std::get<Weight>(check_kpath(g, a->nodes, k, a->weight)), a->weight);
      }
    }
  }
}
