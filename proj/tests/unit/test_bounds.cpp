#include <gtest/gtest.h>

#include <cmath>

#include "fptmix/bounds.hpp"

using namespace fptmix;
using namespace fptmix::bounds;

namespace {

// g(a) = c^(2-a) / (a^a (c-a)^(2-2a)) evaluated directly
double g_direct(double a, double c) {
  return std::pow(c, 2 - a) / (std::pow(a, a) * std::pow(c - a, 2 - 2 * a));
}

double grid_max(double (*f)(double, double), double c, double lo, double hi, double* arg) {
  double best = -1;
  for (int i = 0; i <= 200000; ++i) {
    double a = lo + (hi - lo) * i / 200000;
    double v = f(a, c);
    if (v > best) {
      best = v;
      *arg = a;
    }
  }
  return best;
}

}  // namespace

TEST(Bounds, LogGMatchesDirectFormula) {
  for (double c : {1.0, 1.3, 1.9})
    for (double a : {0.1, 0.5, 0.9}) EXPECT_NEAR(std::exp(log_g(a, c)), g_direct(a, c), 1e-12);
}

TEST(Bounds, MaximizeFindsGridOptimum) {
  for (double c : {1.0, 1.4, 1.497}) {
    double arg = 0;
    double want = grid_max(g_direct, c, 0, 1, &arg);
    auto m = maximize([&](double a) { return log_g(a, c); }, 0, 1);
    EXPECT_NEAR(std::exp(m.value), want, 1e-8);
    EXPECT_NEAR(m.arg, arg, 1e-4);
  }
}

TEST(Bounds, Table1Rows) {
  for (const auto& row : table1_reference()) {
    auto r = alpha_beta_row(row.params[0]);
    EXPECT_NEAR(r.alpha, row.values[0], 6e-5) << row.params[0];
    EXPECT_NEAR(r.first, row.values[1], 6e-4) << row.params[0];
    EXPECT_NEAR(r.threshold, row.values[2], 6e-5) << row.params[0];
    EXPECT_NEAR(r.beta, row.values[3], 6e-5) << row.params[0];
    EXPECT_NEAR(r.second, row.values[4], 6e-5 * row.values[4]) << row.params[0];
  }
}

TEST(Bounds, Table2IsTheLargerColumn) {
  for (const auto& row : table2_reference())
    EXPECT_NEAR(kiob_det_bound(row.params[0]), row.values[0], 6e-5 * row.values[0]) << row.params[0];
}

TEST(Bounds, Table3Rows) {
  for (const auto& row : table3_reference())
    EXPECT_NEAR(kiob_rand_bound(row.params[1], row.params[0]), row.values[0], 1e-6) << row.params[0] << " " << row.params[1];
  EXPECT_DOUBLE_EQ(kiob_rand_cross_term(1.0), 4.0);
}

TEST(Bounds, Table4Rows) {
  for (const auto& row : table4_reference()) {
    const auto& p = row.params;
    auto b = kpath_bound({p[0], p[1], p[2], p[3], p[4], p[5]});
    EXPECT_NEAR(b.z, row.values[0], 2e-6);
    EXPECT_NEAR(b.z1, row.values[1], 2e-6);
    EXPECT_NEAR(b.z2, row.values[2], 2e-6);
  }
}

TEST(Bounds, Table5Rows) {
  for (const auto& row : table5_reference()) {
    auto b = wsp_bound(row.params[0]);
    EXPECT_NEAR(b.value, row.values[0], 2e-6) << row.params[0];
    EXPECT_NEAR(static_cast<double>(b.i), row.values[1], 2) << row.params[0];
    EXPECT_NEAR(b.T, row.values[2], 1e-6) << row.params[0];
  }
}

TEST(Bounds, P2PackingBound) {
  const auto& ref = p2p_reference();
  auto b = p2p_bound(ref.params[0]);
  EXPECT_NEAR(b.value, ref.values[0], 2e-5);
  EXPECT_NEAR(static_cast<double>(b.i), ref.values[1], 2);
  EXPECT_NEAR(b.T, ref.values[2], 1e-4);
}

TEST(Bounds, StageRecursions) {
  auto T = wsp_T(0.5);
  ASSERT_EQ(T.size(), 3u);
  EXPECT_DOUBLE_EQ(T[1], 0.0);
  EXPECT_NEAR(T[2], 0.5 * (2 * 0.5) / (3 * 0.5), 1e-15);
  auto U = p2p_T(0.5);
  EXPECT_NEAR(U[1], 0.5 * 2 / 3, 1e-15);
}

TEST(Bounds, EvalBoundDispatch) {
  EXPECT_NEAR(eval_bound("kiob-det", {}).base, kiob_det_bound(1.497), 1e-12);
  EXPECT_NEAR(eval_bound("wsp", {{"c", 1.59}}).base, wsp_bound(1.59).value, 1e-12);
  EXPECT_THROW(eval_bound("nope", {}), InvalidInput);
  EXPECT_THROW(alpha_beta_row(0.5), InvalidInput);
}
