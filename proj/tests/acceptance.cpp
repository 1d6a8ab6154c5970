#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fptmix/fptmix.hpp"
#include "fptmix/gen.hpp"

using namespace fptmix;

namespace {

// Tolerances of the bound-table criterion.
constexpr double kAlphaBetaTol = 1e-4;
constexpr double kTable1ValueTol = 1e-3;
constexpr double kTable2Tol = 1e-4;
constexpr double kTable3Tol = 1e-5;
constexpr double kTable4Tol = 1e-6;
constexpr double kTable4ArgTol = 1e-3;
constexpr double kTable5Tol = 1e-5;
constexpr double kTable5TTol = 1e-6;
constexpr double kStageIndexTol = 2;
constexpr double kP2Tol = 1e-4;
constexpr double kP2TTol = 5e-4;
constexpr double kHeadlineTol = 1e-3;

constexpr int kOracleSuiteSize = 200;
constexpr int kRepresentationPairs = 500;
constexpr int kAbInstances = 100;

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

// Accepts seen across all suites and how many failed their verifier.
struct WitnessLedger {
  long checked = 0;
  long failed = 0;
  std::string first;
  void record(const std::string& where, const std::optional<std::string>& problem) {
    ++checked;
    if (!problem) return;
    if (failed++ == 0) first = where + ": " + *problem;
  }
};

WitnessLedger witnesses;

template <class T>
std::optional<std::string> failure_of(const std::variant<T, std::string>& v) {
  if (auto* s = std::get_if<std::string>(&v)) return *s;
  return std::nullopt;
}

void report(int id, const char* name, const Outcome& o, double seconds) {
  std::printf("%s %d %s (%.1fs)%s%s\n", o.pass ? "PASS" : "FAIL", id, name, seconds, o.detail.empty() ? "" : ": ",
              o.detail.c_str());
  std::fflush(stdout);
}

bool near(double got, double want, double tol) { return std::fabs(got - want) <= tol; }

void expect_near(Outcome& o, const std::string& what, double got, double want, double tol) {
  if (!near(got, want, tol)) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s = %.9g, expected %.9g +- %g", what.c_str(), got, want, tol);
    o.fail(buf);
  }
}

Outcome bound_tables() {
  Outcome o;
  for (const auto& row : bounds::table1_reference()) {
    auto r = bounds::alpha_beta_row(row.params[0]);
    std::string c = "c=" + std::to_string(row.params[0]);
    expect_near(o, "table1 alpha " + c, r.alpha, row.values[0], kAlphaBetaTol);
    expect_near(o, "table1 first " + c, r.first, row.values[1], kTable1ValueTol);
    expect_near(o, "table1 threshold " + c, r.threshold, row.values[2], kTable1ValueTol);
    expect_near(o, "table1 beta " + c, r.beta, row.values[3], kAlphaBetaTol);
    expect_near(o, "table1 second " + c, r.second, row.values[4], kTable1ValueTol);
  }
  expect_near(o, "table2 c=1.497", bounds::kiob_det_bound(1.497), 5.13863, kTable2Tol);
  expect_near(o, "table3 (1.765, 0.8545)", bounds::kiob_rand_bound(1.765, 0.8545), 3.615894, kTable3Tol);
  const auto& t4 = bounds::table4_reference();
  for (std::size_t i = 0; i < t4.size(); ++i) {
    const auto& p = t4[i].params;
    auto b = bounds::kpath_bound({p[0], p[1], p[2], p[3], p[4], p[5]});
    std::string r = "table4 row " + std::to_string(i + 1);
    expect_near(o, r + " Z", b.z, t4[i].values[0], kTable4Tol);
    expect_near(o, r + " Z1", b.z1, t4[i].values[1], kTable4Tol);
    expect_near(o, r + " Z2", b.z2, t4[i].values[2], kTable4Tol);
    if (i == 0) expect_near(o, r + " Z1 argmax", b.z1_arg, 0.908105, kTable4ArgTol);
  }
  auto w = bounds::wsp_bound(1.591);
  expect_near(o, "table5 value", w.value, 8.096396, kTable5Tol);
  expect_near(o, "table5 i", static_cast<double>(w.i), 54515, kStageIndexTol);
  expect_near(o, "table5 T(i-1)", w.T, 0.1476821, kTable5TTol);
  for (const auto& row : bounds::table5_reference()) {
    auto b = bounds::wsp_bound(row.params[0]);
    std::string c = "table5 c=" + std::to_string(row.params[0]);
    expect_near(o, c, b.value, row.values[0], kTable5Tol);
    expect_near(o, c + " i", static_cast<double>(b.i), row.values[1], kStageIndexTol);
    expect_near(o, c + " T", b.T, row.values[2], kTable5TTol);
  }
  auto p = bounds::p2p_bound(1e-5);
  expect_near(o, "p2p value", p.value, 6.77682, kP2Tol);
  expect_near(o, "p2p i", static_cast<double>(p.i), 6377, kStageIndexTol);
  expect_near(o, "p2p T(i-1)", p.T, 0.04485, kP2TTol);
  if (o.pass) o.detail = "tables 1-5 and the packing bound within tolerance";
  return o;
}

Outcome headline_constants() {
  Outcome o;
  struct Check {
    const char* name;
    double value, cap;
  };
  const Check checks[] = {
      {"kiob-det", bounds::kiob_det_bound(1.497), 5.139},
      {"kpath", bounds::kpath_bound({}).z, 2.59606},
      {"wsp", bounds::wsp_bound(1.591).value, 8.097},
      {"p2p", bounds::p2p_bound().value, 6.777},
  };
  char buf[256];
  std::string summary;
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%s %.7f <= %g", c.name, c.value, c.cap);
    if (c.value > c.cap + kHeadlineTol) o.fail(std::string(buf) + " violated");
    summary += (summary.empty() ? "" : ", ") + std::string(buf);
  }
  if (o.pass) o.detail = summary;
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  long decisions = 0;
  auto fail = [&](const std::string& suite, std::uint64_t seed, const std::string& what) {
    o.fail(suite + " seed " + std::to_string(seed) + ": " + what);
  };

  for (std::uint64_t seed = 1; seed <= kOracleSuiteSize; ++seed) {
    gen::Rng rng(seed);
    int n = 3 + seed % 8;
    auto g = gen::digraph(n, 0.15 + 0.05 * (seed % 5), {1, 1}, rng);
    if (seed % 4) gen::make_reachable(g, static_cast<int>(seed % n), {1, 1}, rng);
    int best = oracle_kiob_outtree(g);
    for (int k = 1; k <= 4; ++k) {
      auto r = solve_kiob(g, k);
      ++decisions;
      if (r.accept != (best >= k)) fail("kiob", seed, "k=" + std::to_string(k) + " disagrees");
      if (!r.accept) continue;
      auto bad = check_branching(g, r.branching);
      if (!bad && internal_count(r.branching) < k) bad = "too few internal nodes";
      witnesses.record("kiob", bad);
    }
  }

  for (std::uint64_t seed = 1; seed <= kOracleSuiteSize; ++seed) {
    gen::Rng rng(seed);
    int n = 6 + seed % 5;
    auto fam = gen::setfamily(n, 4 + seed % 14, {-3, 9}, rng);
    for (int k = 1; k <= 3; ++k) {
      auto opt = oracle_wsp(fam, k);
      for (int e = 1; e <= 2; ++e) {
        WspOptions wo;
        wo.inv_eps = e;
        std::string tag = "k=" + std::to_string(k) + " 1/eps=" + std::to_string(e);
        if (!opt) {
          ++decisions;
          if (wsp_alg(fam, -1000, k, wo).verdict != Verdict::reject) fail("wsp", seed, tag + " accepts without packing");
          continue;
        }
        auto at = wsp_alg(fam, *opt, k, wo);
        auto beyond = wsp_alg(fam, *opt + 1, k, wo);
        decisions += 2;
        if (at.verdict != Verdict::accept) fail("wsp", seed, tag + " rejects at W = opt");
        if (beyond.verdict != Verdict::reject) fail("wsp", seed, tag + " accepts at W = opt + 1");
        if (at.verdict == Verdict::accept) witnesses.record("wsp", failure_of(check_set_packing(fam, at.packing, k, *opt)));
      }
    }
  }

  for (std::uint64_t seed = 1; seed <= kOracleSuiteSize; ++seed) {
    gen::Rng rng(seed);
    int n = 4 + seed % 7;
    auto g = gen::graph(n, 0.15 + 0.05 * (seed % 5), rng);
    if (seed % 2) gen::plant_p2(g, n / 3, rng);
    int best = oracle_p2p(g);
    for (int k = 1; k <= 3; ++k)
      for (int e = 1; e <= 2; ++e) {
        P2Options po;
        po.inv_eps = e;
        auto r = solve_p2packing(g, k, po);
        ++decisions;
        bool accept = r.verdict == Verdict::accept;
        if (accept != (best >= k))
          fail("p2p", seed, "k=" + std::to_string(k) + " 1/eps=" + std::to_string(e) + " " + to_string(r.verdict));
        if (!accept) continue;
        auto bad = check_packing(g, r.packing);
        if (!bad && static_cast<int>(r.packing.size()) != k) bad = "wrong number of paths";
        witnesses.record("p2p", bad);
      }
  }

  // cut-path instances need 1/eps >= 11 odd and floor(eps (k - 1)) >= 2, so k >= 27
  for (std::uint64_t seed = 1; seed <= kOracleSuiteSize; ++seed) {
    gen::Rng rng(seed);
    int k = 27 + seed % 3, n = k + seed % 4;
    auto g = gen::digraph(n, 0.05 + 0.05 * (seed % 4), {1, 9}, rng);
    auto path = gen::plant_path(g, k, {1, 9}, rng);
    auto in = construct_kcwp_witness(g, path, 13, {1, 12}, {84, 1000});
    auto opt = oracle_kcwp(in);
    if (!opt) {
      fail("kcwp", seed, "witness instance has no solution");
      continue;
    }
    for (Weight W : {*opt, *opt - 1}) {
      in.W = W;
      auto r = solve_kcwp(in);
      ++decisions;
      if (r.accept != (W >= *opt)) fail("kcwp", seed, "W=" + std::to_string(W) + " disagrees");
      if (!r.accept) continue;
      if (r.weight != *opt) fail("kcwp", seed, "weight differs from the optimum");
      auto bad = failure_of(check_kcwp_solution(in, r.pieces));
      if (!bad) bad = failure_of(check_kpath(in.graph, assemble_kcwp_path(in, r.pieces), k, W));
      witnesses.record("kcwp", bad);
    }
  }
  if (o.pass) o.detail = std::to_string(decisions) + " decisions agree over 4 x " + std::to_string(kOracleSuiteSize) + " instances";
  return o;
}

Outcome representation() {
  Outcome o;
  int reduced = 0;
  for (std::uint64_t seed = 1; seed <= kRepresentationPairs; ++seed) {
    gen::Rng rng(seed);
    int t = 1 + seed % 3;
    int n = std::uniform_int_distribution<int>(t * 2, std::min(14, t * 5))(rng);
    auto order = gen::permutation(rng, n);
    std::vector<RepPart> parts(t);
    for (int i = 0; i < n; ++i) parts[i % t].elements.insert(order[i]);
    for (auto& part : parts) {
      int size = part.elements.size();
      part.k = std::uniform_int_distribution<int>(1, std::min(4, size))(rng);
      part.p = std::uniform_int_distribution<int>(0, part.k)(rng);
      part.c = 1.0 + 0.25 * (seed % 3);
    }
    WeightedSetFamily fam(OrderedUniverse::numbered(n));
    int count = std::uniform_int_distribution<int>(1, 600)(rng);
    for (int c = 0; c < count; ++c) {
      ElementSet s;
      for (const auto& part : parts) {
        auto m = part.elements.members();
        std::shuffle(m.begin(), m.end(), rng);
        for (int i = 0; i < part.p; ++i) s.insert(m[i]);
      }
      fam.add(s, gen::uniform_weight(rng, -9, 20));
    }
    const auto obj = seed % 2 ? Objective::max : Objective::min;
    fam = fam.deduplicated(obj);
    RepStats st;
    auto rep = gen_rep_alg(fam, parts, obj, &st);
    if (auto bad = find_representation_violation(fam, rep, parts, obj))
      o.fail("seed " + std::to_string(seed) + ": " + *bad);
    if (rep.size() > st.product_size) o.fail("seed " + std::to_string(seed) + ": output larger than the product bound");
    reduced += rep.size() < fam.size();
  }
  if (o.pass)
    o.detail = std::to_string(kRepresentationPairs) + " pairs represent, " + std::to_string(reduced) + " of them strictly reduced";
  return o;
}

// Independent universality check by direct pattern enumeration.
bool universal_by_enumeration(const std::vector<ElementSet>& fs, int n, int k, int p) {
  bool ok = true;
  for_each_subset(ElementSet::range(n), k, [&](const ElementSet& window) {
    if (!ok) return;
    for_each_subset(window, p, [&](const ElementSet& ones) {
      if (!ok) return;
      bool hit = false;
      for (const auto& f : fs)
        if ((f & window) == ones) {
          hit = true;
          break;
        }
      ok = hit;
    });
  });
  return ok;
}

Outcome universal_sets() {
  Outcome o;
  int families = 0;
  for (int n = 1; n <= 12; ++n)
    for (int k = 0; k <= std::min(n, 4); ++k)
      for (int p = 0; p <= k; ++p)
        for (auto mode : {UnisetMode::greedy, UnisetMode::randomized}) {
          auto u = build_universal(n, k, p, mode, std::uint64_t{1000} + n * 25 + k * 5 + p);
          ++families;
          if (!universal_by_enumeration(u.functions, n, k, p) || !check_universal(u))
            o.fail(std::string(to_string(mode)) + " (" + std::to_string(n) + ", " + std::to_string(k) + ", " +
                   std::to_string(p) + ") is not universal");
        }
  if (o.pass) o.detail = std::to_string(families) + " families valid";
  return o;
}

Outcome matching_optimality() {
  Outcome o;
  long graphs = 0;
  for (int n = 0; n <= 7; ++n) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
      Graph g(n);
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if (mask >> i & 1) g.add_edge(pairs[i].first, pairs[i].second);
      auto m = max_matching(g);
      ++graphs;
      if (!is_matching(g, m) || static_cast<int>(m.size()) != oracle_matching(g))
        o.fail("n=" + std::to_string(n) + " mask " + std::to_string(mask));
    }
  }
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    gen::Rng rng(seed);
    int n = 8 + seed % 9;
    auto g = gen::graph(n, 0.1 + 0.05 * (seed % 8), rng);
    auto m = max_matching(g);
    ++graphs;
    if (!is_matching(g, m) || static_cast<int>(m.size()) != oracle_matching(g)) o.fail("random seed " + std::to_string(seed));
  }
  if (o.pass) o.detail = std::to_string(graphs) + " graphs optimal";
  return o;
}

std::vector<int> random_cut(gen::Rng& rng, int E, int n) {
  std::vector<int> f(E);
  for (auto& x : f) x = std::uniform_int_distribution<int>(0, n - 1)(rng);
  std::sort(f.begin(), f.end());
  return f;
}

Outcome reduction_ab() {
  Outcome o;
  int cw = 0, kc = 0, cw_acc = 0, kc_acc = 0;
  for (std::uint64_t seed = 1; cw < kAbInstances; ++seed) {
    gen::Rng rng(seed);
    int n = 6 + seed % 7;
    int k = 1 + seed % 3, E = 1 + seed % k;
    CwspInstance in{gen::setfamily(n, 6 + seed % 14, {1, 9}, rng), k, 0, E, random_cut(rng, E, n)};
    CwspOptions on, off;
    off.reduce = false;
    auto a = solve_cwsp(in, on), b = solve_cwsp(in, off);
    ++cw;
    if (a.accept != b.accept || a.best != b.best) o.fail("cwsp seed " + std::to_string(seed));
    for (const auto* r : {&a, &b}) {
      if (!r->accept) continue;
      ++cw_acc;
      CwspInstance at = in;
      at.W = *r->best;
      witnesses.record("cwsp", failure_of(check_cwsp_solution(at, r->order)));
    }
  }
  for (std::uint64_t seed = 1; kc < kAbInstances; ++seed) {
    gen::Rng rng(seed + 5000);
    int k = 27 + seed % 3, n = k + seed % 4;
    auto g = gen::digraph(n, 0.05 + 0.05 * (seed % 4), {1, 9}, rng);
    auto path = gen::plant_path(g, k, {1, 9}, rng);
    auto in = construct_kcwp_witness(g, path, 13, {1, 12}, {84, 1000});
    // alternate thresholds at, below and above the planted weight
    in.W += static_cast<Weight>(seed % 3) - 1;
    KcwpOptions on, off;
    off.reduce = false;
    auto a = solve_kcwp(in, on), b = solve_kcwp(in, off);
    ++kc;
    if (a.accept != b.accept || (a.accept && a.weight != b.weight)) o.fail("kcwp seed " + std::to_string(seed));
    for (const auto* r : {&a, &b}) {
      if (!r->accept) continue;
      ++kc_acc;
      witnesses.record("kcwp", failure_of(check_kcwp_solution(in, r->pieces)));
    }
  }
  if (o.pass)
    o.detail = std::to_string(cw) + " cut packing (" + std::to_string(cw_acc) + " accepts) and " + std::to_string(kc) +
               " cut path (" + std::to_string(kc_acc) + " accepts) instances agree";
  return o;
}

Outcome witness_integrity() {
  Outcome o;
  if (witnesses.checked == 0) o.fail("no accepts were verified");
  if (witnesses.failed > 0) o.fail(std::to_string(witnesses.failed) + " witnesses failed, first " + witnesses.first);
  if (o.pass) o.detail = std::to_string(witnesses.checked) + " witnesses verified";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"bound tables", bound_tables},
      {"headline constants", headline_constants},
      {"oracle equivalence", oracle_equivalence},
      {"representation property", representation},
      {"universal sets", universal_sets},
      {"matching optimality", matching_optimality},
      {"reduction A/B", reduction_ab},
      {"witness integrity", witness_integrity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(static_cast<int>(i + 1), criteria[i].name, o, s);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
