#pragma once

// Exhaustive reference solvers. They share no code with the solver modules.

#include <algorithm>
#include <functional>
#include <optional>
#include <unordered_set>
#include <vector>

#include "core.hpp"
#include "instances.hpp"

namespace fptmix {

struct PathResult {
  Weight weight = 0;
  std::vector<int> nodes;
};

// Minimum-weight simple directed path on exactly k nodes (depth-first enumeration).
inline std::optional<PathResult> oracle_kpath(const Digraph& g, int k, Budget* budget = nullptr) {
  if (k < 1) throw InvalidInput("k must be positive");
  std::optional<PathResult> best;
  std::vector<int> path;
  std::vector<char> on(g.size(), 0);
  std::function<void(int, Weight)> dfs = [&](int v, Weight w) {
    if (budget) budget->charge();
    if (static_cast<int>(path.size()) == k) {
      if (!best || w < best->weight) best = PathResult{w, path};
      return;
    }
    for (auto [u, aw] : g.out(v)) {
      if (on[u]) continue;
      on[u] = 1;
      path.push_back(u);
      dfs(u, checked_add(w, aw));
      path.pop_back();
      on[u] = 0;
    }
  };
  for (int s = 0; s < g.size(); ++s) {
    on[s] = 1;
    path = {s};
    dfs(s, 0);
    on[s] = 0;
  }
  return best;
}

// Same quantity by dynamic programming over node subsets (n <= 16).
inline std::optional<Weight> oracle_kpath_subset_dp(const Digraph& g, int k) {
  const int n = g.size();
  if (n > 16) throw InvalidInput("subset oracle limited to 16 nodes");
  if (k < 1) throw InvalidInput("k must be positive");
  if (k > n) return std::nullopt;
  const Weight inf = std::numeric_limits<Weight>::max();
  std::vector<Weight> dp(static_cast<std::size_t>(n) << n, inf);
  for (int v = 0; v < n; ++v) dp[(std::size_t{1} << v) * n + v] = 0;
  std::optional<Weight> best;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    int pc = std::popcount(mask);
    if (pc > k) continue;
    for (int v = 0; v < n; ++v) {
      Weight cur = dp[static_cast<std::size_t>(mask) * n + v];
      if (cur == inf) continue;
      if (pc == k) {
        if (!best || cur < *best) best = cur;
        continue;
      }
      for (auto [u, w] : g.out(v)) {
        if (mask >> u & 1) continue;
        auto& nxt = dp[static_cast<std::size_t>(mask | (1u << u)) * n + u];
        nxt = std::min(nxt, checked_add(cur, w));
      }
    }
  }
  return best;
}

struct BranchingResult {
  int internal = 0;
  int root = -1;
  std::vector<int> parent;  // -1 at the root
};

// Out-branching with the most internal nodes, by enumerating parent choices for every non-root node.
inline std::optional<BranchingResult> oracle_kiob(const Digraph& g, Budget* budget = nullptr) {
  const int n = g.size();
  std::optional<BranchingResult> best;
  for (int r = 0; r < n; ++r) {
    auto reach = g.reachable_from(r);
    if (std::count(reach.begin(), reach.end(), 1) != n) continue;
    std::vector<int> parent(n, -2);
    parent[r] = -1;
    std::vector<int> order;
    for (int v = 0; v < n; ++v)
      if (v != r) order.push_back(v);
    std::function<void(std::size_t)> assign = [&](std::size_t i) {
      if (budget) budget->charge();
      if (i == order.size()) {
        std::vector<char> is_parent(n, 0);
        for (int v = 0; v < n; ++v)
          if (parent[v] >= 0) is_parent[parent[v]] = 1;
        int internal = static_cast<int>(std::count(is_parent.begin(), is_parent.end(), 1));
        if (!best || internal > best->internal) best = BranchingResult{internal, r, parent};
        return;
      }
      int v = order[i];
      for (auto [u, w] : g.in(v)) {
        // reject a cycle through the already assigned parents
        int x = u;
        bool cycle = false;
        while (x >= 0 && parent[x] != -2) {
          if (x == v) {
            cycle = true;
            break;
          }
          x = parent[x];
        }
        if (cycle || x == v) continue;
        parent[v] = u;
        assign(i + 1);
        parent[v] = -2;
      }
    };
    assign(0);
  }
  return best;
}

// Most internal nodes of any out-tree rooted at a node that reaches every node; -1 if there is none.
// Explores (tree, internal) node-set pairs, so it is independent of the parent-choice enumeration.
inline int oracle_kiob_outtree(const Digraph& g) {
  const int n = g.size();
  if (n > 31) throw InvalidInput("out-tree oracle limited to 31 nodes");
  int best = -1;
  for (int r = 0; r < n; ++r) {
    auto reach = g.reachable_from(r);
    if (std::count(reach.begin(), reach.end(), 1) != n) continue;
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::uint64_t> stack{std::uint64_t{1} << r};
    seen.insert(stack.back());
    while (!stack.empty()) {
      std::uint64_t st = stack.back();
      stack.pop_back();
      std::uint32_t tree = static_cast<std::uint32_t>(st), internal = static_cast<std::uint32_t>(st >> 32);
      best = std::max(best, std::popcount(internal));
      for (int u = 0; u < n; ++u) {
        if (!(tree >> u & 1)) continue;
        for (auto [v, w] : g.out(u)) {
          if (tree >> v & 1) continue;
          std::uint64_t nxt = (tree | (1u << v)) | (static_cast<std::uint64_t>(internal | (1u << u)) << 32);
          if (seen.insert(nxt).second) stack.push_back(nxt);
        }
      }
    }
  }
  return best;
}

// Maximum matching size of the subgraph induced by every node mask (n <= 22).
inline std::vector<std::uint8_t> oracle_matching_table(const Graph& g) {
  const int n = g.size();
  if (n > 22) throw InvalidInput("matching oracle limited to 22 nodes");
  std::vector<std::uint8_t> m(std::size_t{1} << n, 0);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    int v = std::countr_zero(mask);
    std::uint32_t rest = mask & ~(1u << v);
    std::uint8_t best = m[rest];
    for (int u : g.neighbors(v))
      if (rest >> u & 1) best = std::max<std::uint8_t>(best, 1 + m[rest & ~(1u << u)]);
    m[mask] = best;
  }
  return m;
}

inline int oracle_matching(const Graph& g) {
  if (g.size() == 0) return 0;
  return oracle_matching_table(g).back();
}

// Out-tree rooted at r with exactly k-q internal nodes and l-q leaves, plus q node-disjoint arcs avoiding it.
inline bool oracle_tp(const Digraph& g, int r, int k, int l, int q) {
  const int n = g.size();
  if (n > 22) throw InvalidInput("tree-and-paths oracle limited to 22 nodes");
  int x = k - q, y = l - q;
  if (x < 0 || y < 0 || x + y == 0) return false;
  auto match = oracle_matching_table(underlying_graph(g));
  const std::uint32_t all = n == 32 ? ~0u : (1u << n) - 1;
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::uint64_t> stack{std::uint64_t{1} << r};
  seen.insert(stack.back());
  while (!stack.empty()) {
    std::uint64_t st = stack.back();
    stack.pop_back();
    std::uint32_t tree = static_cast<std::uint32_t>(st), internal = static_cast<std::uint32_t>(st >> 32);
    int in = std::popcount(internal), leaves = std::popcount(tree) - in;
    if (in == x && leaves == y && match[all & ~tree] >= q) return true;
    if (std::popcount(tree) >= x + y) continue;
    for (int u = 0; u < n; ++u) {
      if (!(tree >> u & 1)) continue;
      for (auto [v, w] : g.out(u)) {
        if (tree >> v & 1) continue;
        std::uint64_t nxt = (tree | (1u << v)) | (static_cast<std::uint64_t>(internal | (1u << u)) << 32);
        if (seen.insert(nxt).second) stack.push_back(nxt);
      }
    }
  }
  return false;
}

// Maximum total weight of k pairwise disjoint sets (backtracking over index-increasing choices).
inline std::optional<Weight> oracle_wsp(const WeightedSetFamily& fam, int k, Budget* budget = nullptr) {
  std::optional<Weight> best;
  const auto& sets = fam.sets();
  std::function<void(std::size_t, ElementSet, int, Weight)> go = [&](std::size_t i, ElementSet used, int cnt, Weight w) {
    if (budget) budget->charge();
    if (cnt == k) {
      if (!best || w > *best) best = w;
      return;
    }
    for (std::size_t j = i; j < sets.size(); ++j) {
      if (sets[j].members.intersects(used)) continue;
      go(j + 1, used | sets[j].members, cnt + 1, checked_add(w, sets[j].weight));
    }
  };
  go(0, {}, 0, 0);
  return best;
}

// Same quantity by memoized include/exclude recursion over (index, used elements, count).
inline std::optional<Weight> oracle_wsp_memo(const WeightedSetFamily& fam, int k) {
  const auto& sets = fam.sets();
  struct Key {
    std::size_t i;
    ElementSet used;
    int cnt;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& x) const { return x.used.hash() ^ (x.i * 1315423911u) ^ (x.cnt * 2654435761u); }
  };
  std::unordered_map<Key, std::optional<Weight>, KeyHash> memo;
  std::function<std::optional<Weight>(std::size_t, ElementSet, int)> go = [&](std::size_t i, ElementSet used,
                                                                              int cnt) -> std::optional<Weight> {
    if (cnt == k) return Weight{0};
    if (i == sets.size()) return std::nullopt;
    Key key{i, used, cnt};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::optional<Weight> best = go(i + 1, used, cnt);
    if (!sets[i].members.intersects(used)) {
      auto sub = go(i + 1, used | sets[i].members, cnt + 1);
      if (sub) {
        Weight w = checked_add(*sub, sets[i].weight);
        if (!best || w > *best) best = w;
      }
    }
    memo.emplace(key, best);
    return best;
  };
  return go(0, {}, 0);
}

namespace oracle_detail {

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

// Calls f(chosen) for every choice of `count` pairwise disjoint sets avoiding `avoid`, indices increasing.
template <class F>
void disjoint_choices(const std::vector<ElementSet>& sets, int count, ElementSet avoid, Budget* budget, F&& f) {
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t, ElementSet)> go = [&](std::size_t i, ElementSet used) {
    if (budget) budget->charge();
    if (static_cast<int>(chosen.size()) == count) {
      f(chosen);
      return;
    }
    for (std::size_t j = i; j < sets.size(); ++j) {
      if (sets[j].intersects(used)) continue;
      chosen.push_back(j);
      go(j + 1, used | sets[j]);
      chosen.pop_back();
    }
  };
  go(0, avoid);
}

}  // namespace oracle_detail

// Deletion schedule R(0..inv_eps) for the cut-constrained packing.
inline std::vector<int> oracle_cwsp_schedule(int k, int inv_eps) {
  int P = k / inv_eps;
  if (P < 1) throw InvalidInput("floor(eps k) must be at least 1");
  std::vector<int> R(inv_eps + 1, 0);
  for (int j = 2; j <= inv_eps; ++j) {
    std::int64_t den = oracle_detail::ceil_div(3LL * (k - (j - 1) * P), P);
    R[j] = R[j - 1] + static_cast<int>(oracle_detail::ceil_div(2LL * (j - 1) * P - R[j - 1], den));
  }
  return R;
}

// Maximum weight of an ordered k-packing meeting the cut conditions; nothing if none exists.
inline std::optional<Weight> oracle_cwsp(const CwspInstance& inst, Budget* budget = nullptr) {
  const int E = inst.inv_eps, k = inst.k, P = k / E;
  auto R = oracle_cwsp_schedule(k, E);
  std::vector<ElementSet> sets;
  for (const auto& s : inst.family.sets()) sets.push_back(s.members);
  std::optional<Weight> best;
  oracle_detail::disjoint_choices(sets, k, {}, budget, [&](const std::vector<std::size_t>& chosen) {
    std::vector<std::size_t> ord = chosen;
    std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return sets[a].min() < sets[b].min(); });
    for (int i = 1; i <= E; ++i) {
      int fi = inst.f[i - 1];
      int cnt = 0;
      for (int j = 0; j < i * P; ++j) {
        ElementSet s = sets[ord[j]].without(sets[ord[j]].min());
        s.for_each([&](int e) { cnt += e <= fi; });
      }
      if (cnt < R[i]) return;
      for (int j = i * P; j < k; ++j)
        if (sets[ord[j]].min() <= fi) return;
    }
    Weight w = 0;
    for (auto j : ord) w = checked_add(w, inst.family[j].weight);
    if (!best || w > *best) best = w;
  });
  return best;
}

// Deletion schedule R(0..inv_eps) for the packing that also avoids a base set.
inline std::vector<int> oracle_pro2_schedule(int base_size, int count, int inv_eps) {
  int P = count / inv_eps;
  if (P < 1) throw InvalidInput("floor(eps count) must be at least 1");
  std::vector<int> R(inv_eps + 1, 0);
  for (int j = 1; j <= inv_eps; ++j) {
    std::int64_t den = oracle_detail::ceil_div(3LL * (count - (j - 1) * P), P);
    R[j] = R[j - 1] + static_cast<int>(oracle_detail::ceil_div(base_size + 2LL * (j - 1) * P - R[j - 1], den));
  }
  return R;
}

// Some base member plus `count` disjoint sets avoiding it; with_cut also enforces the cut conditions.
inline bool oracle_pro2(const Pro2Instance& inst, bool with_cut, Budget* budget = nullptr) {
  if (inst.count == 0) return !inst.base.empty();
  const int E = inst.inv_eps, P = inst.count / std::max(E, 1);
  std::vector<int> R;
  if (with_cut) R = oracle_pro2_schedule(inst.base_size, inst.count, E);
  for (const auto& F : inst.base) {
    bool found = false;
    oracle_detail::disjoint_choices(inst.sets, inst.count, F, budget, [&](const std::vector<std::size_t>& chosen) {
      if (found) return;
      if (with_cut) {
        std::vector<std::size_t> ord = chosen;
        std::sort(ord.begin(), ord.end(),
                  [&](std::size_t a, std::size_t b) { return inst.sets[a].min() < inst.sets[b].min(); });
        for (int i = 1; i <= E; ++i) {
          int fi = inst.f[i - 1];
          ElementSet pool = F;
          for (int j = 0; j < i * P; ++j) pool |= inst.sets[ord[j]].without(inst.sets[ord[j]].min());
          int cnt = 0;
          pool.for_each([&](int e) { cnt += e <= fi; });
          if (cnt < R[i]) return;
          for (int j = i * P; j < inst.count; ++j)
            if (inst.sets[ord[j]].min() <= fi) return;
        }
      }
      found = true;
    });
    if (found) return true;
  }
  return false;
}

// All node triples that span a path on three nodes.
inline std::vector<ElementSet> oracle_p2_triples(const Graph& g) {
  std::vector<ElementSet> out;
  const int n = g.size();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        int e = g.has_edge(a, b) + g.has_edge(a, c) + g.has_edge(b, c);
        if (e >= 2) out.push_back(ElementSet{a, b, c});
      }
  return out;
}

// Largest number of node-disjoint paths on three nodes (subset dynamic programming, n <= 20).
inline int oracle_p2p(const Graph& g) {
  const int n = g.size();
  if (n > 20) throw InvalidInput("packing oracle limited to 20 nodes");
  auto triples = oracle_p2_triples(g);
  std::vector<std::vector<std::uint32_t>> by_low(n);
  for (const auto& t : triples) by_low[t.min()].push_back(static_cast<std::uint32_t>(t.word(0)));
  std::vector<std::int8_t> best(std::size_t{1} << n, 0);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    int v = std::countr_zero(mask);
    std::int8_t b = best[mask & ~(1u << v)];
    for (std::uint32_t t : by_low[v])
      if ((t & mask) == t) b = std::max<std::int8_t>(b, 1 + best[mask & ~t]);
    best[mask] = b;
  }
  return n == 0 ? 0 : best[(1u << n) - 1];
}

// Whether k node-disjoint paths on three nodes exist (backtracking over triples).
inline bool oracle_p2p_search(const Graph& g, int k, Budget* budget = nullptr) {
  auto triples = oracle_p2_triples(g);
  bool found = false;
  oracle_detail::disjoint_choices(triples, k, {}, budget, [&](const auto&) { found = true; });
  return found;
}

// Minimum weight of a solution to the piece-constrained path instance; nothing if none exists.
inline std::optional<Weight> oracle_kcwp(const KcwpInstance& in, Budget* budget = nullptr) {
  const int E = in.inv_eps;
  const int m = (E - 1) / 2;
  const int mt = static_cast<int>(floor_product(in.delta, Rational{E - 1, 1}, 1));
  const int kt = in.k - 1;
  const int P = kt / E;
  const int mid = in.k - 2 * m * P - 2;
  const int k1 = static_cast<int>(floor_product(Rational{in.delta.den + 2 * in.delta.num, 2 * in.delta.den}, in.gamma, in.k));
  const int k2 = static_cast<int>(floor_product(Rational{in.delta.den - 2 * in.delta.num, 2 * in.delta.den}, in.gamma, in.k));
  const int k3 = kt - E - k1 - k2;
  if (k3 < 0 || mid < 0 || P < 1) return std::nullopt;

  ElementSet img;
  for (int v : in.l1) img.insert(v);
  for (int v : in.l2) img.insert(v);
  for (int v : in.r1) img.insert(v);
  for (int v : in.r2) img.insert(v);
  img.insert(in.vl);
  img.insert(in.vr);

  struct Piece {
    int from, to, internal;
    int kind;  // 0 L-side, 1 middle, 2 R-side
  };
  std::vector<Piece> pieces;
  for (int i = 0; i < m + mt; ++i) pieces.push_back({in.l1[i], in.l2[i], P - 1, 0});
  pieces.push_back({in.vl, in.vr, mid, 1});
  for (int i = 0; i < m - mt; ++i) pieces.push_back({in.r1[i], in.r2[i], P - 1, 2});

  std::optional<Weight> best;
  ElementSet used;
  // per-piece L and R counts
  std::vector<int> lc(pieces.size(), 0), rc(pieces.size(), 0);

  std::function<void(std::size_t, Weight)> next_piece;
  std::function<void(std::size_t, int, int, Weight)> extend = [&](std::size_t pi, int v, int depth, Weight w) {
    if (budget) budget->charge();
    const Piece& pc = pieces[pi];
    if (depth == pc.internal) {
      auto aw = in.graph.arc_weight(v, pc.to);
      if (aw) next_piece(pi + 1, checked_add(w, *aw));
      return;
    }
    for (auto [u, aw] : in.graph.out(v)) {
      if (img.contains(u) || used.contains(u)) continue;
      if (pc.kind == 0 && in.R.contains(u)) continue;
      if (pc.kind == 2 && in.L.contains(u)) continue;
      used.insert(u);
      lc[pi] += in.L.contains(u);
      rc[pi] += in.R.contains(u);
      extend(pi, u, depth + 1, checked_add(w, aw));
      lc[pi] -= in.L.contains(u);
      rc[pi] -= in.R.contains(u);
      used.erase(u);
    }
  };
  next_piece = [&](std::size_t pi, Weight w) {
    if (pi > 0) {
      // conditions on the piece just finished
      std::size_t done = pi - 1;
      if (pieces[done].kind == 0) {
        int i = static_cast<int>(done) + 1;
        int cum = 0;
        for (std::size_t j = 0; j <= done; ++j) cum += lc[j];
        if (static_cast<std::int64_t>(cum) * (m + mt) < static_cast<std::int64_t>(i) * (k1 - mid)) return;
      }
      if (pieces[done].kind == 2) {
        int i = static_cast<int>(done) - (m + mt);
        int cum = 0;
        for (std::size_t j = m + mt; j <= done; ++j) cum += rc[j];
        if (static_cast<std::int64_t>(cum) * (m - mt) >
            static_cast<std::int64_t>(i) * (k2 - mid) + static_cast<std::int64_t>(mid) * (m - mt))
          return;
      }
    }
    if (pi == pieces.size()) {
      int lt = 0, rt = 0;
      for (std::size_t j = 0; j < pieces.size(); ++j) {
        lt += lc[j];
        rt += rc[j];
      }
      if (lt == k1 && rt == k2 && (!best || w < *best)) best = w;
      return;
    }
    const Piece& pc = pieces[pi];
    if (pc.internal == 0) {
      auto aw = in.graph.arc_weight(pc.from, pc.to);
      if (aw) next_piece(pi + 1, checked_add(w, *aw));
      return;
    }
    extend(pi, pc.from, 0, w);
  };
  next_piece(0, 0);
  return best;
}

}  // namespace fptmix
