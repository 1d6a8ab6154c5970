#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "core.hpp"
#include "matching.hpp"
#include "repsets.hpp"

namespace fptmix {

struct KiobOptions {
  double c = 1.497;
  bool reduce = true;
  Budget* budget = nullptr;
};

// Node-sets of out-trees rooted at `root` with x internal nodes and y leaves (a z-representing subfamily).
struct TreeFamilyEntry {
  int root = -1;
  int x = 0;
  int y = 0;
  std::vector<ElementSet> sets;
};

namespace detail {

// Out-trees rooted at every node, built child by child.
//   F(v,0,1)      = {{v}}
//   OC(v,x,y)     = {{v} u A : (v,u) arc, A in F(u,x-1,y), v not in A}
//   F(v,x,y)      = OC(v,x,y) u {A u B : A in OC(v,x1,y1), B in F(v,x2,y2), A n B = {v}, x1+x2 = x+1, y1+y2 = y}
// Every family is reduced to one that represents it with slack (xt-x)+(yt-y)+z.
class TreeFamilyTable {
 public:
  struct Item {
    ElementSet set;
    int kind = 0;  // 0 single node, 1 one child, 2 merge
    int u = -1;    // child (kind 1)
    int x1 = 0, y1 = 0;
    std::size_t a = 0, b = 0;
  };

  TreeFamilyTable(const Digraph& g, int xt, int yt, int z, const KiobOptions& opt)
      : g_(g), n_(g.size()), xt_(xt), yt_(yt), z_(z), opt_(opt) {
    full_ = std::vector<std::vector<Item>>(static_cast<std::size_t>(n_) * (xt + 1) * (yt + 1));
    one_ = full_;
    for (int size = 1; size <= xt + yt; ++size)
      for (int x = 0; x <= std::min(size, xt); ++x) {
        int y = size - x;
        if (y < 1 || y > yt) continue;
        for (int v = 0; v < n_; ++v) compute(v, x, y);
      }
  }

  const std::vector<Item>& family(int v, int x, int y) const { return full_[idx(v, x, y)]; }

  // Arcs of the out-tree behind family(v,x,y)[i].
  void edges(int v, int x, int y, std::size_t i, std::vector<std::pair<int, int>>& out) const {
    collect(full_[idx(v, x, y)][i], v, x, y, out);
  }

 private:
  std::size_t idx(int v, int x, int y) const {
    return (static_cast<std::size_t>(v) * (xt_ + 1) + x) * (yt_ + 1) + y;
  }

  void collect(const Item& it, int v, int x, int y, std::vector<std::pair<int, int>>& out) const {
    if (it.kind == 0) return;
    if (it.kind == 1) {
      out.emplace_back(v, it.u);
      collect(full_[idx(it.u, x - 1, y)][it.a], it.u, x - 1, y, out);
      return;
    }
    collect(one_[idx(v, it.x1, it.y1)][it.a], v, it.x1, it.y1, out);
    collect(full_[idx(v, x + 1 - it.x1, y - it.y1)][it.b], v, x + 1 - it.x1, y - it.y1, out);
  }

  void reduce(std::vector<Item>& items, int x, int y) {
    if (!opt_.reduce || items.size() <= 1) return;
    std::vector<ElementSet> sets;
    for (const auto& it : items) sets.push_back(it.set);
    std::vector<Weight> w(items.size(), 0);
    int target = std::min(n_, xt_ + yt_ + z_);
    RepPart part{ElementSet::range(n_), std::max(target, x + y), x + y, opt_.c < 1.0 ? 1.0 : opt_.c};
    std::vector<Item> kept;
    for (std::size_t i : gen_rep_select(sets, w, {part}, Objective::min)) kept.push_back(items[i]);
    items.swap(kept);
  }

  void compute(int v, int x, int y) {
    auto charge = [&]() {
      if (opt_.budget) opt_.budget->charge();
    };
    if (x == 0) {
      if (y == 1) full_[idx(v, 0, 1)].push_back(Item{ElementSet{v}, 0});
      return;
    }
    std::unordered_set<ElementSet, ElementSetHash> seen;
    std::vector<Item> oc;
    for (auto [u, w] : g_.out(v)) {
      const auto& sub = full_[idx(u, x - 1, y)];
      for (std::size_t i = 0; i < sub.size(); ++i) {
        charge();
        if (sub[i].set.contains(v)) continue;
        ElementSet s = sub[i].set.with(v);
        if (seen.insert(s).second) oc.push_back(Item{s, 1, u, 0, 0, i, 0});
      }
    }
    reduce(oc, x, y);
    one_[idx(v, x, y)] = oc;

    std::vector<Item> all = oc;
    seen.clear();
    for (const auto& it : all) seen.insert(it.set);
    for (int x1 = 1; x1 <= x; ++x1) {
      int x2 = x + 1 - x1;
      if (x2 < 1 || x2 > xt_) continue;
      for (int y1 = 1; y1 < y; ++y1) {
        int y2 = y - y1;
        const auto& as = one_[idx(v, x1, y1)];
        const auto& bs = full_[idx(v, x2, y2)];
        for (std::size_t a = 0; a < as.size(); ++a)
          for (std::size_t b = 0; b < bs.size(); ++b) {
            charge();
            if ((as[a].set & bs[b].set) != ElementSet{v}) continue;
            ElementSet s = as[a].set | bs[b].set;
            if (seen.insert(s).second) all.push_back(Item{s, 2, -1, x1, y1, a, b});
          }
      }
    }
    reduce(all, x, y);
    full_[idx(v, x, y)] = std::move(all);
  }

  const Digraph& g_;
  int n_, xt_, yt_, z_;
  KiobOptions opt_;
  std::vector<std::vector<Item>> full_;
  std::vector<std::vector<Item>> one_;
};

}  // namespace detail

inline TreeFamilyEntry tree_families(const Digraph& g, int r, int x, int y, int z, const KiobOptions& opt = {}) {
  if (r < 0 || r >= g.size()) throw InvalidInput("root out of range");
  if (x < 0 || y < 0 || z < 0) throw InvalidInput("tree family parameters must be non-negative");
  if (!(x >= 1 || (x == 0 && y == 1))) throw InvalidInput("need x >= 1 or (x, y) = (0, 1)");
  TreeFamilyEntry out{r, x, y, {}};
  if (x + y > g.size()) return out;
  detail::TreeFamilyTable table(g, x, y, z, opt);
  for (const auto& it : table.family(r, x, y)) out.sets.push_back(it.set);
  return out;
}

struct TpResult {
  bool accept = false;
  ElementSet tree;
  std::vector<std::pair<int, int>> tree_arcs;  // (parent, child)
  std::vector<std::pair<int, int>> paths;      // q arcs (tail, head) avoiding the tree
  std::size_t family_size = 0;
};

// Out-tree rooted at r with k-q internal nodes and l-q leaves, plus q disjoint arcs outside it.
inline TpResult tp_alg(const Digraph& g, int r, int k, int l, int q, const KiobOptions& opt = {}) {
  if (l > k) throw InvalidInput("tree-and-paths needs l <= k");
  if (q < std::max(0, 2 * l - k)) throw InvalidInput("tree-and-paths needs q >= max(0, 2l - k)");
  if (r < 0 || r >= g.size()) throw InvalidInput("root out of range");
  TpResult res;
  int x = k - q, y = l - q;
  if (y < 0 || x < 0 || x + y == 0 || (x == 0 && y != 1)) return res;
  if (x + y + 2 * q > g.size()) return res;
  detail::TreeFamilyTable table(g, x, y, 2 * q, opt);
  const auto& fam = table.family(r, x, y);
  res.family_size = fam.size();
  Graph und = underlying_graph(g);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    std::vector<char> removed(g.size(), 0);
    fam[i].set.for_each([&](int v) { removed[v] = 1; });
    auto m = max_matching(und.without(removed));
    if (opt.budget) opt.budget->charge(static_cast<std::uint64_t>(g.size()) * g.size());
    if (static_cast<int>(m.size()) < q) continue;
    res.accept = true;
    res.tree = fam[i].set;
    table.edges(r, x, y, i, res.tree_arcs);
    for (int j = 0; j < q; ++j) {
      auto [a, b] = m[j];
      res.paths.emplace_back(g.has_arc(a, b) ? std::make_pair(a, b) : std::make_pair(b, a));
    }
    return res;
  }
  return res;
}

struct Branching {
  int root = -1;
  std::vector<int> parent;  // -1 at the root
};

inline int internal_count(const Branching& b) {
  std::vector<char> is_parent(b.parent.size(), 0);
  for (int p : b.parent)
    if (p >= 0) is_parent[p] = 1;
  return static_cast<int>(std::count(is_parent.begin(), is_parent.end(), 1));
}

// Describes why b is not a spanning out-tree of g rooted at b.root, or nothing.
inline std::optional<std::string> check_branching(const Digraph& g, const Branching& b) {
  const int n = g.size();
  if (static_cast<int>(b.parent.size()) != n) return "parent vector has wrong length";
  if (b.root < 0 || b.root >= n || b.parent[b.root] != -1) return "root is not marked";
  for (int v = 0; v < n; ++v) {
    if (v == b.root) continue;
    if (b.parent[v] < 0 || b.parent[v] >= n) return "node " + std::to_string(v) + " has no parent";
    if (!g.has_arc(b.parent[v], v)) return "missing arc into node " + std::to_string(v);
    int x = v, steps = 0;
    while (x != b.root) {
      x = b.parent[x];
      if (++steps > n) return "cycle through node " + std::to_string(v);
    }
  }
  return std::nullopt;
}

namespace detail {

inline bool is_descendant(const std::vector<int>& parent, int x, int anc) {
  int steps = 0;
  while (x >= 0 && steps++ <= static_cast<int>(parent.size())) {
    if (x == anc) return true;
    x = parent[x];
  }
  return false;
}

// Extends the tree arcs to a spanning out-tree. The order of the frontier depends on variant.
inline std::vector<int> grow_branching(const Digraph& g, int r, const std::vector<std::pair<int, int>>& tree_arcs,
                                       const std::vector<std::pair<int, int>>& paths, int variant) {
  const int n = g.size();
  std::vector<int> parent(n, -2);
  parent[r] = -1;
  for (auto [p, c] : tree_arcs) parent[c] = p;
  std::vector<char> tail(n, 0);
  for (auto [v, u] : paths) tail[v] = 1;
  while (true) {
    int best_p = -1, best_c = -1, best_rank = -1;
    for (int p = 0; p < n; ++p) {
      if (parent[p] == -2) continue;
      for (auto [c, w] : g.out(p)) {
        if (parent[c] != -2) continue;
        // variant 0: prefer reaching path tails; variant 1: prefer extending leaves (deep growth)
        int rank = 0;
        if (variant == 0) rank = tail[c] ? 2 : 1;
        if (variant == 1) {
          bool leaf = std::find(parent.begin(), parent.end(), p) == parent.end();
          rank = leaf ? 2 : 1;
        }
        if (variant >= 2) rank = (p * 31 + c * 17 + variant) % 7;
        if (rank > best_rank) {
          best_rank = rank;
          best_p = p;
          best_c = c;
        }
      }
    }
    if (best_c < 0) break;
    parent[best_c] = best_p;
  }
  return parent;
}

}  // namespace detail

// Spanning out-branching rooted at r with at least k internal nodes, obtained from a tree-and-paths
// witness by extending the tree and then re-hanging path heads below path tails.
inline Branching extract_branching(const Digraph& g, int r, int k, const std::vector<std::pair<int, int>>& tree_arcs,
                                   const std::vector<std::pair<int, int>>& paths) {
  const int n = g.size();
  auto reach = g.reachable_from(r);
  if (std::count(reach.begin(), reach.end(), 1) != n) throw InvalidInput("root does not reach every node");
  for (int variant = 0; variant < 8; ++variant) {
    Branching b{r, detail::grow_branching(g, r, tree_arcs, paths, variant)};
    std::vector<char> contained(paths.size(), 0);
    while (internal_count(b) < k) {
      std::vector<int> children(n, 0);
      for (int v = 0; v < n; ++v)
        if (b.parent[v] >= 0) ++children[b.parent[v]];
      int pick = -1;
      // exchange with both ends leaves first, then any head that does not dominate its tail
      for (int pass = 0; pass < 2 && pick < 0; ++pass)
        for (std::size_t i = 0; i < paths.size(); ++i) {
          auto [v, u] = paths[i];
          if (b.parent[u] == v || children[v] > 0) continue;
          if (pass == 0 && children[u] > 0) continue;
          if (pass == 1 && detail::is_descendant(b.parent, v, u)) continue;
          pick = static_cast<int>(i);
          break;
        }
      if (pick < 0) break;
      auto [v, u] = paths[pick];
      b.parent[u] = v;
      contained[pick] = 1;
    }
    if (internal_count(b) >= k) return b;
  }
  throw std::logic_error("branching exchange exhausted before reaching k internal nodes");
}

struct KiobResult {
  bool accept = false;
  Branching branching;
  int internal = 0;
  int leaves_param = 0;
  int paths_param = 0;
  std::size_t peak_family = 0;
};

// Out-branching with at least k internal nodes, via tree-and-paths over every root, l and q.
inline KiobResult solve_kiob(const Digraph& g, int k, const KiobOptions& opt = {}) {
  if (k < 1) throw InvalidInput("k must be positive");
  KiobResult res;
  const int n = g.size();
  if (k >= n) return res;
  for (int r = 0; r < n; ++r) {
    auto reach = g.reachable_from(r);
    if (std::count(reach.begin(), reach.end(), 1) != n) continue;
    if (k == 1) {
      // the only tree-and-paths shape is an empty tree; the root alone is internal
      res.accept = true;
      res.branching = extract_branching(g, r, k, {}, {});
      res.internal = internal_count(res.branching);
      res.leaves_param = 1;
      res.paths_param = 0;
      return res;
    }
    for (int l = 1; l <= k; ++l)
      for (int q = std::max(0, 2 * l - k); q <= l; ++q) {
        auto tp = tp_alg(g, r, k, l, q, opt);
        res.peak_family = std::max(res.peak_family, tp.family_size);
        if (!tp.accept) continue;
        res.accept = true;
        res.branching = extract_branching(g, r, k, tp.tree_arcs, tp.paths);
        res.internal = internal_count(res.branching);
        res.leaves_param = l;
        res.paths_param = q;
        return res;
      }
  }
  return res;
}

}  // namespace fptmix
