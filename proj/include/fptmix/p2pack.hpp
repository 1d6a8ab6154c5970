#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "core.hpp"
#include "instances.hpp"
#include "repsets.hpp"
#include "wsp.hpp"

namespace fptmix {

using P2Path = std::array<int, 3>;  // end, center, end

// The path a - b - c on the three nodes, if the graph spans one.
inline std::optional<P2Path> p2_path_on(const Graph& g, const ElementSet& nodes) {
  if (nodes.size() != 3) return std::nullopt;
  auto v = nodes.members();
  for (int c = 0; c < 3; ++c) {
    int a = v[(c + 1) % 3], b = v[(c + 2) % 3];
    if (g.has_edge(v[c], a) && g.has_edge(v[c], b)) return P2Path{std::min(a, b), v[c], std::max(a, b)};
  }
  return std::nullopt;
}

// First structural problem of a packing, or nothing.
inline std::optional<std::string> check_packing(const Graph& g, const std::vector<P2Path>& packing) {
  ElementSet used;
  for (const auto& p : packing) {
    for (int v : p) {
      if (v < 0 || v >= g.size()) return std::string("node outside the graph");
      if (used.contains(v)) return "node " + std::to_string(v) + " used twice";
      used.insert(v);
    }
    if (!g.has_edge(p[0], p[1]) || !g.has_edge(p[1], p[2])) return std::string("missing path edge");
  }
  return std::nullopt;
}

struct IcpInstance {
  Graph graph;
  int k = 0;
  std::vector<P2Path> previous;  // a (k - 1)-packing
};

// Candidate X-parts with, for each, the paths through Y that realize it.
struct Pro1Family {
  std::vector<ElementSet> sets;
  std::vector<std::vector<P2Path>> paths;
};

struct P2Options {
  int inv_eps = 2;
  double c = 1.0;
  bool reduce = true;
  std::uint64_t budget = Budget::default_limit;
};

inline ElementSet packing_nodes(const std::vector<P2Path>& packing) {
  ElementSet x;
  for (const auto& p : packing)
    for (int v : p) x.insert(v);
  return x;
}

// Largest p allowed for a t-packing against a (t - 1)-packing.
inline int icp_max_p(int t) { return 3 * t - (5 * (t - 1) + 1) / 2; }

// The table M[p', q', m, X'] over the nodes outside the previous packing; returns every X' of size
// 3q - p that q paths with p nodes outside X can occupy.
inline Pro1Family icp_pro1(const IcpInstance& in, int p, int q, double c = 1.0, bool reduce = true,
                           Budget* budget = nullptr) {
  if (auto bad = check_packing(in.graph, in.previous)) throw InvalidInput("previous packing: " + *bad);
  if (static_cast<int>(in.previous.size()) != in.k - 1) throw InvalidInput("previous packing must have k - 1 paths");
  if (p < 3 || p > icp_max_p(in.k)) throw InvalidInput("p out of range");
  if (q < (p + 2) / 3 || q > std::min(p, in.k)) throw InvalidInput("q out of range");
  const Graph& g = in.graph;
  const int n = g.size();
  const ElementSet X = packing_nodes(in.previous);
  const ElementSet Y = ElementSet::range(n) - X;

  struct Triple {
    ElementSet y, x;
    P2Path path;
  };
  std::vector<Triple> triples;
  for_each_subset(ElementSet::range(n), 3, [&](const ElementSet& t) {
    if (!t.intersects(Y)) return;
    if (auto path = p2_path_on(g, t)) triples.push_back({t & Y, t & X, *path});
  });

  struct Item {
    ElementSet set;
    int pred_entry, pred_item, triple;
  };
  struct Entry {
    int p, q, m;
    ElementSet xs;
    std::vector<Item> items;
  };
  std::vector<Entry> entries;
  auto feasible = [&](int pp, int qq) { return pp <= p && qq <= q && p - pp >= q - qq && p - pp <= 3 * (q - qq); };

  using Key = std::tuple<int, int, ElementSet>;  // p', m, X'
  auto commit = [&](std::map<Key, std::vector<Item>>& groups, int qq) {
    std::vector<int> layer;
    for (auto& [key, items] : groups) {
      auto [pp, m, xs] = key;
      std::unordered_map<ElementSet, std::size_t, ElementSetHash> pos;
      std::vector<Item> uniq;
      for (auto& it : items)
        if (pos.emplace(it.set, uniq.size()).second) uniq.push_back(it);
      if (reduce && uniq.size() > 1) {
        const int sz = pp - qq;
        std::vector<ElementSet> sets;
        for (const auto& it : uniq) sets.push_back(it.set);
        RepPart part{Y, std::min(Y.size(), sz + (p - pp)), sz, c};
        std::vector<Item> kept;
        for (std::size_t t : gen_rep_select(sets, std::vector<Weight>(sets.size(), 0), {part}, Objective::max))
          kept.push_back(uniq[t]);
        uniq.swap(kept);
      }
      layer.push_back(static_cast<int>(entries.size()));
      entries.push_back(Entry{pp, qq, m, xs, std::move(uniq)});
    }
    return layer;
  };

  std::map<Key, std::vector<Item>> groups;
  for (std::size_t t = 0; t < triples.size(); ++t) {
    const auto& tr = triples[t];
    const int pp = tr.y.size();
    if (!feasible(pp, 1)) continue;
    groups[{pp, tr.y.min(), tr.x}].push_back(Item{tr.y.without(tr.y.min()), -1, -1, static_cast<int>(t)});
  }
  std::vector<int> layer = commit(groups, 1);
  for (int qq = 2; qq <= q; ++qq) {
    groups.clear();
    for (int id : layer) {
      const Entry& e = entries[id];
      for (std::size_t t = 0; t < triples.size(); ++t) {
        const auto& tr = triples[t];
        const int m = tr.y.min();
        const int pp = e.p + tr.y.size();
        if (m <= e.m || tr.x.intersects(e.xs) || !feasible(pp, qq)) continue;
        for (std::size_t a = 0; a < e.items.size(); ++a) {
          if (budget) budget->charge();
          if (e.items[a].set.intersects(tr.y)) continue;
          groups[{pp, m, e.xs | tr.x}].push_back(
              Item{e.items[a].set | tr.y.without(m), id, static_cast<int>(a), static_cast<int>(t)});
        }
      }
    }
    layer = commit(groups, qq);
  }

  Pro1Family out;
  std::unordered_map<ElementSet, bool, ElementSetHash> seen;
  for (int id : layer) {
    const Entry& e = entries[id];
    if (e.p != p || e.q != q || e.items.empty() || !seen.emplace(e.xs, true).second) continue;
    std::vector<P2Path> paths;
    for (int eid = id, it = 0; eid >= 0;) {
      const Item& item = entries[eid].items[it];
      paths.push_back(triples[item.triple].path);
      eid = item.pred_entry;
      it = item.pred_item;
    }
    out.sets.push_back(e.xs);
    out.paths.push_back(std::move(paths));
  }
  return out;
}

// R(0..1/eps) when the base set of size base_size is counted from the start.
inline std::vector<int> pro2_schedule(int base_size, int count, int inv_eps) {
  if (inv_eps < 1) throw InvalidInput("1/eps must be positive");
  const int P = count / inv_eps;
  if (P < 1) throw InvalidInput("floor(eps (k - q)) must be at least 1");
  std::vector<int> R(inv_eps + 1, 0);
  for (int j = 1; j <= inv_eps; ++j) {
    std::int64_t den = detail::ceil_div_pos(3LL * (count - (j - 1) * P), P);
    R[j] = R[j - 1] + static_cast<int>(detail::ceil_div_pos(base_size + 2LL * (j - 1) * P - R[j - 1], den));
  }
  return R;
}

inline std::optional<std::string> validate_pro2(const Pro2Instance& in, bool with_cut) {
  if (in.universe_size < 0 || in.universe_size > ElementSet::capacity) return "bad universe size";
  const ElementSet all = ElementSet::range(in.universe_size);
  for (const auto& s : in.sets)
    if (s.size() != 3 || !s.subset_of(all)) return "every set must be a 3-subset of the universe";
  for (const auto& b : in.base)
    if (b.size() != in.base_size || !b.subset_of(all)) return "every base member must have base_size elements";
  if (in.count < 0) return "count must be non-negative";
  if (!with_cut) return std::nullopt;
  if (in.inv_eps < 1) return "1/eps must be positive";
  if (in.count > 0 && in.count / in.inv_eps < 1) return "floor(eps count) must be at least 1";
  if (static_cast<int>(in.f.size()) != in.inv_eps) return "f must have 1/eps values";
  for (std::size_t i = 0; i < in.f.size(); ++i) {
    if (in.f[i] < 0 || in.f[i] >= std::max(1, in.universe_size)) return "f maps outside the universe";
    if (i > 0 && in.f[i] < in.f[i - 1]) return "f is not non-decreasing";
  }
  return std::nullopt;
}

struct Pro2Result {
  Verdict verdict = Verdict::reject;
  int base_index = -1;
  std::vector<std::size_t> order;  // indices into sets
};

// Boolean tables M[i, j, s_1..s_{1/eps}, m, U'] with the explicit leftover set U'; the stage
// boundaries drop every element up to f(i).
inline Pro2Result solve_cpro2(const Pro2Instance& in, Budget* budget = nullptr) {
  if (auto bad = validate_pro2(in, true)) throw InvalidInput("invalid cut instance: " + *bad);
  Pro2Result res;
  if (in.count == 0) {
    if (!in.base.empty()) {
      res.verdict = Verdict::accept;
      res.base_index = 0;
    }
    return res;
  }
  const int E = in.inv_eps, K = in.count, P = K / E;
  const auto R = pro2_schedule(in.base_size, K, E);
  auto stage = [&](int j) { return std::min(E + 1, (j - 1) / P + 1); };
  auto f_at = [&](int i) { return i == 0 ? -1 : in.f[i - 1]; };
  auto counts = [&](const ElementSet& rest, std::vector<int>& s) {
    for (int l = 1; l <= E; ++l) rest.for_each([&](int e) { s[l - 1] += e <= in.f[l - 1]; });
  };

  struct State {
    int m;
    std::vector<int> s;
    ElementSet left;
    int pred;
    int base;
    std::size_t added;
  };
  std::vector<State> states;
  using Key = std::tuple<int, std::vector<int>, ElementSet>;
  std::vector<int> layer;
  {
    std::map<Key, int> seen;
    for (std::size_t b = 0; b < in.base.size(); ++b)
      for (std::size_t t = 0; t < in.sets.size(); ++t) {
        if (budget) budget->charge();
        const ElementSet& S = in.sets[t];
        if (S.intersects(in.base[b])) continue;
        ElementSet left = in.base[b] | S.without(S.min());
        std::vector<int> s(E, 0);
        counts(left, s);
        if (seen.emplace(Key{S.min(), s, left}, 0).second) {
          layer.push_back(static_cast<int>(states.size()));
          states.push_back(State{S.min(), s, left, -1, static_cast<int>(b), t});
        }
      }
  }
  for (int j = 2; j <= K; ++j) {
    const int i = stage(j);
    const bool opens = stage(j - 1) != i;
    const int fprev = f_at(i - 1);
    std::map<Key, int> seen;
    std::vector<int> next;
    for (int id : layer)
      for (std::size_t t = 0; t < in.sets.size(); ++t) {
        if (budget) budget->charge();
        const State st = states[id];
        const ElementSet& S = in.sets[t];
        const int mn = S.min();
        if (mn <= st.m || mn <= fprev || S.intersects(st.left)) continue;
        ElementSet rest = S.without(mn);
        std::vector<int> s = st.s;
        counts(rest, s);
        if (opens) {
          bool ok = true;
          for (int l = 1; l < i && ok; ++l) ok = s[l - 1] >= R[l];
          if (!ok) continue;
        }
        ElementSet left = (st.left | rest) - ElementSet::range(fprev + 1);
        if (seen.emplace(Key{mn, s, left}, 0).second) {
          next.push_back(static_cast<int>(states.size()));
          states.push_back(State{mn, s, left, id, st.base, t});
        }
      }
    layer.swap(next);
  }
  for (int id : layer) {
    bool ok = true;
    for (int l = 1; l <= E && ok; ++l) ok = states[id].s[l - 1] >= R[l];
    if (!ok) continue;
    res.verdict = Verdict::accept;
    for (int x = id; x >= 0; x = states[x].pred) {
      res.order.push_back(states[x].added);
      res.base_index = states[x].base;
    }
    std::reverse(res.order.begin(), res.order.end());
    return res;
  }
  return res;
}

// Some base member plus `count` disjoint sets avoiding it, by unbalanced cuts of the universe.
inline Pro2Result procedure2(const Pro2Instance& in, int inv_eps, std::uint64_t budget_limit = Budget::default_limit) {
  if (auto bad = validate_pro2(in, false)) throw InvalidInput("invalid instance: " + *bad);
  Pro2Result res;
  if (in.count == 0 || in.base.empty()) {
    if (!in.base.empty()) {
      res.verdict = Verdict::accept;
      res.base_index = 0;
    }
    return res;
  }
  if (3 * in.count + in.base_size > in.universe_size) return res;
  const int E = std::min(inv_eps, in.count);
  if (E < 1) throw InvalidInput("1/eps must be positive");
  const int n = in.universe_size;
  if (sat_pow(static_cast<std::uint64_t>(n), 2 * E) > budget_limit) {
    res.verdict = Verdict::budget_exceeded;
    return res;
  }
  Budget budget(budget_limit);
  try {
    for_each_unbalanced_cut(n, E, [&](const std::vector<int>& new_order, const std::vector<int>& f) {
      budget.charge();
      Pro2Instance cut{n, {}, {}, in.base_size, in.count, E, f};
      for (const auto& s : in.sets) cut.sets.push_back(remap(s, new_order));
      for (const auto& b : in.base) cut.base.push_back(remap(b, new_order));
      auto r = solve_cpro2(cut, &budget);
      if (r.verdict != Verdict::accept) return false;
      res = r;
      return true;
    });
  } catch (const BudgetExceeded&) {
    res.verdict = Verdict::budget_exceeded;
  }
  return res;
}

struct P2Result {
  Verdict verdict = Verdict::reject;
  std::vector<P2Path> packing;
  int rounds = 0;
  std::size_t peak_family = 0;
};

// One compression round: a t-packing from a (t - 1)-packing, or nothing.
inline std::optional<std::vector<P2Path>> icp_round(const IcpInstance& in, const P2Options& opt, Budget& budget,
                                                    std::size_t* peak = nullptr) {
  const int t = in.k;
  const ElementSet X = packing_nodes(in.previous);
  const std::vector<int> xs = X.members();
  std::vector<int> rank(in.graph.size(), -1);
  for (std::size_t r = 0; r < xs.size(); ++r) rank[xs[r]] = static_cast<int>(r);
  auto to_ranks = [&](const ElementSet& s) {
    ElementSet out;
    s.for_each([&](int v) { out.insert(rank[v]); });
    return out;
  };
  std::vector<ElementSet> inner;  // 1-packings inside X, over ranks
  std::vector<P2Path> inner_paths;
  for_each_subset(X, 3, [&](const ElementSet& s) {
    if (auto path = p2_path_on(in.graph, s)) {
      inner.push_back(to_ranks(s));
      inner_paths.push_back(*path);
    }
  });
  for (int p = 3; p <= icp_max_p(t); ++p)
    for (int q = (p + 2) / 3; q <= std::min(p, t); ++q) {
      Pro1Family fam = icp_pro1(in, p, q, opt.c, opt.reduce, &budget);
      if (peak) *peak = std::max(*peak, fam.sets.size());
      if (fam.sets.empty()) continue;
      Pro2Instance pro{static_cast<int>(xs.size()), inner, {}, 3 * q - p, t - q, opt.inv_eps, {}};
      for (const auto& s : fam.sets) pro.base.push_back(to_ranks(s));
      if (budget.used() >= budget.limit()) throw BudgetExceeded("budget exhausted");
      auto r = procedure2(pro, opt.inv_eps, budget.limit() - budget.used());
      if (r.verdict == Verdict::budget_exceeded) throw BudgetExceeded("budget exhausted");
      if (r.verdict != Verdict::accept) continue;
      std::vector<P2Path> out = fam.paths[r.base_index];
      for (std::size_t i : r.order) out.push_back(inner_paths[i]);
      return out;
    }
  return std::nullopt;
}

// k disjoint paths on three nodes by iterative compression from the empty packing.
inline P2Result solve_p2packing(const Graph& g, int k, const P2Options& opt = {}) {
  if (k < 0) throw InvalidInput("k must be non-negative");
  P2Result res;
  if (k == 0) {
    res.verdict = Verdict::accept;
    return res;
  }
  if (3 * k > g.size()) return res;
  Budget budget(opt.budget);
  std::vector<P2Path> packing;
  try {
    for (int t = 1; t <= k; ++t) {
      ++res.rounds;
      auto next = icp_round(IcpInstance{g, t, packing}, opt, budget, &res.peak_family);
      if (!next) return res;
      if (auto bad = check_packing(g, *next); bad || static_cast<int>(next->size()) != t)
        throw std::logic_error("compression round produced an invalid packing");
      packing = std::move(*next);
    }
  } catch (const BudgetExceeded&) {
    res.verdict = Verdict::budget_exceeded;
    return res;
  }
  res.verdict = Verdict::accept;
  res.packing = std::move(packing);
  return res;
}

}  // namespace fptmix
