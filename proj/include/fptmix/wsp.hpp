#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "core.hpp"
#include "instances.hpp"
#include "parallel.hpp"
#include "repsets.hpp"

namespace fptmix {

namespace detail {
inline std::int64_t ceil_div_pos(std::int64_t a, std::int64_t b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }
}  // namespace detail

// R(0..1/eps) for the cut packing.
inline std::vector<int> deletion_schedule(int k, int inv_eps) {
  if (inv_eps < 1) throw InvalidInput("1/eps must be positive");
  const int P = k / inv_eps;
  if (P < 1) throw InvalidInput("floor(eps k) must be at least 1");
  std::vector<int> R(inv_eps + 1, 0);
  for (int j = 2; j <= inv_eps; ++j) {
    std::int64_t den = detail::ceil_div_pos(3LL * (k - (j - 1) * P), P);
    R[j] = R[j - 1] + static_cast<int>(detail::ceil_div_pos(2LL * (j - 1) * P - R[j - 1], den));
  }
  return R;
}

inline std::optional<std::string> validate_cwsp(const CwspInstance& in) {
  const int n = in.family.universe().size();
  if (in.inv_eps < 1) return "1/eps must be positive";
  if (in.k < 1) return "k must be positive";
  if (in.k / in.inv_eps < 1) return "floor(eps k) must be at least 1";
  if (static_cast<int>(in.f.size()) != in.inv_eps) return "f must have 1/eps values";
  for (std::size_t i = 0; i < in.f.size(); ++i) {
    if (in.f[i] < 0 || in.f[i] >= n) return "f maps outside the universe";
    if (i > 0 && in.f[i] < in.f[i - 1]) return "f is not non-decreasing";
  }
  for (const auto& s : in.family.sets())
    if (s.members.size() != 3) return "every set must have exactly 3 members";
  return std::nullopt;
}

struct CwspOptions {
  double c = 1.591;
  bool reduce = true;
  Budget* budget = nullptr;
};

struct CwspResult {
  bool accept = false;
  std::optional<Weight> best;     // heaviest packing the table retains, if any
  std::vector<std::size_t> order;  // family indices S_1 .. S_k of the witness
  std::size_t peak_family = 0;
};

// Conditions 1-3 and the weight bound on an ordered subfamily; total weight or the first failure.
inline std::variant<Weight, std::string> check_cwsp_solution(const CwspInstance& in,
                                                             const std::vector<std::size_t>& order) {
  if (static_cast<int>(order.size()) != in.k) return std::string("wrong number of sets");
  const int P = in.k / in.inv_eps;
  const auto R = deletion_schedule(in.k, in.inv_eps);
  Weight w = 0;
  ElementSet used;
  for (std::size_t t = 0; t < order.size(); ++t) {
    if (order[t] >= in.family.size()) return std::string("set index out of range");
    const ElementSet& s = in.family[order[t]].members;
    if (s.intersects(used)) return std::string("sets are not disjoint");
    used |= s;
    if (t > 0 && !(in.family[order[t - 1]].members.min() < s.min())) return std::string("condition 1: minima not increasing");
    w = checked_add(w, in.family[order[t]].weight);
  }
  for (int i = 1; i <= in.inv_eps; ++i) {
    int cnt = 0;
    for (int t = 0; t < i * P; ++t) {
      const ElementSet& s = in.family[order[t]].members;
      s.without(s.min()).for_each([&](int e) { cnt += e <= in.f[i - 1]; });
    }
    if (cnt < R[i]) return "condition 2 fails at stage " + std::to_string(i);
    for (int t = i * P; t < in.k; ++t)
      if (in.family[order[t]].members.min() <= in.f[i - 1]) return "condition 3 fails at stage " + std::to_string(i);
  }
  if (w < in.W) return std::string("weight below W");
  return w;
}

// The table M[i, j, s_1..s_{1/eps}, m]. The stage i is determined by j; each entry stores the
// union of the inserted sets without their minima and without elements up to f(i - 1).
inline CwspResult solve_cwsp(const CwspInstance& in, const CwspOptions& opt = {}) {
  if (auto bad = validate_cwsp(in)) throw InvalidInput("invalid cut packing instance: " + *bad);
  const int n = in.family.universe().size();
  const int E = in.inv_eps, k = in.k, P = k / E;
  const auto R = deletion_schedule(k, E);
  auto stage = [&](int j) { return std::min(E + 1, (j - 1) / P + 1); };
  auto f_at = [&](int i) { return i == 0 ? -1 : in.f[i - 1]; };

  struct Item {
    ElementSet set;
    Weight w;
    int pred_entry;
    int pred_item;
    std::size_t added;
  };
  struct Entry {
    int m;
    std::vector<int> s;
    std::vector<Item> items;
  };
  std::vector<Entry> entries;
  CwspResult res;

  auto counts = [&](const ElementSet& rest, std::vector<int>& s) {
    for (int l = 1; l <= E; ++l) rest.for_each([&](int e) { s[l - 1] += e <= in.f[l - 1]; });
  };

  // builds layer j from grouped candidates
  auto commit = [&](std::map<std::pair<int, std::vector<int>>, std::vector<Item>>& groups, int j) {
    std::vector<int> layer;
    for (auto& [key, items] : groups) {
      std::unordered_map<ElementSet, std::size_t, ElementSetHash> pos;
      std::vector<Item> uniq;
      for (auto& it : items) {
        auto [p, fresh] = pos.emplace(it.set, uniq.size());
        if (fresh)
          uniq.push_back(it);
        else if (it.w > uniq[p->second].w)
          uniq[p->second] = it;
      }
      if (opt.reduce && uniq.size() > 1) {
        const int sz = uniq.front().set.size();
        std::vector<ElementSet> sets;
        std::vector<Weight> ws;
        for (const auto& it : uniq) {
          sets.push_back(it.set);
          ws.push_back(it.w);
        }
        RepPart part{ElementSet::range(n), std::min(n, sz + 3 * (k - j)), sz, opt.c};
        std::vector<Item> kept;
        for (std::size_t t : gen_rep_select(sets, ws, {part}, Objective::max)) kept.push_back(uniq[t]);
        uniq.swap(kept);
      }
      res.peak_family = std::max(res.peak_family, uniq.size());
      layer.push_back(static_cast<int>(entries.size()));
      entries.push_back(Entry{key.first, key.second, std::move(uniq)});
    }
    return layer;
  };

  std::map<std::pair<int, std::vector<int>>, std::vector<Item>> groups;
  for (std::size_t t = 0; t < in.family.size(); ++t) {
    const ElementSet& S = in.family[t].members;
    std::vector<int> s(E, 0);
    counts(S.without(S.min()), s);
    groups[{S.min(), s}].push_back(Item{S.without(S.min()), in.family[t].weight, -1, -1, t});
  }
  std::vector<int> layer = commit(groups, 1);

  for (int j = 2; j <= k; ++j) {
    groups.clear();
    const int i = stage(j);
    const bool opens = stage(j - 1) != i;
    const int fprev = f_at(i - 1);
    for (int id : layer) {
      const Entry& e = entries[id];
      for (std::size_t t = 0; t < in.family.size(); ++t) {
        const ElementSet& S = in.family[t].members;
        const int mn = S.min();
        if (mn <= e.m || mn <= fprev) continue;
        ElementSet rest = S.without(mn);
        std::vector<int> s = e.s;
        counts(rest, s);
        if (opens) {
          bool ok = true;
          for (int l = 1; l < i && ok; ++l) ok = s[l - 1] >= R[l];
          if (!ok) continue;
        }
        for (std::size_t q = 0; q < e.items.size(); ++q) {
          if (opt.budget) opt.budget->charge();
          const Item& a = e.items[q];
          if (a.set.intersects(S)) continue;
          ElementSet u = a.set | rest;
          if (i > 1) u = u - ElementSet::range(fprev + 1);
          groups[{mn, s}].push_back(Item{u, checked_add(a.w, in.family[t].weight), id, static_cast<int>(q), t});
        }
      }
    }
    layer = commit(groups, j);
  }

  int best_id = -1, best_q = -1;
  for (int id : layer) {
    const Entry& e = entries[id];
    bool ok = true;
    for (int l = 1; l <= E && ok; ++l) ok = e.s[l - 1] >= R[l];
    if (!ok) continue;
    for (std::size_t q = 0; q < e.items.size(); ++q)
      if (!res.best || e.items[q].w > *res.best) {
        res.best = e.items[q].w;
        best_id = id;
        best_q = static_cast<int>(q);
      }
  }
  if (!res.best || *res.best < in.W) return res;
  res.accept = true;
  for (int id = best_id, q = best_q; id >= 0;) {
    const Item& it = entries[id].items[q];
    res.order.push_back(it.added);
    id = it.pred_entry;
    q = it.pred_item;
  }
  std::reverse(res.order.begin(), res.order.end());
  return res;
}

// Later-eligible sets avoid the minima of the prefix sets.
inline bool smallest_element_closure_check(const WeightedSetFamily& family, const std::vector<std::size_t>& prefix) {
  ElementSet mins;
  for (std::size_t t : prefix) mins.insert(family[t].members.min());
  if (mins.empty()) return true;
  const int top = mins.max();
  for (const auto& s : family.sets())
    if (s.members.min() > top && s.members.intersects(mins)) return false;
  return true;
}

// Calls visit(new_order, f) for every cut of 0..n-1 into `runs` consecutive runs, each taken from
// the elements left by the previous ones, followed by the remainder. new_order[u] is the rank of u
// in the reordered universe and f[i] the rank of the last element of run i. Stops once visit
// returns true; returns whether it did.
template <class Visit>
bool for_each_unbalanced_cut(int n, int runs, Visit&& visit) {
  std::vector<int> order, ends;
  std::function<bool(const std::vector<int>&)> cut = [&](const std::vector<int>& rest) -> bool {
    if (static_cast<int>(ends.size()) == runs) {
      std::vector<int> new_order(n);
      int r = 0;
      for (int u : order) new_order[u] = r++;
      for (int u : rest) new_order[u] = r++;
      return visit(static_cast<const std::vector<int>&>(new_order), static_cast<const std::vector<int>&>(ends));
    }
    const int len = static_cast<int>(rest.size());
    for (int a = 0; a < len; ++a)
      for (int b = a; b < len; ++b) {
        std::vector<int> next;
        for (int t = 0; t < len; ++t)
          if (t < a || t > b) next.push_back(rest[t]);
        order.insert(order.end(), rest.begin() + a, rest.begin() + b + 1);
        ends.push_back(static_cast<int>(order.size()) - 1);
        bool done = cut(next);
        ends.pop_back();
        order.resize(order.size() - (b - a + 1));
        if (done) return true;
      }
    return false;
  };
  std::vector<int> all(n);
  for (int u = 0; u < n; ++u) all[u] = u;
  return cut(all);
}

// Total weight of k pairwise disjoint sets of weight at least W, or the first failure.
inline std::variant<Weight, std::string> check_set_packing(const WeightedSetFamily& family,
                                                           const std::vector<std::size_t>& packing, int k, Weight W) {
  if (static_cast<int>(packing.size()) != k) return std::string("packing does not have k sets");
  ElementSet used;
  Weight total = 0;
  for (std::size_t i = 0; i < packing.size(); ++i) {
    if (packing[i] >= family.size()) return std::string("set index out of range");
    if (i > 0 && packing[i] == packing[i - 1]) return std::string("set used twice");
    const auto& s = family[packing[i]];
    if (s.members.intersects(used)) return std::string("sets are not disjoint");
    used |= s.members;
    total = checked_add(total, s.weight);
  }
  if (total < W) return std::string("weight below W");
  return total;
}

struct WspOptions {
  int inv_eps = 2;
  double c = 1.591;
  bool reduce = true;
  std::uint64_t budget = Budget::default_limit;
  int jobs = 1;
};

struct WspResult {
  Verdict verdict = Verdict::reject;
  Weight weight = 0;
  std::vector<std::size_t> packing;  // family indices
  std::uint64_t cuts_tried = 0;
  std::size_t peak_family = 0;
};

// Weighted 3-set k-packing by enumerating unbalanced cuts of the universe into 1/eps runs.
inline WspResult wsp_alg(const WeightedSetFamily& family, Weight W, int k, const WspOptions& opt = {}) {
  if (k < 0) throw InvalidInput("k must be non-negative");
  for (const auto& s : family.sets())
    if (s.members.size() != 3) throw InvalidInput("every set must have exactly 3 members");
  WspResult res;
  if (k == 0) {
    res.verdict = W <= 0 ? Verdict::accept : Verdict::reject;
    return res;
  }
  const int n = family.universe().size();
  if (3 * k > n) return res;
  const int E = std::min(opt.inv_eps, k);
  if (E < 1) throw InvalidInput("1/eps must be positive");
  if (sat_pow(static_cast<std::uint64_t>(n), 2 * E) > opt.budget) {
    res.verdict = Verdict::budget_exceeded;
    return res;
  }
  Budget budget(opt.budget);
  CwspOptions copt{opt.c, opt.reduce, &budget};

  if (opt.jobs <= 1) {
    try {
      for_each_unbalanced_cut(n, E, [&](const std::vector<int>& new_order, const std::vector<int>& f) {
        budget.charge();
        ++res.cuts_tried;
        CwspInstance in{family.reordered(new_order), k, W, E, f};
        auto sol = solve_cwsp(in, copt);
        res.peak_family = std::max(res.peak_family, sol.peak_family);
        if (!sol.accept) return false;
        res.verdict = Verdict::accept;
        res.weight = *sol.best;
        res.packing = sol.order;
        return true;
      });
    } catch (const BudgetExceeded&) {
      res.verdict = Verdict::budget_exceeded;
    }
  } else {
    // batches of cuts solved concurrently; the lowest accepting cut of a batch wins
    std::vector<std::pair<std::vector<int>, std::vector<int>>> cuts;
    const std::size_t batch = 16 * static_cast<std::size_t>(opt.jobs);
    std::uint64_t spent = 0;
    auto run_batch = [&]() -> bool {
      std::vector<CwspResult> out(cuts.size());
      std::vector<char> over(cuts.size(), 0);
      std::vector<std::uint64_t> used(cuts.size(), 0);
      const std::uint64_t left = opt.budget > spent ? opt.budget - spent : 0;
      parallel_for(cuts.size(), opt.jobs, [&](std::size_t i) {
        Budget b(left);
        CwspOptions o{opt.c, opt.reduce, &b};
        try {
          out[i] = solve_cwsp(CwspInstance{family.reordered(cuts[i].first), k, W, E, cuts[i].second}, o);
        } catch (const BudgetExceeded&) {
          over[i] = 1;
        }
        used[i] = b.used();
      });
      for (std::size_t i = 0; i < cuts.size(); ++i) {
        ++res.cuts_tried;
        res.peak_family = std::max(res.peak_family, out[i].peak_family);
        spent = sat_add(spent, sat_add(used[i], 1));
        if (over[i] || spent > opt.budget) {
          res.verdict = Verdict::budget_exceeded;
          return true;
        }
        if (out[i].accept) {
          res.verdict = Verdict::accept;
          res.weight = *out[i].best;
          res.packing = out[i].order;
          return true;
        }
      }
      cuts.clear();
      return false;
    };
    bool stop = for_each_unbalanced_cut(n, E, [&](const std::vector<int>& new_order, const std::vector<int>& f) {
      cuts.emplace_back(new_order, f);
      return cuts.size() == batch && run_batch();
    });
    if (!stop && !cuts.empty()) run_batch();
  }
  std::sort(res.packing.begin(), res.packing.end());
  return res;
}

}  // namespace fptmix
