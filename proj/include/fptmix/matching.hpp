#pragma once

#include <queue>
#include <utility>
#include <vector>

#include "core.hpp"

namespace fptmix {

// Maximum cardinality matching in a general graph (Edmonds' blossom algorithm, O(n^3)).
// Returns the matched edges as (u, v) with u < v, sorted.
inline std::vector<std::pair<int, int>> max_matching(const Graph& g) {
  const int n = g.size();
  std::vector<int> match(n, -1), parent(n), base(n);
  std::vector<char> used(n), blossom(n);

  auto lca = [&](int a, int b) {
    std::vector<char> seen(n, 0);
    while (true) {
      a = base[a];
      seen[a] = 1;
      if (match[a] == -1) break;
      a = parent[match[a]];
    }
    while (true) {
      b = base[b];
      if (seen[b]) return b;
      b = parent[match[b]];
    }
  };

  auto mark_path = [&](int v, int b, int child) {
    while (base[v] != b) {
      blossom[base[v]] = blossom[base[match[v]]] = 1;
      parent[v] = child;
      child = match[v];
      v = parent[match[v]];
    }
  };

  auto find_path = [&](int root) {
    std::fill(used.begin(), used.end(), 0);
    std::fill(parent.begin(), parent.end(), -1);
    for (int i = 0; i < n; ++i) base[i] = i;
    used[root] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int to : g.neighbors(v)) {
        if (base[v] == base[to] || match[v] == to) continue;
        if (to == root || (match[to] != -1 && parent[match[to]] != -1)) {
          int cur = lca(v, to);
          std::fill(blossom.begin(), blossom.end(), 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < n; ++i) {
            if (blossom[base[i]]) {
              base[i] = cur;
              if (!used[i]) {
                used[i] = 1;
                q.push(i);
              }
            }
          }
        } else if (parent[to] == -1) {
          parent[to] = v;
          if (match[to] == -1) return to;
          used[match[to]] = 1;
          q.push(match[to]);
        }
      }
    }
    return -1;
  };

  // greedy warm start
  for (int v = 0; v < n; ++v) {
    if (match[v] != -1) continue;
    for (int to : g.neighbors(v))
      if (match[to] == -1) {
        match[v] = to;
        match[to] = v;
        break;
      }
  }
  for (int v = 0; v < n; ++v) {
    if (match[v] != -1) continue;
    int u = find_path(v);
    while (u != -1) {
      int pv = parent[u], ppv = match[pv];
      match[u] = pv;
      match[pv] = u;
      u = ppv;
    }
  }

  std::vector<std::pair<int, int>> out;
  for (int v = 0; v < n; ++v)
    if (match[v] > v) out.emplace_back(v, match[v]);
  return out;
}

inline bool is_matching(const Graph& g, const std::vector<std::pair<int, int>>& m) {
  std::vector<char> used(g.size(), 0);
  for (auto [u, v] : m) {
    if (!g.has_edge(u, v) || used[u] || used[v]) return false;
    used[u] = used[v] = 1;
  }
  return true;
}

}  // namespace fptmix
