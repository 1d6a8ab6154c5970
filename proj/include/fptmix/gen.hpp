#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <vector>

#include "core.hpp"

namespace fptmix::gen {

using Rng = std::mt19937_64;

inline Weight uniform_weight(Rng& rng, Weight lo, Weight hi) {
  return std::uniform_int_distribution<Weight>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

inline std::vector<int> permutation(Rng& rng, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

struct WeightRange {
  Weight lo = 1;
  Weight hi = 9;
};

inline void check_n(int n) {
  if (n <= 0) throw InvalidInput("n must be positive");
  if (n > ElementSet::capacity) throw InvalidInput("n too large");
}

inline Digraph digraph(int n, double density, WeightRange w, Rng& rng) {
  check_n(n);
  Digraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && coin(rng, density)) g.add_arc(u, v, uniform_weight(rng, w.lo, w.hi));
  return g;
}

// Adds a k-node path on random nodes; returns its nodes in order.
inline std::vector<int> plant_path(Digraph& g, int k, WeightRange w, Rng& rng) {
  if (k < 1 || k > g.size()) throw InvalidInput("planted path longer than the graph");
  auto p = permutation(rng, g.size());
  p.resize(k);
  for (int t = 0; t + 1 < k; ++t) g.add_arc(p[t], p[t + 1], uniform_weight(rng, w.lo, w.hi));
  return p;
}

// Adds arcs from r so every node is reachable from it.
inline void make_reachable(Digraph& g, int r, WeightRange w, Rng& rng) {
  for (;;) {
    auto seen = g.reachable_from(r);
    std::vector<int> miss, in;
    for (int v = 0; v < g.size(); ++v) (seen[v] ? in : miss).push_back(v);
    if (miss.empty()) return;
    int u = in[std::uniform_int_distribution<std::size_t>(0, in.size() - 1)(rng)];
    int v = miss[std::uniform_int_distribution<std::size_t>(0, miss.size() - 1)(rng)];
    g.add_arc(u, v, uniform_weight(rng, w.lo, w.hi));
  }
}

inline Graph graph(int n, double density, Rng& rng) {
  check_n(n);
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng, density)) g.add_edge(u, v);
  return g;
}

// Adds k disjoint paths on three nodes; returns them as (end, center, end).
inline std::vector<std::array<int, 3>> plant_p2(Graph& g, int k, Rng& rng) {
  if (k < 0 || 3 * k > g.size()) throw InvalidInput("planted packing does not fit the graph");
  auto p = permutation(rng, g.size());
  std::vector<std::array<int, 3>> out;
  for (int t = 0; t < k; ++t) {
    std::array<int, 3> path{p[3 * t], p[3 * t + 1], p[3 * t + 2]};
    if (!g.has_edge(path[0], path[1])) g.add_edge(path[0], path[1]);
    if (!g.has_edge(path[1], path[2])) g.add_edge(path[1], path[2]);
    out.push_back(path);
  }
  return out;
}

inline WeightedSetFamily setfamily(int n, int count, WeightRange w, Rng& rng) {
  check_n(n);
  if (n < 3) throw InvalidInput("a 3-set family needs at least 3 elements");
  WeightedSetFamily fam(OrderedUniverse::numbered(n));
  for (int t = 0; t < count; ++t) {
    auto p = permutation(rng, n);
    fam.add(ElementSet{p[0], p[1], p[2]}, uniform_weight(rng, w.lo, w.hi));
  }
  return fam;
}

// Adds k disjoint 3-sets; returns their positions in the family.
inline std::vector<std::size_t> plant_sets(WeightedSetFamily& fam, int k, WeightRange w, Rng& rng) {
  const int n = fam.universe().size();
  if (k < 0 || 3 * k > n) throw InvalidInput("planted packing does not fit the universe");
  auto p = permutation(rng, n);
  std::vector<std::size_t> out;
  for (int t = 0; t < k; ++t) {
    out.push_back(fam.size());
    fam.add(ElementSet{p[3 * t], p[3 * t + 1], p[3 * t + 2]}, uniform_weight(rng, w.lo, w.hi));
  }
  return out;
}

}  // namespace fptmix::gen
