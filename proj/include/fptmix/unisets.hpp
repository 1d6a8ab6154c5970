#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "core.hpp"

namespace fptmix {

enum class UnisetMode { greedy, randomized, exhaustive };

inline const char* to_string(UnisetMode m) {
  switch (m) {
    case UnisetMode::greedy: return "greedy";
    case UnisetMode::randomized: return "rand";
    case UnisetMode::exhaustive: return "exhaustive";
  }
  return "?";
}

inline UnisetMode parse_uniset_mode(const std::string& s) {
  if (s == "greedy") return UnisetMode::greedy;
  if (s == "rand" || s == "randomized") return UnisetMode::randomized;
  if (s == "exhaustive") return UnisetMode::exhaustive;
  throw InvalidInput("unknown uniset mode: " + s);
}

// A family of functions [n] -> {0,1}; function i maps element e to 1 iff functions[i] contains e.
struct UniversalSet {
  int n = 0;
  int k = 0;
  int p = 0;
  std::vector<ElementSet> functions;
};

struct UnisetLimits {
  std::uint64_t max_constraints = 5'000'000;  // C(n,k) * C(k,p) for greedy
  int max_greedy_n = 22;
  std::uint64_t max_verify_work = 4'000'000'000ULL;  // C(n,k) * |F| for verification
  std::uint64_t max_functions = 20'000'000;
  int max_random_rounds = 64;
};

namespace detail {

inline void check_uniset_params(int n, int k, int p) {
  if (n < 0 || n > ElementSet::capacity) throw InvalidInput("n out of range");
  if (k < 0 || k > n) throw InvalidInput("need 0 <= k <= n");
  if (p < 0 || p > k) throw InvalidInput("need 0 <= p <= k");
}

// Dense index of the constraint (I = X u Y, pattern X) among C(n,k) * C(k,p).
inline std::uint64_t constraint_index(const ElementSet& ones, const ElementSet& zeros, std::uint64_t patterns) {
  ElementSet all = ones | zeros;
  ElementSet pat;
  int pos = 0;
  all.for_each([&](int e) {
    if (ones.contains(e)) pat.insert(pos);
    ++pos;
  });
  return colex_rank(all) * patterns + colex_rank(pat);
}

class GreedyCover {
 public:
  GreedyCover(int n, int k, int p)
      : n_(n), k_(k), p_(p), patterns_(binom(k, p)), total_(sat_mul(binom(n, k), patterns_)),
        covered_((total_ + 63) / 64, 0) {}

  std::vector<ElementSet> run() {
    using Entry = std::pair<std::uint64_t, std::uint64_t>;  // (count, mask)
    auto worse = [](const Entry& a, const Entry& b) {
      if (a.first != b.first) return a.first < b.first;
      return lex_less(ElementSet::from_words(b.second), ElementSet::from_words(a.second));
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
    const std::uint64_t limit = std::uint64_t{1} << n_;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
      int a = std::popcount(mask);
      std::uint64_t c = sat_mul(binom(a, p_), binom(n_ - a, k_ - p_));
      if (c > 0) heap.push({c, mask});
    }
    std::vector<ElementSet> chosen;
    std::uint64_t done = 0;
    while (done < total_ && !heap.empty()) {
      Entry top = heap.top();
      heap.pop();
      ElementSet f = ElementSet::from_words(top.second);
      std::uint64_t actual = count(f, false);
      if (actual == 0) continue;
      if (actual == top.first || heap.empty() || !worse(Entry{actual, top.second}, heap.top())) {
        done += count(f, true);
        chosen.push_back(f);
      } else {
        heap.push({actual, top.second});
      }
    }
    return chosen;
  }

 private:
  std::uint64_t count(const ElementSet& f, bool mark) {
    std::uint64_t c = 0;
    ElementSet rest = ElementSet::range(n_) - f;
    for_each_subset(f, p_, [&](const ElementSet& x) {
      for_each_subset(rest, k_ - p_, [&](const ElementSet& y) {
        std::uint64_t idx = constraint_index(x, y, patterns_);
        std::uint64_t bit = std::uint64_t{1} << (idx & 63);
        if (!(covered_[idx >> 6] & bit)) {
          ++c;
          if (mark) covered_[idx >> 6] |= bit;
        }
      });
    });
    return c;
  }

  int n_, k_, p_;
  std::uint64_t patterns_;
  std::uint64_t total_;
  std::vector<std::uint64_t> covered_;
};

}  // namespace detail

// First constraint (ones X, zeros Y) with |X|=p, |X u Y|=k that no function realizes, if any.
inline std::optional<std::pair<ElementSet, ElementSet>> find_uncovered(const UniversalSet& u,
                                                                       const UnisetLimits& lim = {}) {
  detail::check_uniset_params(u.n, u.k, u.p);
  for (const auto& f : u.functions)
    if (f.max() >= u.n) throw InvalidInput("function has support outside [n]");
  if (sat_mul(binom(u.n, u.k), std::max<std::size_t>(u.functions.size(), 1)) > lim.max_verify_work)
    throw BudgetExceeded("universal set verification exceeds budget");
  std::uint64_t patterns = binom(u.k, u.p);
  std::vector<std::uint32_t> stamp(patterns, 0);
  std::uint32_t gen = 0;
  std::optional<std::pair<ElementSet, ElementSet>> bad;
  for_each_subset(ElementSet::range(u.n), u.k, [&](const ElementSet& I) {
    if (bad) return;
    ++gen;
    std::uint64_t seen = 0;
    for (const auto& f : u.functions) {
      ElementSet x = f & I;
      if (x.size() != u.p) continue;
      ElementSet pat;
      int pos = 0;
      I.for_each([&](int e) {
        if (x.contains(e)) pat.insert(pos);
        ++pos;
      });
      std::uint64_t r = colex_rank(pat);
      if (stamp[r] != gen) {
        stamp[r] = gen;
        if (++seen == patterns) break;
      }
    }
    if (seen == patterns) return;
    std::vector<int> members = I.members();
    // locate a missing pattern
    for_each_subset(ElementSet::range(u.k), u.p, [&](const ElementSet& pat) {
      if (bad || stamp[colex_rank(pat)] == gen) return;
      ElementSet x;
      pat.for_each([&](int pos) { x.insert(members[pos]); });
      bad = std::make_pair(x, I - x);
    });
  });
  return bad;
}

inline bool check_universal(const UniversalSet& u, const UnisetLimits& lim = {}) {
  return !find_uncovered(u, lim).has_value();
}

inline UniversalSet build_universal(int n, int k, int p, UnisetMode mode, std::optional<std::uint64_t> seed = {},
                                    const UnisetLimits& lim = {}) {
  detail::check_uniset_params(n, k, p);
  UniversalSet u{n, k, p, {}};
  switch (mode) {
    case UnisetMode::exhaustive: {
      if (binom(n, p) > lim.max_functions) throw BudgetExceeded("exhaustive universal set too large");
      for_each_subset(ElementSet::range(n), p, [&](const ElementSet& s) { u.functions.push_back(s); });
      return u;
    }
    case UnisetMode::greedy: {
      if (n > lim.max_greedy_n) throw BudgetExceeded("greedy universal set: n exceeds " + std::to_string(lim.max_greedy_n));
      if (sat_mul(binom(n, k), binom(k, p)) > lim.max_constraints)
        throw BudgetExceeded("greedy universal set: constraint space exceeds budget");
      u.functions = detail::GreedyCover(n, k, p).run();
      if (u.functions.empty()) u.functions.push_back(ElementSet{});
      return u;
    }
    case UnisetMode::randomized: {
      if (!seed) throw InvalidInput("randomized mode requires an explicit seed");
      std::mt19937_64 rng(*seed);
      double constraints = static_cast<double>(binom(n, k)) * static_cast<double>(binom(k, p));
      double pool = 2.0 * static_cast<double>(binom(k, p)) * std::log(std::max(constraints, 2.0));
      std::uint64_t size = static_cast<std::uint64_t>(std::ceil(std::max(pool, 1.0)));
      if (size > lim.max_functions) throw BudgetExceeded("randomized universal set pool too large");
      std::bernoulli_distribution bit(k == 0 ? 0.0 : static_cast<double>(p) / k);
      for (int round = 0; round < lim.max_random_rounds; ++round) {
        u.functions.clear();
        for (std::uint64_t i = 0; i < size; ++i) {
          ElementSet f;
          for (int e = 0; e < n; ++e)
            if (bit(rng)) f.insert(e);
          u.functions.push_back(f);
        }
        if (check_universal(u, lim)) return u;
      }
      throw Error("randomized universal set failed verification in every round");
    }
  }
  return u;
}

// A family over local ranks 0..n-1 that is (n,k,p)-good: for every X of size p and every Y of
// size at most k-p disjoint from X, some member contains X and avoids Y.
class Separator {
 public:
  Separator(int n, int k, int p, std::vector<ElementSet> sets, std::string origin)
      : n_(n), k_(k), p_(p), implicit_(false), sets_(std::move(sets)), origin_(std::move(origin)) {
    index();
  }

  // the family of all p-subsets, never materialized
  static Separator all_subsets(int n, int k, int p) { return Separator(n, k, p); }

  int n() const { return n_; }
  int k() const { return k_; }
  int p() const { return p_; }
  bool implicit() const { return implicit_; }
  const std::string& origin() const { return origin_; }
  std::uint64_t size() const { return implicit_ ? binom(n_, p_) : sets_.size(); }

  ElementSet member(std::uint64_t i) const {
    if (!implicit_) return sets_.at(i);
    // unrank colex
    ElementSet s;
    std::uint64_t r = i;
    for (int j = p_; j >= 1; --j) {
      int e = j - 1;
      while (binom(e + 1, j) <= r) ++e;
      s.insert(e);
      r -= binom(e, j);
    }
    return s;
  }

  // Appends the indices of members containing s (local ranks).
  void containing(const ElementSet& s, std::vector<std::uint64_t>& out) const {
    if (implicit_) {
      if (s.size() != p_) throw InvalidInput("separator query with wrong set size");
      out.push_back(colex_rank(s));
      return;
    }
    if (sets_.size() < 64 || s.empty()) {
      for (std::size_t i = 0; i < sets_.size(); ++i)
        if (s.subset_of(sets_[i])) out.push_back(i);
      return;
    }
    std::vector<std::uint64_t> acc;
    bool first = true;
    s.for_each([&](int e) {
      const auto& bits = element_bits_[e];
      if (first) {
        acc = bits;
        first = false;
      } else {
        for (std::size_t w = 0; w < acc.size(); ++w) acc[w] &= bits[w];
      }
    });
    for (std::size_t w = 0; w < acc.size(); ++w) {
      std::uint64_t x = acc[w];
      while (x) {
        out.push_back(64 * w + std::countr_zero(x));
        x &= x - 1;
      }
    }
  }

 private:
  Separator(int n, int k, int p) : n_(n), k_(k), p_(p), implicit_(true), origin_("all-subsets") {}

  void index() {
    if (sets_.size() < 64) return;
    std::size_t words = (sets_.size() + 63) / 64;
    element_bits_.assign(n_, std::vector<std::uint64_t>(words, 0));
    for (std::size_t i = 0; i < sets_.size(); ++i)
      sets_[i].for_each([&](int e) { element_bits_[e][i >> 6] |= std::uint64_t{1} << (i & 63); });
  }

  int n_, k_, p_;
  bool implicit_;
  std::vector<ElementSet> sets_;
  std::vector<std::vector<std::uint64_t>> element_bits_;
  std::string origin_;
};

struct SeparatorPolicy {
  int max_greedy_n = 16;
  std::uint64_t max_greedy_constraints = 400'000;
};

// Process-wide cache keyed by (n, k, p); k is clamped to n.
inline std::shared_ptr<const Separator> cached_separator(int n, int k, int p, const SeparatorPolicy& pol = {}) {
  k = std::min(k, n);
  detail::check_uniset_params(n, k, p);
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const Separator>> cache;
  auto key = std::make_tuple(n, k, p);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::shared_ptr<const Separator> sep;
  bool greedy_ok = n <= pol.max_greedy_n && sat_mul(binom(n, k), binom(k, p)) <= pol.max_greedy_constraints;
  if (greedy_ok) {
    UniversalSet u = build_universal(n, k, p, UnisetMode::greedy);
    if (u.functions.size() < binom(n, p)) sep = std::make_shared<const Separator>(n, k, p, std::move(u.functions), "greedy");
  }
  if (!sep) sep = std::make_shared<const Separator>(Separator::all_subsets(n, k, p));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, sep).first->second;
}

// A (part, k, p)-good family over the actual elements of part.
inline std::vector<ElementSet> build_separator(const ElementSet& part, int k, int p, std::uint64_t max_size = 10'000'000) {
  std::vector<int> elems = part.members();
  auto sep = cached_separator(static_cast<int>(elems.size()), k, p);
  if (sep->size() > max_size) throw BudgetExceeded("separator too large to materialize");
  std::vector<ElementSet> out;
  for (std::uint64_t i = 0; i < sep->size(); ++i) {
    ElementSet s;
    sep->member(i).for_each([&](int r) { s.insert(elems[r]); });
    out.push_back(s);
  }
  return out;
}

}  // namespace fptmix
