#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fptmix {

using Weight = std::int64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

inline Weight checked_add(Weight a, Weight b) {
  Weight r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("weight overflow");
  return r;
}

inline Weight checked_sub(Weight a, Weight b) {
  Weight r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("weight overflow");
  return r;
}

enum class Objective { max, min };

// a is at least as good as b under the objective
inline bool at_least_as_good(Objective o, Weight a, Weight b) {
  return o == Objective::max ? a >= b : a <= b;
}

inline bool strictly_better(Objective o, Weight a, Weight b) {
  return o == Objective::max ? a > b : a < b;
}

enum class Verdict { accept, reject, budget_exceeded };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::accept: return "accept";
    case Verdict::reject: return "reject";
    case Verdict::budget_exceeded: return "budget-exceeded";
  }
  return "?";
}

// Fixed-capacity set of small non-negative integers.
class ElementSet {
 public:
  static constexpr int capacity = 128;

  constexpr ElementSet() = default;

  ElementSet(std::initializer_list<int> elems) {
    for (int e : elems) insert(e);
  }

  static ElementSet range(int n) {
    check_bound(n == 0 ? 0 : n - 1);
    ElementSet s;
    for (int i = 0; i < 2; ++i) {
      int bits = std::clamp(n - 64 * i, 0, 64);
      s.w_[i] = bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
    }
    return s;
  }

  static ElementSet from_words(std::uint64_t lo, std::uint64_t hi = 0) {
    ElementSet s;
    s.w_[0] = lo;
    s.w_[1] = hi;
    return s;
  }

  void insert(int e) {
    check_bound(e);
    w_[e >> 6] |= std::uint64_t{1} << (e & 63);
  }
  void erase(int e) {
    check_bound(e);
    w_[e >> 6] &= ~(std::uint64_t{1} << (e & 63));
  }
  bool contains(int e) const {
    if (e < 0 || e >= capacity) return false;
    return (w_[e >> 6] >> (e & 63)) & 1;
  }
  ElementSet with(int e) const {
    ElementSet s = *this;
    s.insert(e);
    return s;
  }
  ElementSet without(int e) const {
    ElementSet s = *this;
    s.erase(e);
    return s;
  }

  int size() const { return std::popcount(w_[0]) + std::popcount(w_[1]); }
  bool empty() const { return (w_[0] | w_[1]) == 0; }

  bool intersects(const ElementSet& o) const {
    return ((w_[0] & o.w_[0]) | (w_[1] & o.w_[1])) != 0;
  }
  bool subset_of(const ElementSet& o) const {
    return (w_[0] & ~o.w_[0]) == 0 && (w_[1] & ~o.w_[1]) == 0;
  }

  ElementSet operator|(const ElementSet& o) const { return from_words(w_[0] | o.w_[0], w_[1] | o.w_[1]); }
  ElementSet operator&(const ElementSet& o) const { return from_words(w_[0] & o.w_[0], w_[1] & o.w_[1]); }
  ElementSet operator-(const ElementSet& o) const { return from_words(w_[0] & ~o.w_[0], w_[1] & ~o.w_[1]); }
  ElementSet& operator|=(const ElementSet& o) { return *this = *this | o; }
  ElementSet& operator&=(const ElementSet& o) { return *this = *this & o; }
  ElementSet& operator-=(const ElementSet& o) { return *this = *this - o; }

  // smallest member, -1 if empty
  int min() const {
    if (w_[0]) return std::countr_zero(w_[0]);
    if (w_[1]) return 64 + std::countr_zero(w_[1]);
    return -1;
  }
  int max() const {
    if (w_[1]) return 127 - std::countl_zero(w_[1]);
    if (w_[0]) return 63 - std::countl_zero(w_[0]);
    return -1;
  }

  // members strictly below e
  ElementSet below(int e) const {
    if (e <= 0) return {};
    if (e >= capacity) return *this;
    return *this & range(e);
  }

  template <class F>
  void for_each(F&& f) const {
    for (int i = 0; i < 2; ++i) {
      std::uint64_t x = w_[i];
      while (x) {
        int b = std::countr_zero(x);
        f(64 * i + b);
        x &= x - 1;
      }
    }
  }

  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(size());
    for_each([&](int e) { out.push_back(e); });
    return out;
  }

  std::uint64_t word(int i) const { return w_[i]; }

  friend bool operator==(const ElementSet& a, const ElementSet& b) = default;
  friend bool operator<(const ElementSet& a, const ElementSet& b) {
    return a.w_[1] != b.w_[1] ? a.w_[1] < b.w_[1] : a.w_[0] < b.w_[0];
  }

  std::size_t hash() const {
    std::uint64_t h = w_[0] * 0x9E3779B97F4A7C15ULL;
    h ^= (w_[1] + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2));
    h ^= h >> 31;
    return static_cast<std::size_t>(h);
  }

 private:
  static void check_bound(int e) {
    if (e < 0 || e >= capacity) throw InvalidInput("element index out of range: " + std::to_string(e));
  }

  std::array<std::uint64_t, 2> w_{};
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const { return s.hash(); }
};

// Bit-vector order: the first position where the vectors differ holds 0 in the smaller one.
inline bool lex_less(const ElementSet& a, const ElementSet& b) {
  int d = ((a - b) | (b - a)).min();
  return d >= 0 && !a.contains(d);
}

// ---- combinatorics ----

constexpr std::uint64_t saturated = std::numeric_limits<std::uint64_t>::max();

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) return saturated;
  return r;
}

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) return saturated;
  return r;
}

inline std::uint64_t binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > saturated) return saturated;
  }
  return static_cast<std::uint64_t>(r);
}

inline std::uint64_t sat_pow(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r = sat_mul(r, base);
  return r;
}

// Colex rank of a set among all subsets of the same size.
inline std::uint64_t colex_rank(const ElementSet& s) {
  std::uint64_t r = 0;
  int i = 0;
  s.for_each([&](int e) {
    ++i;
    r += binom(e, i);
  });
  return r;
}

// Calls f(subset) for every subset of base with exactly size members, in colex order.
template <class F>
void for_each_subset(const ElementSet& base, int size, F&& f) {
  std::vector<int> elems = base.members();
  int n = static_cast<int>(elems.size());
  if (size < 0 || size > n) return;
  if (size == 0) {
    f(ElementSet{});
    return;
  }
  std::vector<int> idx(size);
  for (int i = 0; i < size; ++i) idx[i] = i;
  while (true) {
    ElementSet s;
    for (int i : idx) s.insert(elems[i]);
    f(s);
    // advance in colex order
    int i = 0;
    while (i < size - 1 && idx[i] + 1 == idx[i + 1]) {
      idx[i] = i;
      ++i;
    }
    if (idx[i] + 1 >= n) return;
    ++idx[i];
  }
}

// ---- budget ----

class Budget {
 public:
  static constexpr std::uint64_t default_limit = 1'000'000'000ULL;

  explicit Budget(std::uint64_t limit = default_limit) : limit_(limit) {}

  void charge(std::uint64_t units = 1) {
    used_ = sat_add(used_, units);
    if (used_ > limit_) throw BudgetExceeded("budget of " + std::to_string(limit_) + " work units exceeded");
  }
  bool allows(std::uint64_t units) const { return sat_add(used_, units) <= limit_; }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

// ---- exact rationals for the k-path parameters ----

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational parse(const std::string& text) {
    auto fail = [&]() -> Rational { throw ParseError("cannot parse rational: '" + text + "'"); };
    if (text.empty()) return fail();
    auto slash = text.find('/');
    try {
      if (slash != std::string::npos) {
        std::size_t p1 = 0, p2 = 0;
        std::string a = text.substr(0, slash), b = text.substr(slash + 1);
        Rational r{std::stoll(a, &p1), std::stoll(b, &p2)};
        if (p1 != a.size() || p2 != b.size() || r.den <= 0) return fail();
        return r.normalized();
      }
      auto dot = text.find('.');
      if (dot == std::string::npos) {
        std::size_t p = 0;
        Rational r{std::stoll(text, &p), 1};
        if (p != text.size()) return fail();
        return r;
      }
      std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
      if (fp.empty() || fp.size() > 15 || fp.find_first_not_of("0123456789") != std::string::npos) return fail();
      std::int64_t den = 1;
      for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
      bool neg = !ip.empty() && ip[0] == '-';
      std::int64_t whole = 0;
      if (!ip.empty() && ip != "-") {
        std::size_t p = 0;
        whole = std::stoll(ip, &p);
        if (p != ip.size()) return fail();
      }
      std::int64_t frac = std::stoll(fp);
      std::int64_t num = std::llabs(whole) * den + frac;
      return Rational{neg ? -num : num, den}.normalized();
    } catch (const std::logic_error&) {
      return fail();
    }
  }

  Rational normalized() const {
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) return {0, 1};
    return {num / g, den / g};
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
};

// floor of a * b * k for non-negative rationals
inline std::int64_t floor_product(const Rational& a, const Rational& b, std::int64_t k) {
  __int128 num = static_cast<__int128>(a.num) * b.num * k;
  __int128 den = static_cast<__int128>(a.den) * b.den;
  __int128 q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return static_cast<std::int64_t>(q);
}

// ---- ordered universes and weighted set families ----

class OrderedUniverse {
 public:
  OrderedUniverse() = default;

  explicit OrderedUniverse(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (static_cast<int>(labels_.size()) > ElementSet::capacity)
      throw InvalidInput("universe larger than " + std::to_string(ElementSet::capacity) + " elements");
    for (int i = 0; i < static_cast<int>(labels_.size()); ++i) {
      if (!rank_.emplace(labels_[i], i).second) throw InvalidInput("duplicate universe label: " + labels_[i]);
    }
  }

  static OrderedUniverse numbered(int n) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return OrderedUniverse(std::move(labels));
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int r) const { return labels_.at(r); }
  const std::vector<std::string>& labels() const { return labels_; }
  bool contains(const std::string& l) const { return rank_.count(l) != 0; }
  int rank(const std::string& l) const {
    auto it = rank_.find(l);
    if (it == rank_.end()) throw InvalidInput("label not in universe: " + l);
    return it->second;
  }

  // new_order[old_rank] is the new rank of that element
  OrderedUniverse reordered(const std::vector<int>& new_order) const {
    check_permutation(new_order, size());
    std::vector<std::string> labels(labels_.size());
    for (int r = 0; r < size(); ++r) labels[new_order[r]] = labels_[r];
    return OrderedUniverse(std::move(labels));
  }

  static void check_permutation(const std::vector<int>& p, int n) {
    if (static_cast<int>(p.size()) != n) throw InvalidInput("permutation has wrong length");
    std::vector<char> seen(n, 0);
    for (int x : p) {
      if (x < 0 || x >= n || seen[x]) throw InvalidInput("not a permutation");
      seen[x] = 1;
    }
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> rank_;
};

inline ElementSet remap(const ElementSet& s, const std::vector<int>& new_order) {
  ElementSet out;
  s.for_each([&](int e) { out.insert(new_order.at(e)); });
  return out;
}

struct WeightedSet {
  ElementSet members;
  Weight weight = 0;
};

class WeightedSetFamily {
 public:
  WeightedSetFamily() = default;
  explicit WeightedSetFamily(OrderedUniverse universe) : universe_(std::move(universe)) {}

  const OrderedUniverse& universe() const { return universe_; }
  const std::vector<WeightedSet>& sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }
  const WeightedSet& operator[](std::size_t i) const { return sets_[i]; }

  void add(const ElementSet& members, Weight w) {
    if (members.max() >= universe_.size()) throw InvalidInput("set member outside universe");
    sets_.push_back({members, w});
  }

  // Keeps one copy of each member set with the extremal weight, at its first position.
  WeightedSetFamily deduplicated(Objective o) const {
    WeightedSetFamily out(universe_);
    std::unordered_map<ElementSet, std::size_t, ElementSetHash> pos;
    for (const auto& s : sets_) {
      auto [it, fresh] = pos.emplace(s.members, out.sets_.size());
      if (fresh) {
        out.sets_.push_back(s);
      } else if (strictly_better(o, s.weight, out.sets_[it->second].weight)) {
        out.sets_[it->second].weight = s.weight;
      }
    }
    return out;
  }

  WeightedSetFamily reordered(const std::vector<int>& new_order) const {
    WeightedSetFamily out(universe_.reordered(new_order));
    for (const auto& s : sets_) out.sets_.push_back({remap(s.members, new_order), s.weight});
    return out;
  }

 private:
  OrderedUniverse universe_;
  std::vector<WeightedSet> sets_;
};

// ---- graphs ----

struct Arc {
  int tail;
  int head;
  Weight weight;
};

class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n) : out_(check_n(n)), in_(n) {}

  int size() const { return static_cast<int>(out_.size()); }

  // Parallel arcs collapse to the minimum weight.
  void add_arc(int t, int h, Weight w = 0) {
    check_node(t);
    check_node(h);
    if (t == h) throw InvalidInput("self-loop at node " + std::to_string(t));
    auto& row = out_[t];
    auto it = std::lower_bound(row.begin(), row.end(), h, [](const auto& p, int x) { return p.first < x; });
    if (it != row.end() && it->first == h) {
      if (w < it->second) {
        it->second = w;
        auto& col = in_[h];
        std::lower_bound(col.begin(), col.end(), t, [](const auto& p, int x) { return p.first < x; })->second = w;
      }
      return;
    }
    row.insert(it, {h, w});
    auto& col = in_[h];
    col.insert(std::lower_bound(col.begin(), col.end(), t, [](const auto& p, int x) { return p.first < x; }), {t, w});
  }

  std::optional<Weight> arc_weight(int t, int h) const {
    if (t < 0 || t >= size()) return std::nullopt;
    const auto& row = out_[t];
    auto it = std::lower_bound(row.begin(), row.end(), h, [](const auto& p, int x) { return p.first < x; });
    if (it == row.end() || it->first != h) return std::nullopt;
    return it->second;
  }
  bool has_arc(int t, int h) const { return arc_weight(t, h).has_value(); }
  Weight weight(int t, int h) const {
    auto w = arc_weight(t, h);
    if (!w) throw InvalidInput("no arc " + std::to_string(t) + "->" + std::to_string(h));
    return *w;
  }

  // (head, weight) pairs sorted by head
  const std::vector<std::pair<int, Weight>>& out(int v) const { return out_.at(v); }
  // (tail, weight) pairs sorted by tail
  const std::vector<std::pair<int, Weight>>& in(int v) const { return in_.at(v); }

  std::vector<Arc> arcs() const {
    std::vector<Arc> a;
    for (int t = 0; t < size(); ++t)
      for (auto [h, w] : out_[t]) a.push_back({t, h, w});
    return a;
  }
  std::size_t arc_count() const {
    std::size_t c = 0;
    for (const auto& r : out_) c += r.size();
    return c;
  }

  // nodes reachable from r, including r
  std::vector<char> reachable_from(int r) const {
    std::vector<char> seen(size(), 0);
    std::vector<int> stack{r};
    seen[r] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (auto [v, w] : out_[u])
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
    return seen;
  }

 private:
  static int check_n(int n) {
    if (n < 0) throw InvalidInput("negative node count");
    return n;
  }
  void check_node(int v) const {
    if (v < 0 || v >= size()) throw InvalidInput("node out of range: " + std::to_string(v));
  }

  std::vector<std::vector<std::pair<int, Weight>>> out_;
  std::vector<std::vector<std::pair<int, Weight>>> in_;
};

class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : adj_(n < 0 ? throw InvalidInput("negative node count") : n) {}

  int size() const { return static_cast<int>(adj_.size()); }

  void add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= size() || v >= size()) throw InvalidInput("edge endpoint out of range");
    if (u == v) throw InvalidInput("self-loop at node " + std::to_string(u));
    if (has_edge(u, v)) return;
    adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
    adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
  }
  bool has_edge(int u, int v) const {
    if (u < 0 || u >= size()) return false;
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
  }
  const std::vector<int>& neighbors(int v) const { return adj_.at(v); }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < size(); ++u)
      for (int v : adj_[u])
        if (u < v) e.emplace_back(u, v);
    return e;
  }

  // subgraph on the nodes not in removed; node ids are kept
  Graph without(const std::vector<char>& removed) const {
    Graph g(size());
    for (auto [u, v] : edges())
      if (!removed[u] && !removed[v]) g.add_edge(u, v);
    return g;
  }

 private:
  std::vector<std::vector<int>> adj_;
};

inline Graph underlying_graph(const Digraph& d) {
  Graph g(d.size());
  for (const auto& a : d.arcs()) g.add_edge(a.tail, a.head);
  return g;
}

// True if the node set {a,b,c} induces a path on three nodes (some node adjacent to the other two).
inline bool spans_p2(const Graph& g, int a, int b, int c) {
  return (g.has_edge(a, b) && g.has_edge(a, c)) || (g.has_edge(b, a) && g.has_edge(b, c)) ||
         (g.has_edge(c, a) && g.has_edge(c, b));
}

}  // namespace fptmix
