#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "core.hpp"
#include "unisets.hpp"

namespace fptmix {

// One part E_i of the partitioned universe: sets carry exactly p members of it and may be
// completed by at most k - p further members. c is the trade-off knob of the runtime analysis.
struct RepPart {
  ElementSet elements;
  int k = 0;
  int p = 0;
  double c = 1.0;
};

struct RepStats {
  std::size_t input_size = 0;
  std::size_t output_size = 0;
  std::uint64_t product_size = 0;
};

namespace detail {

inline void check_parts(const std::vector<RepPart>& parts) {
  ElementSet seen;
  for (const auto& part : parts) {
    if (part.elements.intersects(seen)) throw InvalidInput("representation parts overlap");
    seen |= part.elements;
    if (part.p < 0 || part.k < part.p) throw InvalidInput("representation part needs 0 <= p <= k");
    if (part.c < 1.0) throw InvalidInput("representation part needs c >= 1");
  }
}

inline void check_members(const ElementSet& s, const std::vector<RepPart>& parts) {
  ElementSet covered;
  for (const auto& part : parts) {
    covered |= part.elements;
    if ((s & part.elements).size() != part.p)
      throw InvalidInput("set does not have exactly p members in a part");
  }
  if (!s.subset_of(covered)) throw InvalidInput("set has members outside the partitioned universe");
}

class DenseOrSparseBits {
 public:
  explicit DenseOrSparseBits(std::uint64_t size) : dense_(size <= (std::uint64_t{1} << 27)) {
    if (dense_) bits_.assign((size + 63) / 64, 0);
  }
  // sets the bit, returns its previous value
  bool test_and_set(std::uint64_t i) {
    if (dense_) {
      std::uint64_t m = std::uint64_t{1} << (i & 63);
      bool was = bits_[i >> 6] & m;
      bits_[i >> 6] |= m;
      return was;
    }
    return !sparse_.insert(i).second;
  }

 private:
  bool dense_;
  std::vector<std::uint64_t> bits_;
  std::unordered_set<std::uint64_t> sparse_;
};

}  // namespace detail

// Indices (ascending) of the sets kept by the generalized representative-family construction.
// The output represents the input under the given parts and objective.
inline std::vector<std::size_t> gen_rep_select(const std::vector<ElementSet>& sets, const std::vector<Weight>& weights,
                                               const std::vector<RepPart>& parts, Objective obj,
                                               RepStats* stats = nullptr) {
  if (sets.size() != weights.size()) throw InvalidInput("sets and weights differ in length");
  detail::check_parts(parts);
  for (const auto& s : sets) detail::check_members(s, parts);

  // any good family has at least C(min(k, n), p) members, so small inputs are kept without building one
  if (!stats) {
    std::uint64_t lower = 1;
    for (const auto& part : parts) lower = sat_mul(lower, binom(std::min(part.k, part.elements.size()), part.p));
    if (sets.size() <= lower) {
      std::vector<std::size_t> keep(sets.size());
      std::iota(keep.begin(), keep.end(), std::size_t{0});
      return keep;
    }
  }

  struct Active {
    std::vector<int> local;  // element -> local rank
    std::shared_ptr<const Separator> sep;
    std::uint64_t stride;
  };
  std::vector<Active> active;
  std::uint64_t product = 1;
  for (const auto& part : parts) {
    if (part.k == 0 && part.p == 0) continue;
    Active a;
    a.local.assign(ElementSet::capacity, -1);
    int r = 0;
    part.elements.for_each([&](int e) { a.local[e] = r++; });
    a.sep = cached_separator(r, part.k, part.p);
    a.stride = product;
    product = sat_mul(product, a.sep->size());
    active.push_back(std::move(a));
  }

  std::vector<std::size_t> keep;
  if (stats) {
    stats->input_size = sets.size();
    stats->product_size = product;
  }
  if (sets.size() <= product) {
    keep.resize(sets.size());
    std::iota(keep.begin(), keep.end(), std::size_t{0});
    if (stats) stats->output_size = keep.size();
    return keep;
  }

  std::vector<std::size_t> order(sets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return strictly_better(obj, weights[a], weights[b]);
  });

  detail::DenseOrSparseBits z(product);
  std::vector<std::vector<std::uint64_t>> chi(active.size());
  std::vector<std::size_t> digit(active.size());
  for (std::size_t idx : order) {
    for (std::size_t i = 0; i < active.size(); ++i) {
      chi[i].clear();
      ElementSet local;
      (sets[idx]).for_each([&](int e) {
        if (active[i].local[e] >= 0) local.insert(active[i].local[e]);
      });
      active[i].sep->containing(local, chi[i]);
    }
    bool fresh = false;
    std::fill(digit.begin(), digit.end(), 0);
    while (true) {
      std::uint64_t code = 0;
      for (std::size_t i = 0; i < active.size(); ++i) code += chi[i][digit[i]] * active[i].stride;
      if (!z.test_and_set(code)) fresh = true;
      std::size_t i = 0;
      while (i < active.size() && ++digit[i] == chi[i].size()) digit[i++] = 0;
      if (i == active.size()) break;
    }
    if (fresh) keep.push_back(idx);
  }
  std::sort(keep.begin(), keep.end());
  if (stats) stats->output_size = keep.size();
  return keep;
}

inline WeightedSetFamily gen_rep_alg(const WeightedSetFamily& family, const std::vector<RepPart>& parts, Objective obj,
                                     RepStats* stats = nullptr) {
  std::vector<ElementSet> sets;
  std::vector<Weight> weights;
  for (const auto& s : family.sets()) {
    sets.push_back(s.members);
    weights.push_back(s.weight);
  }
  WeightedSetFamily out(family.universe());
  for (std::size_t i : gen_rep_select(sets, weights, parts, obj, stats)) out.add(sets[i], weights[i]);
  return out;
}

// Describes the first violation of the representation property, or nothing if rep represents original.
// It suffices to test completions Y that are maximal in every part.
inline std::optional<std::string> find_representation_violation(const WeightedSetFamily& original,
                                                                const WeightedSetFamily& rep,
                                                                const std::vector<RepPart>& parts, Objective obj,
                                                                Budget* budget = nullptr) {
  detail::check_parts(parts);
  for (const auto& r : rep.sets()) {
    bool found = false;
    for (const auto& o : original.sets())
      if (o.members == r.members && o.weight == r.weight) found = true;
    if (!found) return "representative set not in the original family";
  }
  for (const auto& x : original.sets()) {
    std::vector<const WeightedSet*> cand;
    for (const auto& r : rep.sets())
      if (at_least_as_good(obj, r.weight, x.weight)) cand.push_back(&r);
    std::vector<std::vector<ElementSet>> choices;
    for (const auto& part : parts) {
      ElementSet avail = part.elements - x.members;
      int b = std::min(part.k - part.p, avail.size());
      std::vector<ElementSet> opts;
      for_each_subset(avail, std::max(b, 0), [&](const ElementSet& y) { opts.push_back(y); });
      choices.push_back(std::move(opts));
    }
    std::vector<std::size_t> digit(choices.size(), 0);
    while (true) {
      ElementSet y;
      for (std::size_t i = 0; i < choices.size(); ++i) y |= choices[i][digit[i]];
      if (budget) budget->charge(cand.size() + 1);
      bool ok = false;
      for (const auto* r : cand)
        if (!r->members.intersects(y)) {
          ok = true;
          break;
        }
      if (!ok) return "no representative avoids a completion of some set of weight " + std::to_string(x.weight);
      std::size_t i = 0;
      while (i < choices.size() && ++digit[i] == choices[i].size()) digit[i++] = 0;
      if (i == choices.size()) break;
    }
  }
  return std::nullopt;
}

inline bool check_representation(const WeightedSetFamily& original, const WeightedSetFamily& rep,
                                 const std::vector<RepPart>& parts, Objective obj, Budget* budget = nullptr) {
  return !find_representation_violation(original, rep, parts, obj, budget).has_value();
}

}  // namespace fptmix
