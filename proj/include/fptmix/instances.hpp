#pragma once

#include <vector>

#include "core.hpp"

namespace fptmix {

// Weighted k-path with a fixed cut of the path into pieces.
struct KcwpInstance {
  Digraph graph;
  int k = 0;
  Weight W = 0;
  int inv_eps = 13;
  Rational delta{1, 12};
  Rational gamma{84, 1000};
  ElementSet L;
  ElementSet R;
  std::vector<int> l1, l2;  // indexed 0 .. m + mt - 1
  std::vector<int> r1, r2;  // indexed 0 .. m - mt - 1
  int vl = -1;
  int vr = -1;
};

// Weighted 3-set packing with a fixed unbalanced cut f of the ordered universe.
struct CwspInstance {
  WeightedSetFamily family;
  int k = 0;
  Weight W = 0;
  int inv_eps = 1;
  std::vector<int> f;  // f[i-1] is the rank of f(i); non-decreasing
};

// Packing of `count` disjoint 3-sets that also avoid some member of `base`, with a fixed cut f.
// base_size is the size of every member of base (3q - p in the compression step).
struct Pro2Instance {
  int universe_size = 0;
  std::vector<ElementSet> sets;
  std::vector<ElementSet> base;
  int base_size = 0;
  int count = 0;
  int inv_eps = 1;
  std::vector<int> f;
};

}  // namespace fptmix
