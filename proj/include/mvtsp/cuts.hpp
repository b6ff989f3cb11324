#pragma once

#include <vector>

#include "mvtsp/arith.hpp"

namespace mvtsp {

// Dense symmetric weights on local vertices 0..k-1; diagonal ignored.
using WeightMatrix = std::vector<std::vector<Rational>>;

struct CutResult {
  Rational value;
  std::vector<bool> side;  // side[i] true for vertices on the source side
};

// Components of the graph with edges of positive weight, each sorted, ordered
// by smallest member.
std::vector<std::vector<int>> positive_components(const WeightMatrix& w);

// Minimum source-sink cut by Edmonds-Karp.
CutResult min_st_cut(const WeightMatrix& w, int source, int sink);

// Global minimum cut by Stoer-Wagner; requires k >= 2. The returned side
// never contains vertex 0.
CutResult global_min_cut(const WeightMatrix& w);

Rational cut_weight(const WeightMatrix& w, const std::vector<bool>& side);

}  // namespace mvtsp
