#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mvtsp/arith.hpp"
#include "mvtsp/instance.hpp"

namespace mvtsp {

struct WeightedEdge {
  int u = 0;
  int v = 0;
  Rational w;
};

// Maximum-weight matching by the primal-dual blossom method, in exact
// arithmetic. With max_cardinality the matching has maximum cardinality and
// maximum weight among those. Returns mate[v] (or -1) for v < vertex_count.
std::vector<int> max_weight_matching(int vertex_count, const std::vector<WeightedEdge>& edges,
                                     bool max_cardinality = false);

// Minimum-cost perfect matching on the complete graph over `vertices`
// (|vertices| even). Pairs are returned with first < second, sorted.
std::vector<std::pair<Vertex, Vertex>> min_cost_perfect_matching(
    const std::vector<Vertex>& vertices, const std::function<Rational(Vertex, Vertex)>& cost);

}  // namespace mvtsp
