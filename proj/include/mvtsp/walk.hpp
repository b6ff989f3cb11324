#pragma once

#include <variant>
#include <vector>

#include "mvtsp/instance.hpp"

namespace mvtsp {

// A simple closed walk v0 -> v1 -> ... -> v_{k-1} -> v0. A single vertex is
// the self-loop, two vertices the doubled edge.
struct Cycle {
  std::vector<Vertex> vertices;
  Integer multiplicity;

  friend bool operator==(const Cycle&, const Cycle&) = default;
};

struct PathCycleDecomposition {
  std::vector<Vertex> path;  // s ... t; the single vertex s when s == t
  std::vector<Cycle> cycles;

  friend bool operator==(const PathCycleDecomposition&, const PathCycleDecomposition&) = default;
};

// Edge multiset of one traversal of the cycle.
void add_cycle_edges(CompactMultigraph& g, const std::vector<Vertex>& cycle, const Integer& times);

CompactMultigraph recompose(const PathCycleDecomposition& d, int n);

// Splits g into one s-t path plus weighted simple cycles. Pass s == t for a
// closed (all-even) multigraph. Throws InfeasibleError on a parity violation.
PathCycleDecomposition decompose_path_cycles(const CompactMultigraph& g, Vertex s, Vertex t);

// Symbolic walk: a visit of a vertex, or `times` traversals of a cycle rooted
// at the vertex of the closest preceding visit (rotation[0] is that vertex).
struct Visit {
  Vertex vertex;
  friend bool operator==(const Visit&, const Visit&) = default;
};
struct Repeat {
  std::vector<Vertex> rotation;
  Integer times;
  friend bool operator==(const Repeat&, const Repeat&) = default;
};
using OrderItem = std::variant<Visit, Repeat>;

struct SymbolicOrder {
  std::vector<OrderItem> items;
  friend bool operator==(const SymbolicOrder&, const SymbolicOrder&) = default;
};

struct MergeResult {
  SymbolicOrder order;
  std::vector<std::size_t> detached_cycles;  // cycles not touching the walk
};

// Splices every cycle into the walk at the first occurrence of one of its
// vertices. With require_connected, detached cycles raise InfeasibleError.
MergeResult eulerian_merge(const PathCycleDecomposition& d, int n, bool require_connected = true);

// Edge multiset traversed by the order.
CompactMultigraph order_multigraph(const SymbolicOrder& order, int n);
// Number of times each vertex occurs in the walk.
std::vector<Integer> visit_counts(const SymbolicOrder& order, int n);
// Expands to the explicit vertex sequence; only for small walks (tests).
std::vector<Vertex> expand(const SymbolicOrder& order);

struct TourSolution {
  CompactMultigraph multigraph;
  PathCycleDecomposition decomposition;
  Rational total_cost;
  SymbolicOrder order;
};

// Removes the last gamma(w) = visits(w) - r(w) occurrences of each vertex,
// never the walk's first or last occurrence. Asserts sum gamma <= 2n + 2.
TourSolution shortcut(const SymbolicOrder& order, const Instance& inst);

}  // namespace mvtsp
