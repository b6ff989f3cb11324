#pragma once

#include <vector>

#include "mvtsp/instance.hpp"
#include "mvtsp/walk.hpp"

namespace mvtsp {

struct TransportationInstance {
  int n = 0;
  std::vector<Integer> supply;  // a_v
  std::vector<Integer> demand;  // b_v
  std::vector<Rational> cost;   // n x n unit costs, row-major
};

// Path variant: supply r(v) except r(s)-1, demand r(v) except r(t)-1.
// Cycle variant (no t): supply = demand = r.
TransportationInstance transportation_for(const Instance& inst);

struct TransportationSolution {
  std::vector<Integer> flow;  // n x n, flow[u*n+v] from a_u to b_v
  CompactMultigraph graph;    // flow(a_u -> b_v) on edge {u,v}
  Rational cost;
};

// Exact min-cost flow by capacity scaling (O(n^2 log U) augmentations).
// Throws StructuralError when supplies and demands do not balance.
TransportationSolution solve_transportation(const TransportationInstance& tp);

// Algorithm 1: Hamiltonian s-t path plus the cycles of an optimal
// transportation solution, merged into one walk and shortcut.
TourSolution approx_25(const Instance& inst, const CompactMultigraph& single_visit_path);

// Vertex sequence of a Hamiltonian s-t path given as a multigraph; throws
// StructuralError otherwise.
std::vector<Vertex> hamiltonian_sequence(const CompactMultigraph& path, Vertex s, Vertex t);

}  // namespace mvtsp
