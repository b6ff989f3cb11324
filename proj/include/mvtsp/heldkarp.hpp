#pragma once

#include <optional>
#include <vector>

#include "mvtsp/instance.hpp"
#include "mvtsp/lp.hpp"

namespace mvtsp {

// The polytope P_HK(W, u, v) on edges of E[W] (self-loops included):
// degree 2r(w), lowered by one at u and at v (by two when u == v); every
// proper nonempty C of W has load >= 1 when it separates u from v and >= 2
// otherwise; plus load >= 3 on each set of `three_cuts` (subsets of W that
// contain u but not v).
struct HeldKarpFamily {
  std::vector<Vertex> W;  // sorted, distinct
  Vertex u = 0;
  Vertex v = 0;
  std::vector<std::vector<Vertex>> three_cuts;
};

struct HeldKarpPoint {
  // Edge vector over all n(n+1)/2 edges of the instance (zero outside E[W]).
  std::vector<Rational> x;
  Rational value;
  LPVertexSolution lp;  // local variables: edges of E[W] in global id order
  std::vector<std::size_t> local_edges;
};

// Cutting-plane solve; throws InfeasibleError when the polytope is empty.
HeldKarpPoint solve_held_karp_family(const Instance& inst, const HeldKarpFamily& family);

// Held-Karp relaxation of the instance: W = V, u = s, v = t.
HeldKarpPoint held_karp_mv(const Instance& inst);

// Explicit LP over E[W] with every cut constraint written out (|W| <= 10 by
// default cap). Shares only the LP engine with the cutting-plane path.
HeldKarpPoint explicit_held_karp_family(const Instance& inst, const HeldKarpFamily& family,
                                        int max_w = 10);

// Load x(delta(C)) of a vertex set on a global edge vector.
Rational cut_load(int n, const std::vector<Rational>& x, const std::vector<bool>& in_set);

// Oracle soundness helper: violated cut constraints of the family for a local
// point, found by min-cut computations (empty when the point is feasible).
std::vector<Constraint> separate_held_karp_cuts(const Instance& inst, const HeldKarpFamily& family,
                                                const std::vector<std::size_t>& local_edges,
                                                const std::vector<Rational>& x);

}  // namespace mvtsp
