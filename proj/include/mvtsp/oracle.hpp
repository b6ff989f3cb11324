#pragma once

#include <vector>

#include "mvtsp/gpolymatroid.hpp"
#include "mvtsp/heldkarp.hpp"
#include "mvtsp/instance.hpp"

namespace mvtsp {

struct OracleCaps {
  int max_n = 5;
  long max_r = 3;
};

// Defaults, overridden by MVTSP_ORACLE_CAPS="n,rmax".
OracleCaps oracle_caps();

struct ExactSolution {
  Rational cost;
  CompactMultigraph multigraph;
};

// Exhaustive search over degree-feasible multiplicity vectors with a
// connected support. Path variant needs t; throws CapabilityError past caps.
ExactSolution exact_mvtsp_path(const Instance& inst, const OracleCaps& caps = oracle_caps());
// Closed tours (t absent): degree 2r(v) everywhere.
ExactSolution exact_mvtsp_cycle(const Instance& inst, const OracleCaps& caps = oracle_caps());

struct SingleVisitPath {
  Rational cost;
  std::vector<Vertex> order;  // s first, t last
  CompactMultigraph multigraph;
};

// Subset DP over (visited set, last vertex); r must be all ones, n <= 12.
SingleVisitPath exact_single_visit_path(const Instance& inst, int max_n = 12);

// Held-Karp relaxation with every cut written out (n <= 10).
Rational explicit_held_karp_value(const Instance& inst);

// The rounding LP with all 2^|S| border rows, the box, x >= 0 and the
// hyperedge rows (|S| <= 12). Throws InfeasibleError when empty.
Rational explicit_gpolymatroid_lp(const ParamodularPair& pair, const std::vector<Rational>& cost,
                                  const DegreeConstraintSystem& dcs, const Box& box = {});

}  // namespace mvtsp
