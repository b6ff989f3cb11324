#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mvtsp/gpolymatroid.hpp"
#include "mvtsp/heldkarp.hpp"
#include "mvtsp/instance.hpp"
#include "mvtsp/io.hpp"
#include "mvtsp/walk.hpp"

namespace mvtsp {

// An s-t cut C (s in C, t not in C) as a vertex bitmask.
struct LowCut {
  std::uint32_t mask = 0;
  Rational load;  // x(delta(C)) of the point the family was built from
  std::vector<Vertex> members() const;
  bool contains(Vertex v) const { return (mask >> v) & 1u; }
};

struct CutFamily {
  int n = 0;
  std::vector<LowCut> cuts;  // increasing mask order, duplicate-free
};

// All s-t cuts of x-load strictly below 3, by enumeration of the 2^(n-2)
// candidates. Throws CapabilityError when n > max_n.
CutFamily enumerate_low_cuts(const Instance& inst, const std::vector<Rational>& x, int max_n = 22);

enum class CutType { Type1, Type2, Violation };

struct BGoodCheck {
  bool good = true;
  std::vector<CutType> types;  // aligned with family.cuts
  std::vector<Rational> loads;
};

// Type1: load >= 3. Type2: load exactly 1 carried by a single edge of value 1.
BGoodCheck check_b_good(const std::vector<Rational>& y, const CutFamily& family);

struct BGoodPoint {
  std::vector<Rational> y;
  Rational value;
  // Type-2 cuts B_1 < ... < B_k (indices into the family) with their crossing
  // edges (v_i, u_i), v_i in B_i.
  std::vector<std::size_t> chain;
  std::vector<std::pair<Vertex, Vertex>> chain_edges;
  // x^0 .. x^k on the segments B_{i+1} - B_i, full edge vectors.
  std::vector<std::vector<Rational>> segments;
  std::size_t lp_solves = 0;  // LP(a) instances actually solved
};

// Minimum-cost family-good point of the Held-Karp polytope, as a shortest
// path over (cut, vertex) nodes whose segment arcs are priced lazily.
BGoodPoint compute_b_good_point(const Instance& inst, const CutFamily& family);

// Connected multigraph on supp(y) with r(V) - 1 edges, degrees at least
// 2r(v) - 1 (2r(v) - 2 at s and t) and at most one copy of each chain edge.
CompactMultigraph build_P(const Instance& inst, const BGoodPoint& point,
                          RoundingResult* details = nullptr);

// odd(P) xor {s, t}
std::vector<Vertex> parity_targets(const CompactMultigraph& P, const Instance& inst);

// Minimum-cost perfect matching on parity_targets(P).
std::vector<std::pair<Vertex, Vertex>> parity_matching(const CompactMultigraph& P,
                                                       const Instance& inst);

struct PipelineReport {
  Rational x_star_value;
  std::size_t b_family_size = 0;
  std::vector<std::vector<Vertex>> type2_chain;
  Rational y_value;
  Rational p_cost;
  Rational matching_cost;
  Rational final_cost;
  std::size_t lp_solves = 0;
  std::optional<Rational> oracle_cost;

  Json to_json() const;
};

// Path variant, s != t. Checks the cost chain of the analysis on every run
// and throws InternalError if any link fails.
TourSolution approx_15(const Instance& inst, PipelineReport* report = nullptr);

// Cycle variant through the split-endpoint path instance.
TourSolution mvtsp_15(const Instance& inst, PipelineReport* report = nullptr);

// The path instance used by mvtsp_15: vertex inst.s becomes s_v (same index)
// and t_v is appended as vertex n with request 1.
Instance split_cycle_instance(const Instance& inst);

}  // namespace mvtsp
