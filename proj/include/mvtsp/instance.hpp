#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvtsp/arith.hpp"

namespace mvtsp {

using Vertex = int;

// Edges of the complete graph with self-loops, {u,v} with u <= v, numbered
// row by row: (0,0), (0,1), ..., (0,n-1), (1,1), ...
inline std::size_t edge_count(int n) {
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2;
}
std::size_t edge_index(int n, Vertex u, Vertex v);
std::pair<Vertex, Vertex> edge_ends(int n, std::size_t id);

struct Instance {
  int n = 0;
  std::vector<Rational> cost;  // row-major n x n, symmetric
  std::vector<Integer> requests;
  Vertex s = 0;
  std::optional<Vertex> t;

  const Rational& c(Vertex u, Vertex v) const {
    return cost[static_cast<std::size_t>(u) * n + v];
  }
  const Rational& edge_cost(std::size_t id) const;
  Integer total_requests() const;
  bool is_path_variant() const { return t.has_value(); }

  // Cost matrix with entries given by f(u, v) for u <= v (mirrored).
  template <typename F>
  static std::vector<Rational> symmetric_costs(int n, F f) {
    std::vector<Rational> out(static_cast<std::size_t>(n) * n);
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u; v < n; ++v) {
        out[static_cast<std::size_t>(u) * n + v] = f(u, v);
        out[static_cast<std::size_t>(v) * n + u] = out[static_cast<std::size_t>(u) * n + v];
      }
    }
    return out;
  }
};

bool operator==(const Instance& a, const Instance& b);

// Throws StructuralError on shape problems, asymmetry, negative costs,
// non-positive requests, or bad endpoints.
void check_structure(const Instance& inst);

struct MetricReport {
  // (u, v, w) with cost(u,w) > cost(u,v) + cost(v,w), u < w, v distinct.
  std::vector<std::array<Vertex, 3>> triangle_violations;
  // v with cost(v,v) > 2 min_{u != v} cost(u,v).
  std::vector<Vertex> loop_violations;
  bool ok() const { return triangle_violations.empty() && loop_violations.empty(); }
};

MetricReport validate_metric(const Instance& inst);

class CompactMultigraph {
 public:
  CompactMultigraph() = default;
  explicit CompactMultigraph(int n) : n_(n), mult_(edge_count(n)) {}

  int vertex_count() const { return n_; }
  std::size_t size() const { return mult_.size(); }

  const Integer& mult(Vertex u, Vertex v) const { return mult_[edge_index(n_, u, v)]; }
  const Integer& mult(std::size_t id) const { return mult_[id]; }
  void set(Vertex u, Vertex v, const Integer& m);
  void set(std::size_t id, const Integer& m);
  void add(Vertex u, Vertex v, const Integer& m);

  Integer total_edges() const;
  std::vector<std::size_t> support() const;
  std::size_t support_size() const { return support().size(); }

  const std::vector<Integer>& multiplicities() const { return mult_; }

  friend bool operator==(const CompactMultigraph& a, const CompactMultigraph& b) {
    return a.n_ == b.n_ && a.mult_ == b.mult_;
  }

 private:
  int n_ = 0;
  std::vector<Integer> mult_;
};

// Sum of incident multiplicities, loops counted twice.
Integer degree(const CompactMultigraph& g, Vertex v);

Rational cost_of(const CompactMultigraph& g, const Instance& inst);

// Connected support that touches every vertex (a single vertex counts as
// connected on its own).
bool support_spans_connected(const CompactMultigraph& g);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> problems;
};

// Degree 2r(v), 2r(v)-1 at s and t for the path variant; 2r(v) everywhere
// for the cycle variant. Support must be connected.
FeasibilityReport is_feasible_tour(const CompactMultigraph& g, const Instance& inst);

}  // namespace mvtsp
