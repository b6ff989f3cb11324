#include "mvtsp/instance.hpp"

#include <numeric>

namespace mvtsp {

std::size_t edge_index(int n, Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  if (u < 0 || v >= n) throw StructuralError("vertex out of range");
  const auto uu = static_cast<std::size_t>(u);
  const std::size_t row_start = uu * static_cast<std::size_t>(n) - (uu * (uu + 1)) / 2 + uu;
  return row_start + static_cast<std::size_t>(v - u);
}

std::pair<Vertex, Vertex> edge_ends(int n, std::size_t id) {
  std::size_t start = 0;
  for (Vertex u = 0; u < n; ++u) {
    const auto row = static_cast<std::size_t>(n - u);
    if (id < start + row) return {u, u + static_cast<Vertex>(id - start)};
    start += row;
  }
  throw StructuralError("edge id out of range");
}

const Rational& Instance::edge_cost(std::size_t id) const {
  const auto [u, v] = edge_ends(n, id);
  return c(u, v);
}

Integer Instance::total_requests() const {
  Integer sum = 0;
  for (const auto& r : requests) sum += r;
  return sum;
}

bool operator==(const Instance& a, const Instance& b) {
  return a.n == b.n && a.cost == b.cost && a.requests == b.requests && a.s == b.s &&
         a.t == b.t;
}

void check_structure(const Instance& inst) {
  const int n = inst.n;
  if (n < 1) throw StructuralError("instance needs at least one vertex");
  if (inst.cost.size() != static_cast<std::size_t>(n) * n) {
    throw StructuralError("cost matrix must be n x n");
  }
  if (inst.requests.size() != static_cast<std::size_t>(n)) {
    throw StructuralError("request vector must have n entries");
  }
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (inst.c(u, v) < 0) {
        throw StructuralError("negative cost at (" + std::to_string(u) + "," +
                              std::to_string(v) + ")");
      }
      if (inst.c(u, v) != inst.c(v, u)) {
        throw StructuralError("cost matrix not symmetric at (" + std::to_string(u) + "," +
                              std::to_string(v) + ")");
      }
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (inst.requests[v] < 1) {
      throw StructuralError("request of vertex " + std::to_string(v) + " is below 1");
    }
  }
  if (inst.s < 0 || inst.s >= n) throw StructuralError("s out of range");
  if (inst.t) {
    if (*inst.t < 0 || *inst.t >= n) throw StructuralError("t out of range");
    if (*inst.t == inst.s) throw StructuralError("s and t must differ");
  }
}

MetricReport validate_metric(const Instance& inst) {
  check_structure(inst);
  MetricReport report;
  const int n = inst.n;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex w = u + 1; w < n; ++w) {
      for (Vertex v = 0; v < n; ++v) {
        if (v == u || v == w) continue;
        if (inst.c(u, w) > inst.c(u, v) + inst.c(v, w)) {
          report.triangle_violations.push_back({u, v, w});
        }
      }
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    bool has_other = false;
    Rational best;
    for (Vertex u = 0; u < n; ++u) {
      if (u == v) continue;
      if (!has_other || inst.c(u, v) < best) best = inst.c(u, v);
      has_other = true;
    }
    if (has_other && inst.c(v, v) > 2 * best) report.loop_violations.push_back(v);
  }
  return report;
}

void CompactMultigraph::set(Vertex u, Vertex v, const Integer& m) {
  set(edge_index(n_, u, v), m);
}

void CompactMultigraph::set(std::size_t id, const Integer& m) {
  if (m < 0) throw StructuralError("negative multiplicity");
  mult_.at(id) = m;
}

void CompactMultigraph::add(Vertex u, Vertex v, const Integer& m) {
  auto& slot = mult_[edge_index(n_, u, v)];
  slot += m;
  if (slot < 0) throw StructuralError("negative multiplicity");
}

Integer CompactMultigraph::total_edges() const {
  Integer sum = 0;
  for (const auto& m : mult_) sum += m;
  return sum;
}

std::vector<std::size_t> CompactMultigraph::support() const {
  std::vector<std::size_t> out;
  for (std::size_t id = 0; id < mult_.size(); ++id) {
    if (mult_[id] != 0) out.push_back(id);
  }
  return out;
}

Integer degree(const CompactMultigraph& g, Vertex v) {
  const int n = g.vertex_count();
  if (v < 0 || v >= n) throw StructuralError("vertex out of range");
  Integer d = 0;
  for (Vertex u = 0; u < n; ++u) {
    if (u == v) {
      d += 2 * g.mult(v, v);
    } else {
      d += g.mult(u, v);
    }
  }
  return d;
}

Rational cost_of(const CompactMultigraph& g, const Instance& inst) {
  Rational total = 0;
  for (std::size_t id : g.support()) total += Rational(g.mult(id)) * inst.edge_cost(id);
  return total;
}

bool support_spans_connected(const CompactMultigraph& g) {
  const int n = g.vertex_count();
  if (n <= 1) return true;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = n;
  for (std::size_t id : g.support()) {
    const auto [u, v] = edge_ends(n, id);
    const int a = find(u), b = find(v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

FeasibilityReport is_feasible_tour(const CompactMultigraph& g, const Instance& inst) {
  FeasibilityReport report;
  if (g.vertex_count() != inst.n) {
    report.feasible = false;
    report.problems.push_back("vertex count mismatch");
    return report;
  }
  for (Vertex v = 0; v < inst.n; ++v) {
    Integer want = 2 * inst.requests[v];
    if (inst.t && (v == inst.s || v == *inst.t)) want -= 1;
    const Integer got = degree(g, v);
    if (got != want) {
      report.feasible = false;
      report.problems.push_back("degree of vertex " + std::to_string(v) + " is " +
                                got.get_str() + ", expected " + want.get_str());
    }
  }
  if (!support_spans_connected(g)) {
    report.feasible = false;
    report.problems.push_back("support is not connected");
  }
  return report;
}

}  // namespace mvtsp
