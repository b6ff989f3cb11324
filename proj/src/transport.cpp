#include "mvtsp/transport.hpp"

#include <algorithm>

namespace mvtsp {

TransportationInstance transportation_for(const Instance& inst) {
  check_structure(inst);
  TransportationInstance tp;
  tp.n = inst.n;
  tp.supply = inst.requests;
  tp.demand = inst.requests;
  tp.cost = inst.cost;
  if (inst.t) {
    tp.supply[inst.s] -= 1;
    tp.demand[*inst.t] -= 1;
  }
  return tp;
}

namespace {

// Nodes 0..n-1 are supply nodes a_u, n..2n-1 demand nodes b_v. Arcs a_u -> b_v
// are uncapacitated with cost c(u,v). Artificial uncapacitated arcs b_v -> a_u
// of cost M make every node reach every other; M exceeds the cost of any
// simple cycle of real arcs, so an optimal flow never uses them.
class ScalingFlow {
 public:
  explicit ScalingFlow(const TransportationInstance& tp)
      : n_(tp.n), cost_(tp.cost), x_(static_cast<std::size_t>(n_) * n_),
        y_(static_cast<std::size_t>(n_) * n_), excess_(2 * n_), pi_(2 * n_) {
    big_ = 1;
    for (const auto& c : cost_) big_ += c;
    for (int u = 0; u < n_; ++u) {
      excess_[u] = tp.supply[u];
      excess_[n_ + u] = -tp.demand[u];
    }
  }

  void run() {
    Integer top = 0;
    for (const auto& e : excess_) top = std::max(top, Integer(abs(e)));
    if (top == 0) return;
    Integer delta = 1;
    while (2 * delta <= top) delta *= 2;
    for (; delta >= 1; delta /= 2) {
      saturate_negative_reverse_arcs(delta);
      while (true) {
        int k = -1, l = -1;
        for (int i = 0; i < 2 * n_; ++i) {
          if (k < 0 && excess_[i] >= delta) k = i;
          if (l < 0 && excess_[i] <= -delta) l = i;
        }
        if (k < 0 || l < 0) break;
        augment(k, l, delta);
      }
    }
    for (const auto& e : excess_) MVTSP_CHECK(e == 0, "flow left an imbalance");
    for (const auto& y : y_) MVTSP_CHECK(y == 0, "optimal flow uses an artificial arc");
  }

  const std::vector<Integer>& flow() const { return x_; }

 private:
  // Arc kinds between a_u and b_v.
  enum Kind { kForward, kArtificial, kReverseForward, kReverseArtificial };

  std::size_t idx(int u, int v) const { return static_cast<std::size_t>(u) * n_ + v; }
  const Rational& c(int u, int v) const { return cost_[idx(u, v)]; }

  // Cheapest usable arc i -> j in G(x, delta), returned with its kind.
  bool arc(int i, int j, const Integer& delta, Rational* len, Kind* kind) const {
    if (i < n_ && j >= n_) {
      const int u = i, v = j - n_;
      *len = c(u, v);
      *kind = kForward;
      if (y_[idx(u, v)] >= delta && -big_ < *len) {
        *len = -big_;
        *kind = kReverseArtificial;
      }
      return true;
    }
    if (i >= n_ && j < n_) {
      const int v = i - n_, u = j;
      *len = big_;
      *kind = kArtificial;
      if (x_[idx(u, v)] >= delta && -c(u, v) < *len) {
        *len = -c(u, v);
        *kind = kReverseForward;
      }
      return true;
    }
    return false;
  }

  void apply(int i, int j, Kind kind, const Integer& amount) {
    const int u = i < n_ ? i : j;
    const int v = (i < n_ ? j : i) - n_;
    switch (kind) {
      case kForward: x_[idx(u, v)] += amount; break;
      case kArtificial: y_[idx(u, v)] += amount; break;
      case kReverseForward: x_[idx(u, v)] -= amount; break;
      case kReverseArtificial: y_[idx(u, v)] -= amount; break;
    }
  }

  // Reverse arcs entering G(x, delta) with negative reduced cost are
  // saturated, which moves their flow back into the node excesses.
  void saturate_negative_reverse_arcs(const Integer& delta) {
    for (int u = 0; u < n_; ++u) {
      for (int v = 0; v < n_; ++v) {
        const int a = u, b = n_ + v;
        const Integer xv = x_[idx(u, v)];
        if (xv >= delta && -c(u, v) - pi_[b] + pi_[a] < 0) {
          x_[idx(u, v)] = 0;
          excess_[a] += xv;
          excess_[b] -= xv;
        }
        const Integer yv = y_[idx(u, v)];
        if (yv >= delta && -big_ - pi_[a] + pi_[b] < 0) {
          y_[idx(u, v)] = 0;
          excess_[b] += yv;
          excess_[a] -= yv;
        }
      }
    }
  }

  void augment(int k, int l, const Integer& delta) {
    const int nodes = 2 * n_;
    std::vector<Rational> dist(nodes);
    std::vector<bool> reached(nodes, false), done(nodes, false);
    std::vector<int> pred(nodes, -1);
    std::vector<Kind> pred_kind(nodes, kForward);
    reached[k] = true;
    dist[k] = 0;
    Rational len;
    Kind kind;
    for (int step = 0; step < nodes; ++step) {
      int i = -1;
      for (int j = 0; j < nodes; ++j) {
        if (reached[j] && !done[j] && (i < 0 || dist[j] < dist[i])) i = j;
      }
      if (i < 0) break;
      done[i] = true;
      for (int j = 0; j < nodes; ++j) {
        if (done[j] || !arc(i, j, delta, &len, &kind)) continue;
        const Rational reduced = len - pi_[i] + pi_[j];
        MVTSP_CHECK(sgn(reduced) >= 0, "negative reduced cost in scaling phase");
        const Rational cand = dist[i] + reduced;
        if (!reached[j] || cand < dist[j]) {
          reached[j] = true;
          dist[j] = cand;
          pred[j] = i;
          pred_kind[j] = kind;
        }
      }
    }
    for (int j = 0; j < nodes; ++j) {
      MVTSP_CHECK(reached[j], "residual network is not strongly connected");
      pi_[j] -= dist[j];
    }
    for (int j = l; j != k; j = pred[j]) apply(pred[j], j, pred_kind[j], delta);
    excess_[k] -= delta;
    excess_[l] += delta;
  }

  int n_;
  std::vector<Rational> cost_;
  Rational big_;
  std::vector<Integer> x_, y_;
  std::vector<Integer> excess_;
  std::vector<Rational> pi_;
};

}  // namespace

TransportationSolution solve_transportation(const TransportationInstance& tp) {
  const int n = tp.n;
  if (tp.supply.size() != static_cast<std::size_t>(n) || tp.demand.size() != static_cast<std::size_t>(n) ||
      tp.cost.size() != static_cast<std::size_t>(n) * n) {
    throw StructuralError("transportation instance has inconsistent sizes");
  }
  Integer total_supply = 0, total_demand = 0;
  for (int v = 0; v < n; ++v) {
    if (tp.supply[v] < 0 || tp.demand[v] < 0) throw StructuralError("negative supply or demand");
    total_supply += tp.supply[v];
    total_demand += tp.demand[v];
  }
  if (total_supply != total_demand) {
    throw StructuralError("unbalanced transportation instance: supply " + total_supply.get_str() +
                          " vs demand " + total_demand.get_str());
  }
  for (const auto& c : tp.cost) {
    if (c < 0) throw StructuralError("negative transportation cost");
  }
  ScalingFlow flow(tp);
  flow.run();
  TransportationSolution sol;
  sol.flow = flow.flow();
  sol.graph = CompactMultigraph(n);
  sol.cost = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      const Integer& f = sol.flow[static_cast<std::size_t>(u) * n + v];
      if (f == 0) continue;
      sol.graph.add(u, v, f);
      sol.cost += Rational(f) * tp.cost[static_cast<std::size_t>(u) * n + v];
    }
  }
  return sol;
}

std::vector<Vertex> hamiltonian_sequence(const CompactMultigraph& path, Vertex s, Vertex t) {
  const int n = path.vertex_count();
  if (path.total_edges() != n - 1) throw StructuralError("single-visit path must have n-1 edges");
  for (Vertex v = 0; v < n; ++v) {
    const Integer want = (v == s || v == t) ? 1 : 2;
    if (degree(path, v) != want || path.mult(v, v) != 0) {
      throw StructuralError("single-visit path has a wrong degree at vertex " + std::to_string(v));
    }
  }
  if (!support_spans_connected(path)) throw StructuralError("single-visit path is disconnected");
  const auto d = decompose_path_cycles(path, s, t);
  MVTSP_CHECK(d.cycles.empty() && d.path.size() == static_cast<std::size_t>(n),
              "Hamiltonian path decomposition");
  return d.path;
}

TourSolution approx_25(const Instance& inst, const CompactMultigraph& single_visit_path) {
  check_structure(inst);
  if (!inst.t) throw StructuralError("approx_25 needs endpoints s != t");
  const Vertex s = inst.s, t = *inst.t;
  const auto sequence = hamiltonian_sequence(single_visit_path, s, t);
  const auto tp = solve_transportation(transportation_for(inst));
  const auto tp_parts = decompose_path_cycles(tp.graph, s, t);

  PathCycleDecomposition combined;
  combined.path = sequence;
  combined.cycles = tp_parts.cycles;
  const auto merged = eulerian_merge(combined, inst.n);
  TourSolution sol = shortcut(merged.order, inst);
  MVTSP_CHECK(sol.total_cost <= cost_of(single_visit_path, inst) + tp.cost,
              "5/2 output exceeds path plus transportation cost");
  MVTSP_CHECK(is_feasible_tour(sol.multigraph, inst).feasible, "5/2 output is not a tour");
  return sol;
}

}  // namespace mvtsp
