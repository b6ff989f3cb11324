#include "mvtsp/walk.hpp"

#include <algorithm>

namespace mvtsp {

void add_cycle_edges(CompactMultigraph& g, const std::vector<Vertex>& cycle, const Integer& times) {
  const std::size_t k = cycle.size();
  if (k == 0) return;
  if (k == 1) {
    g.add(cycle[0], cycle[0], times);
    return;
  }
  for (std::size_t i = 0; i < k; ++i) g.add(cycle[i], cycle[(i + 1) % k], times);
}

CompactMultigraph recompose(const PathCycleDecomposition& d, int n) {
  CompactMultigraph g(n);
  for (std::size_t i = 0; i + 1 < d.path.size(); ++i) g.add(d.path[i], d.path[i + 1], 1);
  for (const auto& c : d.cycles) add_cycle_edges(g, c.vertices, c.multiplicity);
  return g;
}

namespace {

bool has_consecutive(const std::vector<Vertex>& c, Vertex a, Vertex b, std::size_t* at) {
  const std::size_t k = c.size();
  if (k < 2) return false;
  for (std::size_t i = 0; i < k; ++i) {
    const Vertex x = c[i], y = c[(i + 1) % k];
    if ((x == a && y == b) || (x == b && y == a)) {
      *at = i;
      return true;
    }
  }
  return false;
}

}  // namespace

PathCycleDecomposition decompose_path_cycles(const CompactMultigraph& g, Vertex s, Vertex t) {
  const int n = g.vertex_count();
  if (s < 0 || s >= n || t < 0 || t >= n) throw StructuralError("endpoint out of range");
  for (Vertex v = 0; v < n; ++v) {
    const bool odd = mpz_odd_p(degree(g, v).get_mpz_t()) != 0;
    const bool want_odd = (s != t) && (v == s || v == t);
    if (odd != want_odd) {
      throw InfeasibleError("parity violation at vertex " + std::to_string(v) + ": degree is " +
                            (odd ? "odd" : "even"));
    }
  }

  std::vector<Integer> rest = g.multiplicities();
  if (s != t) rest[edge_index(n, s, t)] += 1;

  PathCycleDecomposition out;
  for (Vertex v = 0; v < n; ++v) {
    auto& m = rest[edge_index(n, v, v)];
    if (m > 0) {
      out.cycles.push_back({{v}, m});
      m = 0;
    }
  }
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      auto& m = rest[edge_index(n, u, v)];
      if (m >= 2) {
        Integer pairs = m / 2;
        out.cycles.push_back({{u, v}, pairs});
        m -= 2 * pairs;
      }
    }
  }

  // Remaining regular edges have multiplicity 0/1 and every degree is even.
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  std::vector<int> deg(n, 0);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (rest[edge_index(n, u, v)] != 0) {
        adj[u][v] = adj[v][u] = true;
        ++deg[u];
        ++deg[v];
      }
    }
  }
  std::vector<int> position(n, -1);
  for (Vertex start = 0; start < n; ++start) {
    while (deg[start] > 0) {
      std::vector<Vertex> stack{start};
      position[start] = 0;
      while (!stack.empty()) {
        const Vertex v = stack.back();
        Vertex w = -1;
        for (Vertex x = 0; x < n; ++x) {
          if (adj[v][x]) {
            w = x;
            break;
          }
        }
        if (w < 0) {
          MVTSP_CHECK(stack.size() == 1, "cycle walk got stuck");
          position[v] = -1;
          stack.pop_back();
          break;
        }
        adj[v][w] = adj[w][v] = false;
        --deg[v];
        --deg[w];
        if (position[w] >= 0) {
          const auto p = static_cast<std::size_t>(position[w]);
          std::vector<Vertex> cyc(stack.begin() + static_cast<std::ptrdiff_t>(p), stack.end());
          out.cycles.push_back({cyc, 1});
          for (std::size_t i = p + 1; i < stack.size(); ++i) position[stack[i]] = -1;
          stack.resize(p + 1);
        } else {
          position[w] = static_cast<int>(stack.size());
          stack.push_back(w);
        }
      }
    }
  }

  if (s == t) {
    out.path = {s};
    return out;
  }
  for (std::size_t ci = 0; ci < out.cycles.size(); ++ci) {
    std::size_t at = 0;
    const auto& c = out.cycles[ci].vertices;
    if (!has_consecutive(c, s, t, &at)) continue;
    const std::size_t k = c.size();
    std::vector<Vertex> walk;
    for (std::size_t j = 1; j <= k; ++j) walk.push_back(c[(at + j) % k]);
    if (walk.front() != s) std::reverse(walk.begin(), walk.end());
    out.path = std::move(walk);
    out.cycles[ci].multiplicity -= 1;
    if (out.cycles[ci].multiplicity == 0) {
      out.cycles.erase(out.cycles.begin() + static_cast<std::ptrdiff_t>(ci));
    }
    return out;
  }
  throw InternalError("no cycle carries the s-t edge");
}

MergeResult eulerian_merge(const PathCycleDecomposition& d, int n, bool require_connected) {
  if (d.path.empty()) throw StructuralError("decomposition has an empty path");
  std::vector<std::vector<std::size_t>> through(n);
  for (std::size_t ci = 0; ci < d.cycles.size(); ++ci) {
    if (d.cycles[ci].vertices.empty()) throw StructuralError("empty cycle");
    for (Vertex v : d.cycles[ci].vertices) {
      if (through[v].empty() || through[v].back() != ci) through[v].push_back(ci);
    }
  }
  std::vector<bool> seen(n, false), used(d.cycles.size(), false);
  MergeResult result;
  auto& items = result.order.items;

  auto has_pending = [&](Vertex x) {
    return std::any_of(through[x].begin(), through[x].end(),
                       [&](std::size_t c) { return !used[c]; });
  };

  // Recursion depth is bounded by the number of cycles.
  auto visit = [&](auto&& self, Vertex v) -> void {
    items.emplace_back(Visit{v});
    if (seen[v]) return;
    seen[v] = true;
    for (std::size_t ci : through[v]) {
      if (used[ci]) continue;
      used[ci] = true;
      const auto& cyc = d.cycles[ci].vertices;
      const auto root = static_cast<std::size_t>(std::find(cyc.begin(), cyc.end(), v) - cyc.begin());
      std::vector<Vertex> rotation;
      for (std::size_t j = 0; j < cyc.size(); ++j) rotation.push_back(cyc[(root + j) % cyc.size()]);
      bool nested = false;
      for (std::size_t j = 1; j < rotation.size(); ++j) {
        if (!seen[rotation[j]] && has_pending(rotation[j])) nested = true;
      }
      const Integer& mu = d.cycles[ci].multiplicity;
      if (!nested) {
        for (Vertex x : rotation) seen[x] = true;
        items.emplace_back(Repeat{rotation, mu});
        continue;
      }
      for (std::size_t j = 1; j < rotation.size(); ++j) self(self, rotation[j]);
      items.emplace_back(Visit{v});
      if (mu > 1) items.emplace_back(Repeat{rotation, mu - 1});
    }
  };

  for (Vertex v : d.path) visit(visit, v);
  for (std::size_t ci = 0; ci < d.cycles.size(); ++ci) {
    if (!used[ci]) result.detached_cycles.push_back(ci);
  }
  if (require_connected && !result.detached_cycles.empty()) {
    throw InfeasibleError("cycle " + std::to_string(result.detached_cycles.front()) +
                          " does not touch the walk");
  }
  return result;
}

CompactMultigraph order_multigraph(const SymbolicOrder& order, int n) {
  CompactMultigraph g(n);
  std::optional<Vertex> prev;
  for (const auto& item : order.items) {
    if (const auto* visit = std::get_if<Visit>(&item)) {
      if (prev) g.add(*prev, visit->vertex, 1);
      prev = visit->vertex;
    } else {
      const auto& rep = std::get<Repeat>(item);
      if (!prev || rep.rotation.empty() || rep.rotation.front() != *prev) {
        throw StructuralError("repeat block is not rooted at the preceding visit");
      }
      add_cycle_edges(g, rep.rotation, rep.times);
    }
  }
  return g;
}

std::vector<Integer> visit_counts(const SymbolicOrder& order, int n) {
  std::vector<Integer> counts(n);
  for (const auto& item : order.items) {
    if (const auto* visit = std::get_if<Visit>(&item)) {
      counts[visit->vertex] += 1;
    } else {
      const auto& rep = std::get<Repeat>(item);
      for (Vertex x : rep.rotation) counts[x] += rep.times;
    }
  }
  return counts;
}

std::vector<Vertex> expand(const SymbolicOrder& order) {
  std::vector<Vertex> seq;
  for (const auto& item : order.items) {
    if (const auto* visit = std::get_if<Visit>(&item)) {
      seq.push_back(visit->vertex);
    } else {
      const auto& rep = std::get<Repeat>(item);
      for (Integer k = 0; k < rep.times; ++k) {
        for (std::size_t j = 1; j < rep.rotation.size(); ++j) seq.push_back(rep.rotation[j]);
        seq.push_back(rep.rotation[0]);
      }
    }
  }
  return seq;
}

namespace {

void push_copy(std::vector<OrderItem>& items, const std::vector<Vertex>& rotation) {
  for (std::size_t j = 1; j < rotation.size(); ++j) items.emplace_back(Visit{rotation[j]});
  items.emplace_back(Visit{rotation[0]});
}

}  // namespace

TourSolution shortcut(const SymbolicOrder& order, const Instance& inst) {
  const int n = inst.n;
  const Vertex s = inst.s;
  const Vertex t = inst.t.value_or(inst.s);
  if (order.items.empty() || !std::holds_alternative<Visit>(order.items.front()) ||
      std::get<Visit>(order.items.front()).vertex != s) {
    throw StructuralError("walk must start with a visit of s");
  }
  std::vector<OrderItem> items = order.items;
  if (auto* rep = std::get_if<Repeat>(&items.back())) {
    // Make the final occurrence an explicit visit.
    Repeat last = *rep;
    items.pop_back();
    if (last.times > 1) items.emplace_back(Repeat{last.rotation, last.times - 1});
    push_copy(items, last.rotation);
  }
  if (std::get<Visit>(items.back()).vertex != t) throw StructuralError("walk must end at t");

  const std::vector<Integer> counts = visit_counts(SymbolicOrder{items}, n);
  std::vector<Integer> gamma(n);
  Integer surplus = 0;
  for (Vertex v = 0; v < n; ++v) {
    gamma[v] = counts[v] - inst.requests[v];
    if (gamma[v] < 0) {
      throw InfeasibleError("vertex " + std::to_string(v) + " is visited " + counts[v].get_str() +
                            " times, fewer than its request " + inst.requests[v].get_str());
    }
    surplus += gamma[v];
  }
  if (surplus > 2 * n + 2) {
    throw CapabilityError("shortcut surplus " + surplus.get_str() + " exceeds 2n+2");
  }

  std::vector<OrderItem> reversed;
  auto scan_visit = [&](Vertex v, bool protect) {
    if (!protect && gamma[v] > 0) {
      gamma[v] -= 1;
      return;
    }
    reversed.emplace_back(Visit{v});
  };
  for (std::size_t i = items.size(); i-- > 0;) {
    if (const auto* visit = std::get_if<Visit>(&items[i])) {
      scan_visit(visit->vertex, i == 0 || i + 1 == items.size());
      continue;
    }
    const auto& rep = std::get<Repeat>(items[i]);
    Integer j = 0;
    for (Vertex x : rep.rotation) j = std::max(j, Integer(std::min(gamma[x], rep.times)));
    if (j == 0) {
      reversed.push_back(rep);
      continue;
    }
    std::vector<OrderItem> tail;
    for (Integer k = 0; k < j; ++k) push_copy(tail, rep.rotation);
    for (std::size_t q = tail.size(); q-- > 0;) scan_visit(std::get<Visit>(tail[q]).vertex, false);
    if (rep.times > j) reversed.emplace_back(Repeat{rep.rotation, rep.times - j});
  }
  std::reverse(reversed.begin(), reversed.end());

  TourSolution sol;
  sol.order.items = std::move(reversed);
  sol.multigraph = order_multigraph(sol.order, n);
  sol.decomposition = decompose_path_cycles(sol.multigraph, s, t);
  sol.total_cost = cost_of(sol.multigraph, inst);
  return sol;
}

}  // namespace mvtsp
