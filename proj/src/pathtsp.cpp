#include "mvtsp/pathtsp.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "mvtsp/graphic.hpp"
#include "mvtsp/matching.hpp"

namespace mvtsp {

namespace {

std::uint32_t full_mask(int n) { return n >= 32 ? ~0u : ((1u << n) - 1u); }

std::vector<Vertex> mask_members(std::uint32_t mask, int n) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < n; ++v) {
    if ((mask >> v) & 1u) out.push_back(v);
  }
  return out;
}

Rational mask_load(int n, const std::vector<Rational>& x, std::uint32_t mask) {
  Rational load = 0;
  for (std::size_t id = 0; id < x.size(); ++id) {
    if (sgn(x[id]) == 0) continue;
    const auto [a, b] = edge_ends(n, id);
    if (((mask >> a) & 1u) != ((mask >> b) & 1u)) load += x[id];
  }
  return load;
}

Rational dot(const Instance& inst, const std::vector<Rational>& x) {
  Rational total = 0;
  for (std::size_t id = 0; id < x.size(); ++id) {
    if (sgn(x[id]) != 0) total += inst.edge_cost(id) * x[id];
  }
  return total;
}

void require_path_instance(const Instance& inst, const char* what) {
  check_structure(inst);
  if (!inst.t || *inst.t == inst.s) throw StructuralError(std::string(what) + " needs endpoints s != t");
}

// Nodes of the auxiliary digraph. cut = -1 is the empty set, -2 is V.
struct DpNode {
  int cut;
  Vertex w;
  bool plus;  // w outside the cut
};

struct HeapEntry {
  Rational key;
  int kind;  // 0 settles node a (reached from b), 1 prices arc a -> b
  int a;
  int b;
  bool operator>(const HeapEntry& o) const {
    if (key != o.key) return key > o.key;
    if (kind != o.kind) return kind > o.kind;
    if (a != o.a) return a > o.a;
    return b > o.b;
  }
};

class BGoodSearch {
 public:
  BGoodSearch(const Instance& inst, const CutFamily& family) : inst_(inst), family_(family) {
    n_ = inst.n;
    nodes_.push_back({-1, inst.s, true});
    nodes_.push_back({-2, *inst.t, false});
    for (std::size_t i = 0; i < family.cuts.size(); ++i) {
      for (Vertex w = 0; w < n_; ++w) {
        nodes_.push_back({static_cast<int>(i), w, !family.cuts[i].contains(w)});
      }
    }
  }

  BGoodPoint run() {
    const std::size_t count = nodes_.size();
    std::vector<bool> settled(count, false);
    std::vector<Rational> dist(count);
    std::vector<int> parent(count, -1);
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap;
    heap.push({Rational(0), 0, 0, -1});
    while (!heap.empty()) {
      HeapEntry e = heap.top();
      heap.pop();
      if (e.kind == 1) {
        if (settled[e.b]) continue;
        if (auto len = price(e.a, e.b)) heap.push({dist[e.a] + *len, 0, e.b, e.a});
        continue;
      }
      if (settled[e.a]) continue;
      settled[e.a] = true;
      dist[e.a] = e.key;
      parent[e.a] = e.b;
      if (e.a == 1) break;
      const DpNode& node = nodes_[e.a];
      if (node.plus) {
        const std::uint32_t bp = mask(node.cut);
        for (std::size_t m = 1; m < count; ++m) {
          const DpNode& head = nodes_[m];
          if (head.plus || settled[m]) continue;
          const std::uint32_t bm = mask(head.cut);
          if ((bp & ~bm) != 0 || bp == bm) continue;
          if (!((bm >> node.w) & 1u) || ((bp >> head.w) & 1u)) continue;
          const auto lb = lower_bound(bm & ~bp, node.w, head.w);
          if (!lb) continue;
          heap.push({e.key + *lb, 1, e.a, static_cast<int>(m)});
        }
      } else {
        for (std::size_t p = 2; p < count; ++p) {
          const DpNode& head = nodes_[p];
          if (!head.plus || head.cut != node.cut || settled[p]) continue;
          heap.push({e.key + inst_.c(node.w, head.w), 0, static_cast<int>(p), e.a});
        }
      }
    }
    if (!settled[1]) throw InternalError("no finite path in the cut digraph");

    std::vector<int> path;
    for (int v = 1; v != -1; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    MVTSP_CHECK(path.front() == 0 && path.size() % 2 == 0, "cut digraph path has the wrong shape");

    BGoodPoint out;
    out.y.assign(edge_count(n_), Rational(0));
    for (std::size_t i = 0; i + 1 < path.size(); i += 2) {
      const auto& seg = segments_.at({path[i], path[i + 1]});
      for (std::size_t id = 0; id < seg.size(); ++id) out.y[id] += seg[id];
      out.segments.push_back(seg);
      if (i + 2 < path.size()) {
        const DpNode& m = nodes_[path[i + 1]];
        const DpNode& p = nodes_[path[i + 2]];
        MVTSP_CHECK(m.cut == p.cut && m.cut >= 0, "chain step leaves its cut");
        out.chain.push_back(static_cast<std::size_t>(m.cut));
        out.chain_edges.emplace_back(m.w, p.w);
        out.y[edge_index(n_, m.w, p.w)] += 1;
      }
    }
    out.value = dist[1];
    out.lp_solves = lp_solves_;
    return out;
  }

 private:
  std::uint32_t mask(int cut) const {
    if (cut == -1) return 0;
    if (cut == -2) return full_mask(n_);
    return family_.cuts[cut].mask;
  }

  Integer target(Vertex w, Vertex u, Vertex v) const {
    Integer d = 2 * inst_.requests[w];
    if (w == u) d -= 1;
    if (w == v) d -= 1;
    return d;
  }

  // Degree-based bound on OPT(LP(a)); nullopt when LP(a) is known empty.
  std::optional<Rational> lower_bound(std::uint32_t wmask, Vertex u, Vertex v) const {
    const auto W = mask_members(wmask, n_);
    if (u == v && inst_.requests[u] == 1 && W.size() > 1) return std::nullopt;
    Rational lb = 0;
    for (Vertex w : W) {
      std::optional<Rational> cheapest;
      for (Vertex x : W) {
        if (!cheapest || inst_.c(w, x) < *cheapest) cheapest = inst_.c(w, x);
      }
      lb += Rational(target(w, u, v)) * *cheapest / 2;
    }
    return lb;
  }

  std::optional<Rational> price(int tail, int head) {
    const DpNode& p = nodes_[tail];
    const DpNode& m = nodes_[head];
    const std::uint32_t bp = mask(p.cut), bm = mask(m.cut);
    HeldKarpFamily f;
    f.W = mask_members(bm & ~bp, n_);
    f.u = p.w;
    f.v = m.w;
    if (f.u != f.v) {
      for (const auto& B : family_.cuts) {
        if ((bp & ~B.mask) != 0 || (B.mask & ~bm) != 0 || B.mask == bp || B.mask == bm) continue;
        if (B.contains(f.u) && !B.contains(f.v)) f.three_cuts.push_back(mask_members(B.mask & ~bp, n_));
      }
    }
    ++lp_solves_;
    try {
      HeldKarpPoint pt = solve_held_karp_family(inst_, f);
      segments_[{tail, head}] = std::move(pt.x);
      return pt.value;
    } catch (const InfeasibleError&) {
      return std::nullopt;
    }
  }

  const Instance& inst_;
  const CutFamily& family_;
  int n_ = 0;
  std::vector<DpNode> nodes_;
  std::map<std::pair<int, int>, std::vector<Rational>> segments_;
  std::size_t lp_solves_ = 0;
};

void check_in_held_karp(const Instance& inst, const std::vector<Rational>& y) {
  const int n = inst.n;
  std::vector<Rational> deg(n);
  for (std::size_t id = 0; id < y.size(); ++id) {
    MVTSP_CHECK(sgn(y[id]) >= 0, "negative coordinate in y");
    const auto [a, b] = edge_ends(n, id);
    deg[a] += y[id];
    deg[b] += y[id];
  }
  for (Vertex v = 0; v < n; ++v) {
    Integer want = 2 * inst.requests[v];
    if (v == inst.s || v == *inst.t) want -= 1;
    MVTSP_CHECK(deg[v] == Rational(want), "y misses a degree constraint");
  }
  HeldKarpFamily f;
  for (Vertex v = 0; v < n; ++v) f.W.push_back(v);
  f.u = inst.s;
  f.v = *inst.t;
  std::vector<std::size_t> all(y.size());
  for (std::size_t id = 0; id < all.size(); ++id) all[id] = id;
  MVTSP_CHECK(separate_held_karp_cuts(inst, f, all, y).empty(), "y violates a cut constraint");
}

Json rational_json(const Rational& q) { return q.get_str(); }

}  // namespace

std::vector<Vertex> LowCut::members() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < 32; ++v) {
    if ((mask >> v) & 1u) out.push_back(v);
  }
  return out;
}

CutFamily enumerate_low_cuts(const Instance& inst, const std::vector<Rational>& x, int max_n) {
  require_path_instance(inst, "enumerate_low_cuts");
  const int n = inst.n;
  if (n > max_n || n > 31) {
    throw CapabilityError("cut enumeration limited to n <= " + std::to_string(std::min(max_n, 31)));
  }
  if (x.size() != edge_count(n)) throw StructuralError("edge vector has the wrong length");
  const Vertex s = inst.s, t = *inst.t;
  std::vector<Vertex> free;
  for (Vertex v = 0; v < n; ++v) {
    if (v != s && v != t) free.push_back(v);
  }
  CutFamily family;
  family.n = n;
  for (std::uint32_t sub = 0; sub < (1u << free.size()); ++sub) {
    std::uint32_t mask = 1u << s;
    for (std::size_t i = 0; i < free.size(); ++i) {
      if ((sub >> i) & 1u) mask |= 1u << free[i];
    }
    Rational load = mask_load(n, x, mask);
    if (load < 3) family.cuts.push_back({mask, std::move(load)});
  }
  std::sort(family.cuts.begin(), family.cuts.end(), [](const LowCut& a, const LowCut& b) { return a.mask < b.mask; });
  const Integer bound = Integer(n) * n * n * n;
  MVTSP_CHECK(Integer(static_cast<unsigned long>(family.cuts.size())) <= bound, "more than n^4 low cuts");
  return family;
}

BGoodCheck check_b_good(const std::vector<Rational>& y, const CutFamily& family) {
  const int n = family.n;
  BGoodCheck out;
  for (const auto& cut : family.cuts) {
    Rational load = 0;
    bool integral = true;
    for (std::size_t id = 0; id < y.size(); ++id) {
      const auto [a, b] = edge_ends(n, id);
      if (cut.contains(a) == cut.contains(b) || sgn(y[id]) == 0) continue;
      load += y[id];
      if (y[id].get_den() != 1) integral = false;
    }
    CutType type = CutType::Violation;
    if (load >= 3) {
      type = CutType::Type1;
    } else if (load == 1 && integral) {
      type = CutType::Type2;
    }
    if (type == CutType::Violation) out.good = false;
    out.types.push_back(type);
    out.loads.push_back(std::move(load));
  }
  return out;
}

BGoodPoint compute_b_good_point(const Instance& inst, const CutFamily& family) {
  require_path_instance(inst, "compute_b_good_point");
  if (family.n != inst.n) throw StructuralError("cut family built for another vertex count");
  for (const auto& cut : family.cuts) {
    if (!cut.contains(inst.s) || cut.contains(*inst.t)) throw StructuralError("family member is not an s-t cut");
  }
  BGoodPoint out = BGoodSearch(inst, family).run();

  MVTSP_CHECK(dot(inst, out.y) == out.value, "c.y differs from the shortest path length");
  for (std::size_t i = 1; i < out.chain.size(); ++i) {
    const auto a = family.cuts[out.chain[i - 1]].mask, b = family.cuts[out.chain[i]].mask;
    MVTSP_CHECK((a & ~b) == 0 && a != b, "Type-2 cuts do not form a chain");
  }
  check_in_held_karp(inst, out.y);
  const auto check = check_b_good(out.y, family);
  MVTSP_CHECK(check.good, "y is not good for the family");
  for (std::size_t i = 0; i < family.cuts.size(); ++i) {
    const bool in_chain = std::find(out.chain.begin(), out.chain.end(), i) != out.chain.end();
    MVTSP_CHECK(in_chain == (check.types[i] == CutType::Type2), "Type-2 cuts differ from the chain");
  }
  return out;
}

CompactMultigraph build_P(const Instance& inst, const BGoodPoint& point, RoundingResult* details) {
  require_path_instance(inst, "build_P");
  const int n = inst.n;
  const std::size_t m = edge_count(n);
  if (point.y.size() != m) throw StructuralError("y has the wrong length");
  std::vector<Integer> rho(n);
  for (Vertex v = 0; v < n; ++v) {
    rho[v] = 2 * inst.requests[v];
    if (v == inst.s || v == *inst.t) rho[v] -= 1;
  }
  Box box;
  box.upper.assign(m, std::nullopt);
  for (std::size_t id = 0; id < m; ++id) {
    if (sgn(point.y[id]) == 0) box.upper[id] = Integer(0);
  }
  for (auto [v, u] : point.chain_edges) box.upper[edge_index(n, v, u)] = Integer(1);
  std::vector<Rational> cost(m);
  for (std::size_t id = 0; id < m; ++id) cost[id] = inst.edge_cost(id);
  CompactMultigraph P = bounded_degree_connected_multigraph(n, cost, rho, box, details);
  MVTSP_CHECK(cost_of(P, inst) <= dot(inst, point.y), "c(P) exceeds c.y");
  return P;
}

std::vector<Vertex> parity_targets(const CompactMultigraph& P, const Instance& inst) {
  std::vector<Vertex> q;
  for (Vertex v = 0; v < inst.n; ++v) {
    bool odd = mpz_odd_p(degree(P, v).get_mpz_t()) != 0;
    if (v == inst.s) odd = !odd;
    if (inst.t && v == *inst.t) odd = !odd;
    if (odd) q.push_back(v);
  }
  return q;
}

std::vector<std::pair<Vertex, Vertex>> parity_matching(const CompactMultigraph& P, const Instance& inst) {
  const auto q = parity_targets(P, inst);
  MVTSP_CHECK(q.size() % 2 == 0, "odd number of parity targets");
  return min_cost_perfect_matching(q, [&](Vertex a, Vertex b) { return inst.c(a, b); });
}

Json PipelineReport::to_json() const {
  Json j;
  j["x_star_value"] = rational_json(x_star_value);
  j["b_family_size"] = b_family_size;
  j["type2_chain"] = type2_chain;
  j["y_value"] = rational_json(y_value);
  j["p_cost"] = rational_json(p_cost);
  j["matching_cost"] = rational_json(matching_cost);
  j["final_cost"] = rational_json(final_cost);
  j["lp_solves"] = lp_solves;
  if (oracle_cost) {
    j["oracle_cost"] = rational_json(*oracle_cost);
    if (sgn(*oracle_cost) > 0) {
      Rational ratio = final_cost / *oracle_cost;
      j["ratio"] = rational_json(ratio);
    }
  }
  return j;
}

TourSolution approx_15(const Instance& inst, PipelineReport* report) {
  require_path_instance(inst, "approx_15");
  const int n = inst.n;
  const Vertex s = inst.s, t = *inst.t;

  const HeldKarpPoint xs = held_karp_mv(inst);
  const CutFamily family = enumerate_low_cuts(inst, xs.x);
  const BGoodPoint bg = compute_b_good_point(inst, family);
  MVTSP_CHECK(xs.value <= bg.value, "c.y is below the Held-Karp optimum");

  const CompactMultigraph P = build_P(inst, bg);
  MVTSP_CHECK(support_spans_connected(P), "P is disconnected");
  for (Vertex v = 0; v < n; ++v) {
    Integer need = 2 * inst.requests[v] - 1;
    if (v == s || v == t) need -= 1;
    MVTSP_CHECK(degree(P, v) >= need, "P misses a degree lower bound");
  }
  const Rational p_cost = cost_of(P, inst);

  const auto q_p = parity_targets(P, inst);
  const auto M = parity_matching(P, inst);
  Rational m_cost = 0;
  for (auto [a, b] : M) m_cost += inst.c(a, b);
  MVTSP_CHECK(4 * m_cost <= xs.value + bg.value, "matching costs more than c(q)/2");

  std::vector<bool> in_q(n, false);
  for (Vertex v : q_p) in_q[v] = true;
  for (std::size_t idx : bg.chain) {
    const auto& C = family.cuts[idx];
    Integer crossing = 0;
    int inside = 0;
    for (std::size_t id = 0; id < P.size(); ++id) {
      const auto [a, b] = edge_ends(n, id);
      if (C.contains(a) != C.contains(b)) crossing += P.mult(id);
    }
    for (Vertex v : q_p) inside += C.contains(v) ? 1 : 0;
    MVTSP_CHECK(crossing == 1, "P crosses a Type-2 cut more than once");
    MVTSP_CHECK(inside % 2 == 0, "Type-2 cut splits the parity targets oddly");
  }
  if (n <= 12) {
    std::vector<Rational> q(xs.x.size());
    for (std::size_t id = 0; id < q.size(); ++id) q[id] = (xs.x[id] + bg.y[id]) / 2;
    // Complements give the same cut, so fix vertex n-1 outside C.
    for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
      int odd = 0;
      for (Vertex v : q_p) odd += (mask >> v) & 1u;
      if (odd % 2 == 0) continue;
      MVTSP_CHECK(mask_load(n, q, mask) >= 2, "q/2 violates a Q_P-cut constraint");
    }
  }

  CompactMultigraph joined = P;
  for (auto [a, b] : M) joined.add(a, b, 1);
  const auto parts = decompose_path_cycles(joined, s, t);
  const auto merged = eulerian_merge(parts, n);
  TourSolution sol = shortcut(merged.order, inst);
  MVTSP_CHECK(is_feasible_tour(sol.multigraph, inst).feasible, "3/2 output is not a tour");
  if (validate_metric(inst).ok()) {
    MVTSP_CHECK(sol.total_cost <= p_cost + m_cost, "shortcutting increased the cost");
  }

  if (report) {
    report->x_star_value = xs.value;
    report->b_family_size = family.cuts.size();
    report->type2_chain.clear();
    for (std::size_t idx : bg.chain) report->type2_chain.push_back(family.cuts[idx].members());
    report->y_value = bg.value;
    report->p_cost = p_cost;
    report->matching_cost = m_cost;
    report->final_cost = sol.total_cost;
    report->lp_solves = bg.lp_solves;
  }
  return sol;
}

Instance split_cycle_instance(const Instance& inst) {
  check_structure(inst);
  if (inst.t) throw StructuralError("cycle instance must not have an endpoint t");
  const int n = inst.n;
  const Vertex v = inst.s;
  auto orig = [&](Vertex a) { return a == n ? v : a; };
  Instance out;
  out.n = n + 1;
  out.cost = Instance::symmetric_costs(n + 1, [&](Vertex a, Vertex b) { return inst.c(orig(a), orig(b)); });
  out.requests = inst.requests;
  out.requests.push_back(1);
  out.s = v;
  out.t = n;
  return out;
}

TourSolution mvtsp_15(const Instance& inst, PipelineReport* report) {
  const Instance split = split_cycle_instance(inst);
  if (validate_metric(inst).ok()) MVTSP_CHECK(validate_metric(split).ok(), "split instance is not metric");
  const TourSolution path = approx_15(split, report);
  const int n = inst.n;
  const Vertex v = inst.s;
  auto orig = [&](Vertex a) { return a == n ? v : a; };

  TourSolution sol;
  sol.multigraph = CompactMultigraph(n);
  for (std::size_t id = 0; id < path.multigraph.size(); ++id) {
    if (path.multigraph.mult(id) == 0) continue;
    const auto [a, b] = edge_ends(n + 1, id);
    sol.multigraph.add(orig(a), orig(b), path.multigraph.mult(id));
  }
  for (const auto& item : path.order.items) {
    if (const auto* visit = std::get_if<Visit>(&item)) {
      sol.order.items.emplace_back(Visit{orig(visit->vertex)});
    } else {
      Repeat rep = std::get<Repeat>(item);
      for (Vertex& x : rep.rotation) x = orig(x);
      sol.order.items.emplace_back(std::move(rep));
    }
  }
  sol.decomposition = decompose_path_cycles(sol.multigraph, v, v);
  sol.total_cost = cost_of(sol.multigraph, inst);
  MVTSP_CHECK(sol.total_cost == path.total_cost, "identifying s_v and t_v changed the cost");
  MVTSP_CHECK(is_feasible_tour(sol.multigraph, inst).feasible, "cycle output is not a closed tour");
  return sol;
}

}  // namespace mvtsp
