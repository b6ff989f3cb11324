#include "mvtsp/heldkarp.hpp"

#include <algorithm>

#include "mvtsp/cuts.hpp"

namespace mvtsp {

namespace {

struct LocalEdges {
  std::vector<std::size_t> edges;  // global ids of E[W]
  std::vector<int> pos;            // global vertex -> index in W, or -1
};

LocalEdges local_edges_of(int n, const std::vector<Vertex>& W) {
  LocalEdges out;
  out.pos.assign(n, -1);
  for (std::size_t i = 0; i < W.size(); ++i) out.pos[W[i]] = static_cast<int>(i);
  for (std::size_t id = 0; id < edge_count(n); ++id) {
    const auto [a, b] = edge_ends(n, id);
    if (out.pos[a] >= 0 && out.pos[b] >= 0) out.edges.push_back(id);
  }
  return out;
}

void check_family(const Instance& inst, const HeldKarpFamily& f) {
  if (f.W.empty()) throw StructuralError("W must be nonempty");
  for (std::size_t i = 0; i < f.W.size(); ++i) {
    if (f.W[i] < 0 || f.W[i] >= inst.n) throw StructuralError("W has a vertex out of range");
    if (i > 0 && f.W[i - 1] >= f.W[i]) throw StructuralError("W must be sorted and distinct");
  }
  auto in_w = [&](Vertex x) { return std::binary_search(f.W.begin(), f.W.end(), x); };
  if (!in_w(f.u) || !in_w(f.v)) throw StructuralError("u and v must lie in W");
  for (const auto& B : f.three_cuts) {
    for (Vertex x : B) {
      if (!in_w(x)) throw StructuralError("three-cut leaves W");
    }
    if (f.u == f.v || std::find(B.begin(), B.end(), f.u) == B.end() ||
        std::find(B.begin(), B.end(), f.v) != B.end()) {
      throw StructuralError("three-cut must contain u and avoid v");
    }
  }
}

Integer degree_target(const Instance& inst, const HeldKarpFamily& f, Vertex w) {
  Integer d = 2 * inst.requests[w];
  if (w == f.u) d -= 1;
  if (w == f.v) d -= 1;
  return d;
}

Constraint cut_constraint(int n, const std::vector<std::size_t>& edges,
                          const std::vector<bool>& in_set, const Rational& rhs,
                          const std::string& label) {
  std::vector<std::pair<std::size_t, Rational>> terms;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [a, b] = edge_ends(n, edges[i]);
    if (in_set[a] != in_set[b]) terms.emplace_back(i, 1);
  }
  return make_constraint(std::move(terms), Sense::GreaterEqual, rhs, label);
}

std::string set_label(const std::vector<bool>& in_set) {
  std::string s = "cut{";
  bool first = true;
  for (std::size_t v = 0; v < in_set.size(); ++v) {
    if (!in_set[v]) continue;
    if (!first) s += ',';
    s += std::to_string(v);
    first = false;
  }
  return s + "}";
}

Rational cut_rhs(const HeldKarpFamily& f, const std::vector<bool>& in_set) {
  return (f.u != f.v && in_set[f.u] != in_set[f.v]) ? Rational(1) : Rational(2);
}

LinearProgram base_lp(const Instance& inst, const HeldKarpFamily& f, const LocalEdges& local) {
  const int n = inst.n;
  LinearProgram lp;
  lp.num_vars = local.edges.size();
  for (std::size_t id : local.edges) {
    lp.objective.push_back(inst.edge_cost(id));
    const auto [a, b] = edge_ends(n, id);
    lp.var_names.push_back("x" + std::to_string(a) + "_" + std::to_string(b));
  }
  for (Vertex w : f.W) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (std::size_t i = 0; i < local.edges.size(); ++i) {
      const auto [a, b] = edge_ends(n, local.edges[i]);
      if (a == w && b == w) {
        terms.emplace_back(i, 2);
      } else if (a == w || b == w) {
        terms.emplace_back(i, 1);
      }
    }
    lp.constraints.push_back(make_constraint(std::move(terms), Sense::Equal,
                                             Rational(degree_target(inst, f, w)),
                                             "deg" + std::to_string(w)));
  }
  for (const auto& B : f.three_cuts) {
    std::vector<bool> in_set(n, false);
    for (Vertex x : B) in_set[x] = true;
    lp.constraints.push_back(cut_constraint(n, local.edges, in_set, 3, "three" + set_label(in_set)));
  }
  return lp;
}

HeldKarpPoint to_point(const Instance& inst, const LocalEdges& local, LPVertexSolution sol) {
  HeldKarpPoint p;
  p.x.assign(edge_count(inst.n), Rational(0));
  for (std::size_t i = 0; i < local.edges.size(); ++i) p.x[local.edges[i]] = sol.x[i];
  p.value = sol.value;
  p.lp = std::move(sol);
  p.local_edges = local.edges;
  return p;
}

}  // namespace

Rational cut_load(int n, const std::vector<Rational>& x, const std::vector<bool>& in_set) {
  Rational load = 0;
  for (std::size_t id = 0; id < x.size(); ++id) {
    if (sgn(x[id]) == 0) continue;
    const auto [a, b] = edge_ends(n, id);
    if (in_set[a] != in_set[b]) load += x[id];
  }
  return load;
}

std::vector<Constraint> separate_held_karp_cuts(const Instance& inst, const HeldKarpFamily& f,
                                                const std::vector<std::size_t>& local_edges,
                                                const std::vector<Rational>& x) {
  const int n = inst.n;
  const int k = static_cast<int>(f.W.size());
  std::vector<int> pos(n, -1);
  for (int i = 0; i < k; ++i) pos[f.W[i]] = i;
  WeightMatrix w(k, std::vector<Rational>(k));
  for (std::size_t i = 0; i < local_edges.size(); ++i) {
    const auto [a, b] = edge_ends(n, local_edges[i]);
    if (a == b) continue;
    w[pos[a]][pos[b]] += x[i];
    w[pos[b]][pos[a]] += x[i];
  }
  std::vector<Constraint> cuts;
  auto emit = [&](const std::vector<bool>& local_side) {
    std::vector<bool> in_set(n, false);
    for (int i = 0; i < k; ++i) in_set[f.W[i]] = local_side[i];
    const Rational rhs = cut_rhs(f, in_set);
    Constraint c = cut_constraint(n, local_edges, in_set, rhs, set_label(in_set));
    if (!c.satisfied_by(x)) cuts.push_back(std::move(c));
  };

  const auto comps = positive_components(w);
  if (comps.size() > 1) {
    for (const auto& comp : comps) {
      if (comp.front() == 0) continue;  // its complement is the union of the others
      std::vector<bool> side(k, false);
      for (int a : comp) side[a] = true;
      emit(side);
    }
    return cuts;
  }
  if (f.u != f.v) {
    const auto st = min_st_cut(w, pos[f.u], pos[f.v]);
    if (st.value < 1) emit(st.side);
    if (k >= 3) {
      // Contract u and v; the min cut of the rest avoids both.
      std::vector<int> map(k);
      int next = 1;
      for (int i = 0; i < k; ++i) map[i] = (i == pos[f.u] || i == pos[f.v]) ? 0 : next++;
      WeightMatrix h(k - 1, std::vector<Rational>(k - 1));
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          if (map[a] != map[b]) h[map[a]][map[b]] += w[a][b];
        }
      }
      const auto gm = global_min_cut(h);
      if (gm.value < 2) {
        std::vector<bool> side(k);
        for (int i = 0; i < k; ++i) side[i] = gm.side[map[i]];
        emit(side);
      }
    }
  } else if (k >= 2) {
    const auto gm = global_min_cut(w);
    if (gm.value < 2) emit(gm.side);
  }
  return cuts;
}

HeldKarpPoint solve_held_karp_family(const Instance& inst, const HeldKarpFamily& family) {
  check_family(inst, family);
  const auto local = local_edges_of(inst.n, family.W);
  LinearProgram lp = base_lp(inst, family, local);
  lp.oracles.push_back([&inst, &family, edges = local.edges](const std::vector<Rational>& x) {
    return separate_held_karp_cuts(inst, family, edges, x);
  });
  return to_point(inst, local, solve_with_separation(lp));
}

HeldKarpPoint held_karp_mv(const Instance& inst) {
  check_structure(inst);
  if (!inst.t) throw StructuralError("held_karp_mv needs endpoints s != t");
  HeldKarpFamily f;
  for (Vertex v = 0; v < inst.n; ++v) f.W.push_back(v);
  f.u = inst.s;
  f.v = *inst.t;
  return solve_held_karp_family(inst, f);
}

HeldKarpPoint explicit_held_karp_family(const Instance& inst, const HeldKarpFamily& family,
                                        int max_w) {
  check_family(inst, family);
  const int k = static_cast<int>(family.W.size());
  if (k > max_w) throw CapabilityError("explicit LP reference limited to |W| <= " + std::to_string(max_w));
  const auto local = local_edges_of(inst.n, family.W);
  LinearProgram lp = base_lp(inst, family, local);
  // Every proper nonempty C not containing W[0]; C and W - C give the same row.
  for (unsigned mask = 2; mask + 1 < (1u << k); mask += 2) {
    std::vector<bool> in_set(inst.n, false);
    for (int i = 0; i < k; ++i) in_set[family.W[i]] = (mask >> i) & 1u;
    lp.constraints.push_back(cut_constraint(inst.n, local.edges, in_set, cut_rhs(family, in_set),
                                            set_label(in_set)));
  }
  return to_point(inst, local, solve_lp(lp));
}

}  // namespace mvtsp
