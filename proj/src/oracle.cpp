#include "mvtsp/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

#include "mvtsp/lp.hpp"

namespace mvtsp {

OracleCaps oracle_caps() {
  OracleCaps caps;
  if (const char* env = std::getenv("MVTSP_ORACLE_CAPS")) {
    std::istringstream in(env);
    char comma = 0;
    OracleCaps parsed;
    if (!(in >> parsed.max_n >> comma >> parsed.max_r) || comma != ',' || parsed.max_n < 1 ||
        parsed.max_r < 1) {
      throw ParseError("MVTSP_ORACLE_CAPS must look like \"n,rmax\"");
    }
    caps = parsed;
  }
  return caps;
}

namespace {

class MultiplicitySearch {
 public:
  MultiplicitySearch(const Instance& inst, std::vector<long> target)
      : inst_(inst), n_(inst.n), remaining_(std::move(target)), current_(inst.n) {
    min_cost_ = inst.edge_cost(0);
    for (std::size_t id = 0; id < edge_count(n_); ++id) min_cost_ = std::min(min_cost_, inst.edge_cost(id));
  }

  std::optional<ExactSolution> run() {
    dfs(0, Rational(0));
    if (!best_cost_) return std::nullopt;
    return ExactSolution{*best_cost_, best_};
  }

 private:
  bool connected() const {
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
      while (parent[a] != a) a = parent[a];
      return a;
    };
    for (Vertex u = 0; u < n_; ++u) {
      for (Vertex v = u + 1; v < n_; ++v) {
        if (current_.mult(u, v) > 0) parent[find(u)] = find(v);
      }
    }
    for (Vertex v = 1; v < n_; ++v) {
      if (find(v) != find(0)) return false;
    }
    return true;
  }

  void dfs(std::size_t id, const Rational& partial) {
    long rem = std::accumulate(remaining_.begin(), remaining_.end(), 0L);
    if (best_cost_ && partial + min_cost_ * (rem / 2) >= *best_cost_) return;
    if (id == edge_count(n_)) {
      if (rem == 0 && connected()) {
        best_cost_ = partial;
        best_ = current_;
      }
      return;
    }
    const auto [u, v] = edge_ends(n_, id);
    // The last edge of row u closes vertex u's degree.
    const bool closes_row = v == n_ - 1;
    long hi = u == v ? remaining_[u] / 2 : std::min(remaining_[u], remaining_[v]);
    long lo = 0;
    if (closes_row) {
      lo = u == v ? remaining_[u] / 2 : remaining_[u];
      if (u == v && remaining_[u] % 2 != 0) return;
      if (lo > hi) return;
    }
    for (long k = hi; k >= lo; --k) {
      remaining_[u] -= u == v ? 2 * k : k;
      if (u != v) remaining_[v] -= k;
      current_.set(id, k);
      dfs(id + 1, partial + inst_.edge_cost(id) * k);
      current_.set(id, 0);
      remaining_[u] += u == v ? 2 * k : k;
      if (u != v) remaining_[v] += k;
    }
  }

  const Instance& inst_;
  int n_;
  std::vector<long> remaining_;
  CompactMultigraph current_;
  Rational min_cost_;
  std::optional<Rational> best_cost_;
  CompactMultigraph best_;
};

void check_caps(const Instance& inst, const OracleCaps& caps) {
  check_structure(inst);
  if (inst.n > caps.max_n) {
    throw CapabilityError("caps exceeded: n = " + std::to_string(inst.n) + " > " + std::to_string(caps.max_n));
  }
  for (const auto& r : inst.requests) {
    if (r > caps.max_r) throw CapabilityError("caps exceeded: request " + r.get_str() + " > " + std::to_string(caps.max_r));
  }
}

ExactSolution exact_with_targets(const Instance& inst, std::vector<long> target) {
  auto sol = MultiplicitySearch(inst, std::move(target)).run();
  MVTSP_CHECK(sol.has_value(), "oracle found no feasible multigraph");
  return *sol;
}

}  // namespace

ExactSolution exact_mvtsp_path(const Instance& inst, const OracleCaps& caps) {
  check_caps(inst, caps);
  if (!inst.t) throw StructuralError("path oracle needs t");
  std::vector<long> target(inst.n);
  for (Vertex v = 0; v < inst.n; ++v) target[v] = 2 * inst.requests[v].get_si();
  target[inst.s] -= 1;
  target[*inst.t] -= 1;
  return exact_with_targets(inst, std::move(target));
}

ExactSolution exact_mvtsp_cycle(const Instance& inst, const OracleCaps& caps) {
  check_caps(inst, caps);
  if (inst.t) throw StructuralError("cycle oracle takes instances without t");
  std::vector<long> target(inst.n);
  for (Vertex v = 0; v < inst.n; ++v) target[v] = 2 * inst.requests[v].get_si();
  return exact_with_targets(inst, std::move(target));
}

SingleVisitPath exact_single_visit_path(const Instance& inst, int max_n) {
  check_structure(inst);
  if (!inst.t) throw StructuralError("single-visit path needs t");
  if (inst.n > max_n) throw CapabilityError("caps exceeded: single-visit DP limited to n <= " + std::to_string(max_n));
  for (const auto& r : inst.requests) {
    if (r != 1) throw StructuralError("single-visit path needs r = 1 everywhere");
  }
  const int n = inst.n;
  const Vertex s = inst.s, t = *inst.t;
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<std::vector<std::optional<Rational>>> dp(full + 1, std::vector<std::optional<Rational>>(n));
  std::vector<std::vector<int>> prev(full + 1, std::vector<int>(n, -1));
  dp[std::size_t{1} << s][s] = Rational(0);
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (Vertex last = 0; last < n; ++last) {
      if (!dp[mask][last]) continue;
      if (last == t && mask != full) continue;
      for (Vertex next = 0; next < n; ++next) {
        if (mask & (std::size_t{1} << next)) continue;
        const std::size_t nm = mask | (std::size_t{1} << next);
        Rational cand = *dp[mask][last] + inst.c(last, next);
        if (!dp[nm][next] || cand < *dp[nm][next]) {
          dp[nm][next] = std::move(cand);
          prev[nm][next] = last;
        }
      }
    }
  }
  MVTSP_CHECK(dp[full][t].has_value(), "no Hamiltonian path found");
  SingleVisitPath out{*dp[full][t], {}, CompactMultigraph(n)};
  std::size_t mask = full;
  for (Vertex v = t; v != -1;) {
    out.order.push_back(v);
    const int p = prev[mask][v];
    mask &= ~(std::size_t{1} << v);
    v = p;
  }
  std::reverse(out.order.begin(), out.order.end());
  for (std::size_t i = 0; i + 1 < out.order.size(); ++i) out.multigraph.add(out.order[i], out.order[i + 1], 1);
  return out;
}

Rational explicit_held_karp_value(const Instance& inst) {
  check_structure(inst);
  if (!inst.t) throw StructuralError("Held-Karp reference needs t");
  HeldKarpFamily f;
  for (Vertex v = 0; v < inst.n; ++v) f.W.push_back(v);
  f.u = inst.s;
  f.v = *inst.t;
  return explicit_held_karp_family(inst, f).value;
}

Rational explicit_gpolymatroid_lp(const ParamodularPair& pair, const std::vector<Rational>& cost,
                                  const DegreeConstraintSystem& dcs, const Box& box) {
  const std::size_t n = pair.size();
  if (n > 12) throw CapabilityError("explicit g-polymatroid LP limited to 12 elements");
  dcs.check(n);
  LinearProgram lp;
  lp.num_vars = n;
  lp.objective = cost;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    ElementSet Y(n);
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (std::size_t i = 0; i < n; ++i) {
      Y[i] = (mask >> i) & 1ul;
      if (Y[i]) terms.emplace_back(i, 1);
    }
    lp.constraints.push_back(make_constraint(terms, Sense::LessEqual, Rational(pair.upper(Y))));
    lp.constraints.push_back(make_constraint(terms, Sense::GreaterEqual, Rational(pair.lower(Y))));
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (box.lo(s) > 0) lp.constraints.push_back(make_constraint({{s, Rational(1)}}, Sense::GreaterEqual, Rational(box.lo(s))));
    if (auto u = box.hi(s)) lp.constraints.push_back(make_constraint({{s, Rational(1)}}, Sense::LessEqual, Rational(*u)));
  }
  for (const auto& h : dcs.hyperedges) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (std::size_t i = 0; i < h.elements.size(); ++i) terms.emplace_back(h.elements[i], Rational(h.mult[i]));
    if (h.f) lp.constraints.push_back(make_constraint(terms, Sense::GreaterEqual, Rational(*h.f)));
    if (h.g) lp.constraints.push_back(make_constraint(terms, Sense::LessEqual, Rational(*h.g)));
  }
  return solve_lp(lp).value;
}

}  // namespace mvtsp
