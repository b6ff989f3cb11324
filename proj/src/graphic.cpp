#include "mvtsp/graphic.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace mvtsp {

namespace {

constexpr int kDpVertexLimit = 14;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

GraphicFunction::GraphicFunction(int n, std::vector<std::pair<Vertex, Vertex>> edges, Integer rho_hat)
    : n_(n), edges_(std::move(edges)), rho_hat_(std::move(rho_hat)) {
  if (n < 1) throw StructuralError("graphic function needs a vertex");
  if (rho_hat_ < 0) throw StructuralError("graphic function needs rho_hat >= 0");
  for (const auto& [a, b] : edges_) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw StructuralError("edge endpoint out of range");
  }
}

std::shared_ptr<GraphicFunction> GraphicFunction::complete(int n, Integer rho_hat) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t id = 0; id < edge_count(n); ++id) edges.push_back(edge_ends(n, id));
  return std::make_shared<GraphicFunction>(n, std::move(edges), std::move(rho_hat));
}

Integer GraphicFunction::value(const ElementSet& Z) const {
  UnionFind uf(n_);
  long rank = 0;
  bool any = false;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!Z[i]) continue;
    any = true;
    const auto [a, b] = edges_[i];
    if (uf.unite(a, b)) ++rank;
  }
  if (!any) return 0;
  return Integer(rank) + rho_hat_;
}

std::optional<ElementSet> GraphicFunction::violated_upper(const std::vector<Rational>& w) const {
  if (n_ > kDpVertexLimit) {
    throw CapabilityError("graphic separation limited to " + std::to_string(kDpVertexLimit) + " vertices");
  }
  const std::size_t full = (std::size_t{1} << n_) - 1;
  std::vector<std::vector<Rational>> adj(n_, std::vector<Rational>(n_));
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    MVTSP_CHECK(sgn(w[i]) >= 0, "graphic separation needs w >= 0");
    const auto [a, b] = edges_[i];
    adj[a][b] += w[i];
    if (a != b) adj[b][a] += w[i];
  }
  // gain[S] = w(E(S)) - |S| + 1
  std::vector<Rational> inner(full + 1), gain(full + 1);
  for (std::size_t S = 1; S <= full; ++S) {
    const int v = std::countr_zero(S);
    const std::size_t rest = S & (S - 1);
    inner[S] = inner[rest] + adj[v][v];
    for (std::size_t R = rest; R; R &= R - 1) inner[S] += adj[v][std::countr_zero(R)];
    gain[S] = inner[S] - static_cast<long>(std::popcount(S)) + 1;
  }
  std::vector<std::vector<std::size_t>> positive(n_);
  for (std::size_t S = 1; S <= full; ++S) {
    if (sgn(gain[S]) > 0) positive[std::countr_zero(S)].push_back(S);
  }
  std::vector<Rational> best(full + 1);
  std::vector<std::size_t> choice(full + 1, 0);
  for (std::size_t M = 1; M <= full; ++M) {
    const int v = std::countr_zero(M);
    best[M] = best[M & (M - 1)];
    for (std::size_t S : positive[v]) {
      if ((S & M) != S) continue;
      Rational cand = gain[S] + best[M & ~S];
      if (cand > best[M]) {
        best[M] = std::move(cand);
        choice[M] = S;
      }
    }
  }
  if (best[full] <= Rational(rho_hat_)) return std::nullopt;
  std::vector<int> block(n_, -1);
  int blocks = 0;
  for (std::size_t M = full; M;) {
    if (choice[M] == 0) {
      M &= M - 1;
      continue;
    }
    for (std::size_t R = choice[M]; R; R &= R - 1) block[std::countr_zero(R)] = blocks;
    ++blocks;
    M &= ~choice[M];
  }
  ElementSet Z(edges_.size(), false);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto [a, b] = edges_[i];
    Z[i] = block[a] >= 0 && block[a] == block[b];
  }
  MVTSP_CHECK(set_sum(w, Z) > Rational(value(Z)), "graphic separation produced a non-violated set");
  return Z;
}

ConnectedMultigraphSystem connected_multigraph_pair(int n, const std::vector<Integer>& rho,
                                                    const Box& box) {
  if (n < 1 || static_cast<int>(rho.size()) != n) throw StructuralError("rho must have one entry per vertex");
  Integer sum = 0;
  for (const auto& r : rho) {
    if (r < 0) throw StructuralError("rho must be non-negative");
    sum += r;
  }
  if (sum % 2 != 0) throw StructuralError("rho(V) is odd (handshaking)");
  const std::size_t m = edge_count(n);
  if ((!box.lower.empty() && box.lower.size() != m) || (!box.upper.empty() && box.upper.size() != m)) {
    throw StructuralError("box size must match the edge count");
  }
  ConnectedMultigraphSystem sys;
  sys.rho_hat = sum / 2 - n + 1;
  if (sys.rho_hat < 0) throw InfeasibleError("rho(V)/2 < n - 1: no connected multigraph has that few edges");
  sys.b = GraphicFunction::complete(n, sys.rho_hat);
  sys.pair = std::make_shared<ComplementaryPair>(sys.b);
  sys.box = box;
  sys.dcs.mode = BoundMode::LowerOnly;
  for (Vertex v = 0; v < n; ++v) {
    Hyperedge h;
    for (Vertex u = 0; u < n; ++u) {
      h.elements.push_back(edge_index(n, u, v));
      h.mult.emplace_back(u == v ? 2 : 1);
    }
    std::vector<std::size_t> order(h.elements.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return h.elements[a] < h.elements[b]; });
    Hyperedge sorted;
    for (std::size_t i : order) {
      sorted.elements.push_back(h.elements[i]);
      sorted.mult.push_back(h.mult[i]);
    }
    sorted.f = rho[v];
    sys.dcs.hyperedges.push_back(std::move(sorted));
  }
  return sys;
}

CompactMultigraph bounded_degree_connected_multigraph(int n, const std::vector<Rational>& cost,
                                                      const std::vector<Integer>& rho, const Box& box,
                                                      RoundingResult* details) {
  const auto sys = connected_multigraph_pair(n, rho, box);
  if (cost.size() != edge_count(n)) throw StructuralError("cost must be indexed by edge id");
  RoundingResult res = iterative_round(sys.pair, cost, sys.dcs, sys.box);
  CompactMultigraph g(n);
  for (std::size_t id = 0; id < g.size(); ++id) g.set(id, res.z[id]);
  Integer half = 0;
  for (const auto& r : rho) half += r;
  half /= 2;
  MVTSP_CHECK(g.total_edges() == half, "multigraph has the wrong edge count");
  MVTSP_CHECK(support_spans_connected(g), "multigraph is disconnected");
  for (Vertex v = 0; v < n; ++v) MVTSP_CHECK(degree(g, v) >= rho[v] - 1, "degree below rho - 1");
  if (details) *details = std::move(res);
  return g;
}

}  // namespace mvtsp
