#include <doctest.h>

#include <random>

#include "graphic_brute.hpp"
#include "mvtsp/generate.hpp"
#include "mvtsp/graphic.hpp"
#include "mvtsp/oracle.hpp"

using namespace mvtsp;

namespace {

std::vector<Rational> k3_costs() {
  // aa ab ac bb bc cc
  return {Rational(2), Rational(1), Rational(1), Rational(2), Rational(1), Rational(2)};
}

void check_output(int n, const CompactMultigraph& g, const std::vector<Integer>& rho, const Box& box) {
  Integer half = 0;
  for (const auto& r : rho) half += r;
  CHECK(g.total_edges() == half / 2);
  CHECK(graphic_brute::connected(n, g.multiplicities()));
  for (Vertex v = 0; v < n; ++v) CHECK(degree(g, v) >= rho[v] - 1);
  for (std::size_t id = 0; id < g.size(); ++id) {
    CHECK(g.mult(id) >= box.lo(id));
    if (auto u = box.hi(id)) CHECK(g.mult(id) <= *u);
  }
}

}  // namespace

TEST_CASE("connected multigraph pair on K3") {
  const auto sys = connected_multigraph_pair(3, {2, 2, 2});
  CHECK(sys.rho_hat == 1);
  CHECK(sys.dcs.hyperedges.size() == 3);
  CHECK(sys.dcs.mode == BoundMode::LowerOnly);
  CHECK(sys.dcs.delta(6) == 2);
  const auto& h = sys.dcs.hyperedges[0];
  CHECK(h.elements == std::vector<std::size_t>{0, 1, 2});
  CHECK(h.mult == std::vector<Integer>{2, 1, 1});
  CHECK(*h.f == 2);
  CHECK(sys.pair->lower(ElementSet(6, true)) == 3);
  CHECK_THROWS_AS(connected_multigraph_pair(3, {2, 2, 1}), StructuralError);
  CHECK_THROWS_AS(connected_multigraph_pair(3, {1, 1, 0}), InfeasibleError);
}

TEST_CASE("integral base points are exactly the connected multigraphs") {
  // n = 3, rho(V)/2 = 3 edges: compare base membership with connectivity.
  const auto sys = connected_multigraph_pair(3, {2, 2, 2});
  WorkingPolytopeState st(sys.pair);
  int members = 0;
  for (unsigned long code = 0; code < 4096; ++code) {
    std::vector<Integer> z(6);
    unsigned long c = code;
    long total = 0;
    for (auto& v : z) {
      v = static_cast<long>(c % 4);
      total += static_cast<long>(c % 4);
      c /= 4;
    }
    const bool expected = total == 3 && graphic_brute::connected(3, z);
    CHECK(st.contains(z) == expected);
    members += expected;
  }
  CHECK(members > 0);
}

TEST_CASE("K3 degree-two multigraph") {
  RoundingResult details;
  const std::vector<Integer> rho{2, 2, 2};
  const auto g = bounded_degree_connected_multigraph(3, k3_costs(), rho, {}, &details);
  check_output(3, g, rho, {});
  Rational c = 0;
  for (std::size_t id = 0; id < 6; ++id) c += k3_costs()[id] * g.mult(id);
  CHECK(c == 3);
  CHECK(*graphic_brute::min_cost(3, k3_costs(), rho, {}) == 3);
  CHECK(details.lp_value == 3);
}

TEST_CASE("two vertices with unbalanced degrees") {
  // uu uv vv
  const std::vector<Rational> cost{Rational(2), Rational(1), Rational(2)};
  const std::vector<Integer> rho{3, 1};
  const auto g = bounded_degree_connected_multigraph(2, cost, rho);
  check_output(2, g, rho, {});
  CHECK(g.total_edges() == 2);
  CHECK(*graphic_brute::min_cost(2, cost, rho, {}) == 3);

  Box box;
  box.upper = {std::nullopt, Integer(1), std::nullopt};
  const auto forced = bounded_degree_connected_multigraph(2, cost, rho, box);
  CHECK(forced.mult(0, 1) == 1);
  CHECK(forced.mult(0, 0) == 1);
  CHECK(forced.mult(1, 1) == 0);
}

TEST_CASE("spanning trees when rho(V)/2 = n - 1") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 5));
    std::vector<Rational> cost;
    for (std::size_t id = 0; id < edge_count(n); ++id) cost.emplace_back(static_cast<long>(uniform_below(rng, 9)));
    // A random tree's degrees.
    std::vector<Integer> rho(n, 0);
    for (Vertex v = 1; v < n; ++v) {
      const Vertex p = static_cast<Vertex>(uniform_below(rng, v));
      rho[v] += 1;
      rho[p] += 1;
    }
    const auto g = bounded_degree_connected_multigraph(n, cost, rho);
    check_output(n, g, rho, {});
    CHECK(g.total_edges() == n - 1);
    for (Vertex v = 0; v < n; ++v) CHECK(g.mult(v, v) == 0);
  }
}

TEST_CASE("rounded multigraphs against brute force") {
  std::mt19937_64 rng(99);
  int solved = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + static_cast<int>(uniform_below(rng, 4));
    const std::size_t m = edge_count(n);
    std::vector<Rational> cost;
    for (std::size_t id = 0; id < m; ++id) cost.emplace_back(static_cast<long>(uniform_below(rng, 7)));
    std::vector<Integer> rho(n);
    long total = 0;
    for (auto& r : rho) {
      r = static_cast<long>(uniform_below(rng, 4));
      total += r.get_si();
    }
    if (total % 2) {
      rho[0] += 1;
      ++total;
    }
    if (total > 12) continue;
    Box box;
    if (uniform_below(rng, 2) == 0) {
      box.upper.resize(m);
      for (auto& u : box.upper) {
        if (uniform_below(rng, 3) == 0) u = Integer(static_cast<long>(uniform_below(rng, 3)));
      }
    }
    const auto brute = graphic_brute::min_cost(n, cost, rho, box);
    RoundingResult details;
    try {
      const auto g = bounded_degree_connected_multigraph(n, cost, rho, box, &details);
      check_output(n, g, rho, box);
      Rational c = 0;
      for (std::size_t id = 0; id < m; ++id) c += cost[id] * g.mult(id);
      CHECK(c <= details.lp_value);
      if (brute) CHECK(c <= *brute);
      if (m <= 6) {
        const auto sys = connected_multigraph_pair(n, rho, box);
        CHECK(details.lp_value == explicit_gpolymatroid_lp(*sys.pair, cost, sys.dcs, box));
      }
      ++solved;
    } catch (const InfeasibleError&) {
      CHECK(!brute.has_value());
    }
  }
  CHECK(solved > 60);
}
