#include <doctest.h>

#include <chrono>
#include <random>

#include "fixtures.hpp"
#include "mvtsp/lp.hpp"
#include "mvtsp/transport.hpp"

using namespace mvtsp;

namespace {

// Transportation LP over n*n flow variables; integral by total unimodularity.
Rational lp_reference(const TransportationInstance& tp) {
  const int n = tp.n;
  LinearProgram lp;
  lp.num_vars = static_cast<std::size_t>(n) * n;
  lp.objective = tp.cost;
  for (int u = 0; u < n; ++u) {
    std::vector<std::pair<std::size_t, Rational>> row, col;
    for (int v = 0; v < n; ++v) {
      row.emplace_back(static_cast<std::size_t>(u) * n + v, 1);
      col.emplace_back(static_cast<std::size_t>(v) * n + u, 1);
    }
    lp.constraints.push_back(make_constraint(row, Sense::Equal, Rational(tp.supply[u])));
    lp.constraints.push_back(make_constraint(col, Sense::Equal, Rational(tp.demand[u])));
  }
  return solve_lp(lp).value;
}

TransportationInstance random_tp(std::mt19937_64& rng, int n, long max_supply) {
  TransportationInstance tp;
  tp.n = n;
  tp.supply.resize(n);
  tp.demand.assign(n, 0);
  Integer total = 0;
  for (auto& a : tp.supply) {
    a = static_cast<long>(uniform_below(rng, max_supply + 1));
    total += a;
  }
  // Spread the total over the demands.
  for (Integer k = 0; k < total; ++k) tp.demand[uniform_below(rng, n)] += 1;
  for (int i = 0; i < n * n; ++i) tp.cost.emplace_back(static_cast<long>(uniform_below(rng, 10)));
  return tp;
}

}  // namespace

TEST_CASE("transportation on T2") {
  const auto tp = transportation_for(fixtures::t2());
  CHECK(tp.supply == std::vector<Integer>{1, 1});
  CHECK(tp.demand == std::vector<Integer>{2, 0});
  const auto sol = solve_transportation(tp);
  CHECK(sol.cost == 3);
  CHECK(sol.flow == std::vector<Integer>{1, 0, 1, 0});
  CHECK(sol.graph.mult(0, 0) == 1);
  CHECK(sol.graph.mult(0, 1) == 1);
}

TEST_CASE("transportation with unit requests on two vertices") {
  auto inst = fixtures::make_instance(2, {{2, 5}, {5, 2}}, {1, 1}, 0, 1);
  const auto sol = solve_transportation(transportation_for(inst));
  CHECK(sol.flow == std::vector<Integer>{0, 0, 1, 0});
  CHECK(sol.cost == 5);
}

TEST_CASE("scaling supplies scales the optimum") {
  TransportationInstance tp;
  tp.n = 2;
  tp.supply = {1, 1};
  tp.demand = {2, 0};
  tp.cost = {2, 1, 1, 2};
  const auto base = solve_transportation(tp);
  for (auto& a : tp.supply) a *= 1000000;
  for (auto& b : tp.demand) b *= 1000000;
  const auto big = solve_transportation(tp);
  CHECK(big.cost == base.cost * 1000000);
  for (std::size_t i = 0; i < big.flow.size(); ++i) CHECK(big.flow[i] == base.flow[i] * 1000000);
}

TEST_CASE("unbalanced instances are structural errors") {
  TransportationInstance tp;
  tp.n = 2;
  tp.supply = {1, 1};
  tp.demand = {1, 0};
  tp.cost = {0, 0, 0, 0};
  CHECK_THROWS_AS(solve_transportation(tp), StructuralError);
}

TEST_CASE("capacity scaling matches the transportation LP") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(uniform_below(rng, 5));
    const auto tp = random_tp(rng, n, trial % 3 == 0 ? 40 : 5);
    const auto sol = solve_transportation(tp);
    CHECK(sol.cost == lp_reference(tp));
    Integer total = 0, supply = 0;
    for (int u = 0; u < n; ++u) {
      Integer out = 0, in = 0;
      for (int v = 0; v < n; ++v) {
        out += sol.flow[static_cast<std::size_t>(u) * n + v];
        in += sol.flow[static_cast<std::size_t>(v) * n + u];
        CHECK(sol.flow[static_cast<std::size_t>(u) * n + v] >= 0);
      }
      CHECK(out == tp.supply[u]);
      CHECK(in == tp.demand[u]);
      supply += tp.supply[u];
    }
    CHECK(sol.graph.total_edges() == supply);
  }
}

TEST_CASE("huge supplies stay fast") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = fixtures::random_instance(trial + 1, 10, 1000000000);
    const auto start = std::chrono::steady_clock::now();
    const auto sol = solve_transportation(transportation_for(inst));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(secs < 5.0);
    CHECK(sol.graph.total_edges() == inst.total_requests() - 1);
  }
}

TEST_CASE("approx_25 on the fixtures") {
  const auto t2 = fixtures::t2();
  CompactMultigraph path(2);
  path.set(0, 1, 1);
  const auto sol = approx_25(t2, path);
  CHECK(is_feasible_tour(sol.multigraph, t2).feasible);
  CHECK(sol.total_cost <= Rational(15, 2));
  CHECK(sol.total_cost == 3);

  const auto t3 = fixtures::t3();
  CompactMultigraph abc(3);
  abc.set(0, 1, 1);
  abc.set(1, 2, 1);
  const auto out = approx_25(t3, abc);
  CHECK(out.multigraph == abc);
  CHECK(out.total_cost == 2);
}

TEST_CASE("approx_25 rejects non-Hamiltonian input") {
  const auto t3 = fixtures::t3();
  CompactMultigraph bad(3);
  bad.set(0, 2, 1);
  CHECK_THROWS_AS(approx_25(t3, bad), StructuralError);
}

TEST_CASE("approx_25 is feasible and within path plus transportation cost") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const int n = 2 + static_cast<int>(seed % 7);
    auto inst = fixtures::random_instance(seed, n, seed % 4 == 0 ? 1000000 : 3, seed % 2);
    CompactMultigraph path(n);
    // Identity order with s = 0 first and t = n-1 last.
    for (Vertex v = 0; v + 1 < n; ++v) path.set(v, v + 1, 1);
    const auto sol = approx_25(inst, path);
    CHECK(is_feasible_tour(sol.multigraph, inst).feasible);
    const auto tp = solve_transportation(transportation_for(inst));
    CHECK(sol.total_cost <= cost_of(path, inst) + tp.cost);
    CHECK(sol.total_cost >= tp.cost);
  }
}
