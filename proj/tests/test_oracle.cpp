#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "fixtures.hpp"
#include "mvtsp/oracle.hpp"
#include "mvtsp/transport.hpp"

using namespace mvtsp;

namespace {

Instance single_visit(Instance inst) {
  for (auto& r : inst.requests) r = 1;
  return inst;
}

// Cheapest Hamiltonian cycle by permutation enumeration (n >= 3).
Rational permutation_cycle(const Instance& inst) {
  std::vector<Vertex> order(inst.n);
  std::iota(order.begin(), order.end(), 0);
  std::optional<Rational> best;
  do {
    Rational c = 0;
    for (int i = 0; i < inst.n; ++i) c += inst.c(order[i], order[(i + 1) % inst.n]);
    if (!best || c < *best) best = c;
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return *best;
}

struct EnvGuard {
  explicit EnvGuard(const char* value) { setenv("MVTSP_ORACLE_CAPS", value, 1); }
  ~EnvGuard() { unsetenv("MVTSP_ORACLE_CAPS"); }
};

}  // namespace

TEST_CASE("exact optimum of the fixtures") {
  const auto a = exact_mvtsp_path(fixtures::t2());
  CHECK(a.cost == 3);
  CHECK(a.multigraph.mult(0, 0) == 1);
  CHECK(a.multigraph.mult(0, 1) == 1);
  CHECK(exact_mvtsp_path(fixtures::t3()).cost == 2);
}

TEST_CASE("shifting every cost shifts the optimum by the edge count") {
  auto inst = fixtures::t3();
  inst.requests = {Integer(2), Integer(1), Integer(2)};
  const Rational base = exact_mvtsp_path(inst).cost;
  for (auto& c : inst.cost) c += 10;
  CHECK(exact_mvtsp_path(inst).cost == base + 10 * (inst.total_requests() - 1));
}

TEST_CASE("subset DP and exhaustive search agree on single-visit paths") {
  for (int seed = 0; seed < 120; ++seed) {
    const auto inst = single_visit(fixtures::random_instance(seed, 2 + seed % 4, 1, seed % 2));
    const auto dp = exact_single_visit_path(inst);
    CHECK(dp.cost == exact_mvtsp_path(inst).cost);
    CHECK(dp.order.front() == inst.s);
    CHECK(dp.order.back() == *inst.t);
    CHECK(cost_of(dp.multigraph, inst) == dp.cost);
  }
}

TEST_CASE("cycle oracle") {
  const auto two = fixtures::make_instance(2, {{2, 1}, {1, 2}}, {1, 1}, 0, std::nullopt);
  const auto sol = exact_mvtsp_cycle(two);
  CHECK(sol.cost == 2);
  CHECK(sol.multigraph.mult(0, 1) == 2);
  for (int seed = 0; seed < 60; ++seed) {
    const auto inst = single_visit(fixtures::random_instance(seed, 3 + seed % 3, 1, seed % 2, true));
    CHECK(exact_mvtsp_cycle(inst).cost == permutation_cycle(inst));
  }
  CHECK_THROWS_AS(exact_mvtsp_cycle(fixtures::t2()), StructuralError);
}

TEST_CASE("relaxations bound the optimum") {
  for (int seed = 0; seed < 200; ++seed) {
    const auto inst = fixtures::random_instance(100 + seed, 2 + seed % 5, 3, seed % 2);
    const Rational hk = held_karp_mv(inst).value;
    CHECK(explicit_held_karp_value(inst) == hk);
    if (inst.n <= 5) CHECK(hk <= exact_mvtsp_path(inst).cost);
  }
}

TEST_CASE("caps") {
  CHECK_THROWS_AS(exact_mvtsp_path(fixtures::random_instance(1, 6, 1)), CapabilityError);
  auto inst = fixtures::t3();
  inst.requests[1] = 4;
  CHECK_THROWS_AS(exact_mvtsp_path(inst), CapabilityError);
  CHECK_NOTHROW(exact_mvtsp_path(inst, OracleCaps{5, 4}));
  CHECK_THROWS_AS(exact_single_visit_path(inst), StructuralError);
  {
    EnvGuard env("6,4");
    CHECK(oracle_caps().max_n == 6);
    CHECK(oracle_caps().max_r == 4);
  }
  {
    EnvGuard env("six");
    CHECK_THROWS_AS(oracle_caps(), ParseError);
  }
  CHECK(oracle_caps().max_n == 5);
  CHECK(oracle_caps().max_r == 3);
}

TEST_CASE("explicit g-polymatroid LP") {
  auto rank = std::make_shared<UniformMatroidRank>(2, 1);
  PolymatroidPair pair(rank);
  DegreeConstraintSystem none;
  none.mode = BoundMode::LowerOnly;
  CHECK(explicit_gpolymatroid_lp(pair, {Rational(-1), Rational(-2)}, none) == -2);
  CHECK(explicit_gpolymatroid_lp(pair, {Rational(1), Rational(2)}, none) == 0);
  DegreeConstraintSystem cover;
  cover.mode = BoundMode::LowerOnly;
  cover.hyperedges.push_back({{0}, {Integer(1)}, Integer(3), std::nullopt});
  CHECK_THROWS_AS(explicit_gpolymatroid_lp(pair, {Rational(1), Rational(1)}, cover), InfeasibleError);
}

TEST_CASE("5/2 algorithm against the oracle") {
  for (int seed = 0; seed < 150; ++seed) {
    const auto inst = fixtures::random_instance(300 + seed, 2 + seed % 4, 3, seed % 2);
    const auto path = exact_single_visit_path(single_visit(inst));
    const auto sol = approx_25(inst, path.multigraph);
    const auto opt = exact_mvtsp_path(inst);
    CHECK(is_feasible_tour(sol.multigraph, inst).feasible);
    CHECK(sol.total_cost >= opt.cost);
    CHECK(2 * sol.total_cost <= 5 * opt.cost);
  }
}
