#include <doctest.h>

#include "fixtures.hpp"
#include "mvtsp/oracle.hpp"
#include "mvtsp/pathtsp.hpp"

using namespace mvtsp;

namespace {

std::vector<Rational> edge_vector(int n, const std::vector<std::tuple<Vertex, Vertex, Rational>>& entries) {
  std::vector<Rational> x(edge_count(n));
  for (const auto& [a, b, v] : entries) x[edge_index(n, a, b)] = v;
  return x;
}

Rational crossing(int n, const std::vector<Rational>& x, std::uint32_t mask) {
  Rational load = 0;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a; b < n; ++b) {
      if (((mask >> a) & 1u) != ((mask >> b) & 1u)) load += x[edge_index(n, a, b)];
    }
  }
  return load;
}

std::vector<Rational> as_rational(const CompactMultigraph& g) {
  std::vector<Rational> x;
  for (const auto& m : g.multiplicities()) x.emplace_back(m);
  return x;
}

}  // namespace

TEST_CASE("low cuts on the two-vertex instance") {
  const auto inst = fixtures::t2();
  const auto fam = enumerate_low_cuts(inst, edge_vector(2, {{0, 1, Rational(1)}, {0, 0, Rational(1)}}));
  REQUIRE(fam.cuts.size() == 1);
  CHECK(fam.cuts[0].members() == std::vector<Vertex>{0});
  CHECK(fam.cuts[0].load == 1);
}

TEST_CASE("low cuts on the three-vertex path") {
  const auto inst = fixtures::t3();
  const auto path = edge_vector(3, {{0, 1, Rational(1)}, {1, 2, Rational(1)}});
  const auto fam = enumerate_low_cuts(inst, path);
  // s = a, t = c: the s-t cuts are {a} and {a,b}, both of load 1
  REQUIRE(fam.cuts.size() == 2);
  CHECK(fam.cuts[0].members() == std::vector<Vertex>{0});
  CHECK(fam.cuts[1].members() == std::vector<Vertex>{0, 1});
  CHECK(fam.cuts[0].load == 1);
  CHECK(fam.cuts[1].load == 1);

  const auto heavy = edge_vector(3, {{0, 1, Rational(3)}, {1, 2, Rational(3)}});
  CHECK(enumerate_low_cuts(inst, heavy).cuts.empty());
}

TEST_CASE("low cuts agree with direct enumeration") {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 60; ++iter) {
    const int n = 2 + static_cast<int>(rng() % 6);
    auto inst = fixtures::random_instance(iter, n, 2);
    std::vector<Rational> x(edge_count(n));
    for (auto& v : x) {
      v = Rational(static_cast<long>(rng() % 5), 2);
      v.canonicalize();
    }
    const auto fam = enumerate_low_cuts(inst, x);
    std::size_t want = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (!((mask >> inst.s) & 1u) || ((mask >> *inst.t) & 1u)) continue;
      if (crossing(n, x, mask) < 3) ++want;
    }
    REQUIRE(fam.cuts.size() == want);
    for (const auto& c : fam.cuts) CHECK(c.load == crossing(n, x, c.mask));
  }
}

TEST_CASE("low cut enumeration refuses large n") {
  auto inst = fixtures::random_instance(1, 23, 1);
  CHECK_THROWS_AS(enumerate_low_cuts(inst, std::vector<Rational>(edge_count(23))), CapabilityError);
  CHECK_THROWS_AS(enumerate_low_cuts(fixtures::random_instance(1, 4, 1), {}, 3), CapabilityError);
}

TEST_CASE("cut classification") {
  CutFamily fam;
  fam.n = 3;
  fam.cuts.push_back({0b001u, Rational(0)});
  auto path = edge_vector(3, {{0, 1, Rational(1)}, {1, 2, Rational(1)}});
  auto chk = check_b_good(path, fam);
  CHECK(chk.good);
  CHECK(chk.types[0] == CutType::Type2);

  auto heavy = edge_vector(3, {{0, 1, Rational(5, 2)}, {1, 2, Rational(1)}});
  chk = check_b_good(heavy, fam);
  CHECK_FALSE(chk.good);
  CHECK(chk.types[0] == CutType::Violation);
  CHECK(chk.loads[0] == Rational(5, 2));

  auto halves = edge_vector(3, {{0, 1, Rational(1, 2)}, {0, 2, Rational(1, 2)}});
  chk = check_b_good(halves, fam);
  CHECK(chk.types[0] == CutType::Violation);

  auto three = edge_vector(3, {{0, 1, Rational(2)}, {0, 2, Rational(1)}});
  CHECK(check_b_good(three, fam).types[0] == CutType::Type1);
}

TEST_CASE("empty family gives the Held-Karp optimum") {
  for (int seed = 0; seed < 20; ++seed) {
    const auto inst = fixtures::random_instance(seed, 2 + seed % 4, 3);
    CutFamily fam;
    fam.n = inst.n;
    const auto bg = compute_b_good_point(inst, fam);
    CHECK(bg.chain.empty());
    CHECK(bg.value == held_karp_mv(inst).value);
    CHECK(bg.segments.size() == 1);
  }
}

TEST_CASE("good point on the two-vertex instance") {
  const auto inst = fixtures::t2();
  const auto xs = held_karp_mv(inst);
  const auto fam = enumerate_low_cuts(inst, xs.x);
  const auto bg = compute_b_good_point(inst, fam);
  CHECK(bg.value <= 3);
  CHECK(bg.y == edge_vector(2, {{0, 0, Rational(1)}, {0, 1, Rational(1)}}));
  REQUIRE(bg.chain.size() == 1);
  CHECK(bg.chain_edges[0] == std::pair<Vertex, Vertex>{0, 1});

  const auto P = build_P(inst, bg);
  CHECK(P.mult(0, 1) == 1);
  CHECK(P.mult(0, 0) == 1);
  CHECK(P.mult(1, 1) == 0);
}

TEST_CASE("good point cost is below every tour") {
  for (int seed = 0; seed < 200; ++seed) {
    const int n = 2 + seed % 5;
    const auto inst = fixtures::random_instance(1000 + seed, n, 1, seed % 2);
    const auto xs = held_karp_mv(inst);
    const auto fam = enumerate_low_cuts(inst, xs.x);
    const auto bg = compute_b_good_point(inst, fam);
    const auto opt = exact_single_visit_path(inst);
    INFO("seed " << seed);
    CHECK(bg.value <= opt.cost);
    CHECK(bg.value >= xs.value);
    // tours are good for every family
    CHECK(check_b_good(as_rational(opt.multigraph), fam).good);
  }
  for (int seed = 0; seed < 80; ++seed) {
    const int n = 2 + seed % 4;
    const auto inst = fixtures::random_instance(2000 + seed, n, 3, seed % 2);
    const auto xs = held_karp_mv(inst);
    const auto fam = enumerate_low_cuts(inst, xs.x);
    const auto bg = compute_b_good_point(inst, fam);
    const auto opt = exact_mvtsp_path(inst);
    INFO("seed " << seed);
    CHECK(bg.value <= opt.cost);
    CHECK(check_b_good(bg.y, fam).good);
    CHECK(check_b_good(as_rational(opt.multigraph), fam).good);
  }
}

TEST_CASE("pipeline invariants checked from outside") {
  for (int seed = 0; seed < 80; ++seed) {
    const int n = 2 + seed % 5;
    const auto inst = fixtures::random_instance(3000 + seed, n, 1 + seed % 3, seed % 2);
    const auto xs = held_karp_mv(inst);
    const auto fam = enumerate_low_cuts(inst, xs.x);
    CHECK(fam.cuts.size() <= static_cast<std::size_t>(n * n * n * n));
    const auto bg = compute_b_good_point(inst, fam);
    const auto chk = check_b_good(bg.y, fam);
    REQUIRE(chk.good);
    for (std::size_t i = 1; i < bg.chain.size(); ++i) {
      const auto a = fam.cuts[bg.chain[i - 1]].mask, b = fam.cuts[bg.chain[i]].mask;
      CHECK(((a & ~b) == 0 && a != b));
    }
    const auto P = build_P(inst, bg);
    CHECK(support_spans_connected(P));
    CHECK(P.total_edges() == inst.total_requests() - 1);
    CHECK(cost_of(P, inst) <= bg.value);
    for (std::size_t id = 0; id < P.size(); ++id) {
      if (P.mult(id) > 0) CHECK(sgn(bg.y[id]) > 0);
    }
    for (auto [v, u] : bg.chain_edges) CHECK(P.mult(v, u) <= 1);

    const auto q = parity_targets(P, inst);
    std::uint32_t qmask = 0;
    for (Vertex v : q) qmask |= 1u << v;
    std::vector<Rational> half(xs.x.size());
    for (std::size_t id = 0; id < half.size(); ++id) half[id] = (xs.x[id] + bg.y[id]) / 4;
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
      if (__builtin_popcount(mask & qmask) % 2 == 1) CHECK(crossing(n, half, mask) >= 1);
    }
    for (std::size_t idx : bg.chain) {
      CHECK(__builtin_popcount(fam.cuts[idx].mask & qmask) % 2 == 0);
      CHECK(crossing(n, as_rational(P), fam.cuts[idx].mask) == 1);
    }
  }
}

TEST_CASE("single-visit instances give spanning trees") {
  for (int seed = 0; seed < 40; ++seed) {
    const int n = 2 + seed % 8;
    const auto inst = fixtures::random_instance(4000 + seed, n, 1, seed % 2);
    const auto bg = compute_b_good_point(inst, enumerate_low_cuts(inst, held_karp_mv(inst).x));
    const auto P = build_P(inst, bg);
    CHECK(P.support_size() == static_cast<std::size_t>(n - 1));
    for (std::size_t id : P.support()) {
      CHECK(P.mult(id) == 1);
      const auto [a, b] = edge_ends(n, id);
      CHECK(a != b);
    }
    CHECK(support_spans_connected(P));
  }
}

TEST_CASE("parity matching") {
  auto inst = fixtures::t3();
  CompactMultigraph path(3);
  path.add(0, 1, 1);
  path.add(1, 2, 1);
  CHECK(parity_targets(path, inst).empty());
  CHECK(parity_matching(path, inst).empty());

  CompactMultigraph star(3);
  star.add(0, 1, 1);
  star.add(0, 2, 1);
  // degrees 2,1,1: odd = {b, c}; xor {a, c} = {a, b}
  CHECK(parity_targets(star, inst) == std::vector<Vertex>{0, 1});
  CHECK(parity_matching(star, inst) == std::vector<std::pair<Vertex, Vertex>>{{0, 1}});

  for (int seed = 0; seed < 50; ++seed) {
    const auto g = fixtures::random_instance(seed, 6, 1, true);
    CompactMultigraph h(6);
    h.add(0, 1, 1);
    h.add(2, 3, 1);
    // odd {0,1,2,3} xor {s,t} = {1,2,3,5}
    const auto q = parity_targets(h, g);
    REQUIRE(q == std::vector<Vertex>{1, 2, 3, 5});
    const auto m = parity_matching(h, g);
    Rational got = 0;
    for (auto [a, b] : m) got += g.c(a, b);
    const Rational m1 = g.c(q[0], q[1]) + g.c(q[2], q[3]);
    const Rational m2 = g.c(q[0], q[2]) + g.c(q[1], q[3]);
    const Rational m3 = g.c(q[0], q[3]) + g.c(q[1], q[2]);
    CHECK(got == std::min({m1, m2, m3}));
  }
}

TEST_CASE("3/2 pipeline on the fixtures") {
  PipelineReport rep;
  auto sol = approx_15(fixtures::t2(), &rep);
  CHECK(sol.total_cost == 3);
  CHECK(rep.final_cost == 3);
  const Json j = rep.to_json();
  for (const char* key : {"x_star_value", "b_family_size", "type2_chain", "y_value", "p_cost",
                          "matching_cost", "final_cost"}) {
    CHECK(j.contains(key));
  }
  sol = approx_15(fixtures::t3());
  CHECK(sol.total_cost == 2);
  CHECK(expand(sol.order) == std::vector<Vertex>{0, 1, 2});
  CHECK_THROWS_AS(approx_15(fixtures::make_instance(2, {{2, 1}, {1, 2}}, {1, 1}, 0, std::nullopt)),
                  StructuralError);
}

TEST_CASE("3/2 pipeline against the exact oracle") {
  for (int seed = 0; seed < 150; ++seed) {
    const int n = 2 + seed % 4;
    const auto inst = fixtures::random_instance(5000 + seed, n, 3, seed % 2);
    const auto sol = approx_15(inst);
    const auto opt = exact_mvtsp_path(inst);
    INFO("seed " << seed);
    CHECK(is_feasible_tour(sol.multigraph, inst).feasible);
    CHECK(sol.total_cost >= opt.cost);
    CHECK(2 * sol.total_cost <= 3 * opt.cost);
  }
}

TEST_CASE("large requests keep the pipeline exact") {
  for (int seed = 0; seed < 5; ++seed) {
    auto inst = fixtures::random_instance(6000 + seed, 6, 3, true);
    for (auto& r : inst.requests) r *= Integer("333333333");
    const auto sol = approx_15(inst);
    CHECK(is_feasible_tour(sol.multigraph, inst).feasible);
    CHECK(sol.multigraph.total_edges() == inst.total_requests() - 1);
  }
}

TEST_CASE("cycle variant") {
  const auto two = fixtures::make_instance(2, {{2, 1}, {1, 2}}, {1, 1}, 0, std::nullopt);
  auto sol = mvtsp_15(two);
  CHECK(sol.total_cost == 2);
  CHECK(sol.multigraph.mult(0, 1) == 2);

  for (int seed = 0; seed < 60; ++seed) {
    const int n = 2 + seed % 4;
    const auto inst = fixtures::random_instance(7000 + seed, n, 3, seed % 2, true);
    const auto split = split_cycle_instance(inst);
    CHECK(validate_metric(split).ok());
    CHECK(split.requests.back() == 1);
    PipelineReport rep;
    sol = mvtsp_15(inst, &rep);
    CHECK(is_feasible_tour(sol.multigraph, inst).feasible);
    CHECK(sol.total_cost == rep.final_cost);
    const auto opt = exact_mvtsp_cycle(inst);
    INFO("seed " << seed);
    CHECK(sol.total_cost >= opt.cost);
    CHECK(2 * sol.total_cost <= 3 * opt.cost);
  }
}
