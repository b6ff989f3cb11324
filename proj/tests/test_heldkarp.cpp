#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "mvtsp/cuts.hpp"
#include "mvtsp/heldkarp.hpp"

using namespace mvtsp;

namespace {

HeldKarpFamily full_family(const Instance& inst) {
  HeldKarpFamily f;
  for (Vertex v = 0; v < inst.n; ++v) f.W.push_back(v);
  f.u = inst.s;
  f.v = *inst.t;
  return f;
}

HeldKarpFamily random_family(std::mt19937_64& rng, int n) {
  HeldKarpFamily f;
  while (f.W.empty()) {
    f.W.clear();
    for (Vertex v = 0; v < n; ++v) {
      if (uniform_below(rng, 3) != 0) f.W.push_back(v);
    }
  }
  f.u = f.W[uniform_below(rng, f.W.size())];
  f.v = f.W[uniform_below(rng, f.W.size())];
  if (f.u != f.v) {
    for (int tries = 0; tries < 2; ++tries) {
      std::vector<Vertex> B{f.u};
      for (Vertex x : f.W) {
        if (x != f.u && x != f.v && uniform_below(rng, 2)) B.push_back(x);
      }
      std::sort(B.begin(), B.end());
      if (std::find(f.three_cuts.begin(), f.three_cuts.end(), B) == f.three_cuts.end()) {
        f.three_cuts.push_back(B);
      }
    }
  }
  return f;
}

}  // namespace

TEST_CASE("Held-Karp on the fixtures") {
  const auto t3 = fixtures::t3();
  const auto hk3 = held_karp_mv(t3);
  CHECK(hk3.value == 2);
  CHECK(explicit_held_karp_family(t3, full_family(t3)).value == 2);
  CHECK(hk3.lp.certificate_rank == hk3.lp.x.size());

  const auto t2 = fixtures::t2();
  const auto hk2 = held_karp_mv(t2);
  CHECK(hk2.value == 3);
  CHECK(hk2.x[edge_index(2, 0, 1)] == 1);
  CHECK(hk2.x[edge_index(2, 0, 0)] == 1);
}

TEST_CASE("Held-Karp scales with the costs") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = fixtures::random_instance(seed, 5, 3);
    const auto base = held_karp_mv(inst);
    auto scaled = inst;
    for (auto& c : scaled.cost) c *= Rational(7, 3);
    CHECK(held_karp_mv(scaled).value == base.value * Rational(7, 3));
  }
}

TEST_CASE("degree equalities and cut constraints hold at the optimum") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto inst = fixtures::random_instance(seed, 2 + static_cast<int>(seed % 5), 3, seed % 2);
    const auto hk = held_karp_mv(inst);
    const int n = inst.n;
    for (Vertex v = 0; v < n; ++v) {
      Rational d = 0;
      for (Vertex u = 0; u < n; ++u) d += (u == v ? 2 : 1) * hk.x[edge_index(n, u, v)];
      Integer want = 2 * inst.requests[v] - ((v == inst.s || v == *inst.t) ? 1 : 0);
      CHECK(d == Rational(want));
    }
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
      std::vector<bool> in(n);
      for (int i = 0; i < n; ++i) in[i] = (mask >> i) & 1u;
      const bool st = in[inst.s] != in[*inst.t];
      CHECK(cut_load(n, hk.x, in) >= (st ? 1 : 2));
    }
  }
}

TEST_CASE("cutting-plane families agree with the explicit LP") {
  std::mt19937_64 rng(41);
  int feasible = 0, empty = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 5));
    auto inst = fixtures::random_instance(trial + 100, n, 3, trial % 2);
    const auto f = trial % 4 == 0 ? full_family(inst) : random_family(rng, n);
    bool cut_ok = true, explicit_ok = true;
    HeldKarpPoint a, b;
    try {
      a = solve_held_karp_family(inst, f);
    } catch (const InfeasibleError&) {
      cut_ok = false;
    }
    try {
      b = explicit_held_karp_family(inst, f);
    } catch (const InfeasibleError&) {
      explicit_ok = false;
    }
    REQUIRE(cut_ok == explicit_ok);
    if (cut_ok) {
      CHECK(a.value == b.value);
      ++feasible;
    } else {
      ++empty;
    }
  }
  CHECK(feasible > 50);
  CHECK(empty > 0);
}

TEST_CASE("separated cuts are violated, and silence means feasibility") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 6));
    auto inst = fixtures::random_instance(trial + 1, n, 3);
    const auto f = full_family(inst);
    std::vector<std::size_t> edges;
    for (std::size_t id = 0; id < edge_count(n); ++id) edges.push_back(id);
    std::vector<Rational> x(edges.size());
    for (auto& v : x) {
      if (uniform_below(rng, 2)) v = Rational(static_cast<long>(uniform_below(rng, 7)), 2);
    }
    const auto cuts = separate_held_karp_cuts(inst, f, edges, x);
    for (const auto& c : cuts) CHECK_FALSE(c.satisfied_by(x));
    bool violated = false;
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
      std::vector<bool> in(n);
      for (int i = 0; i < n; ++i) in[i] = (mask >> i) & 1u;
      const bool st = in[inst.s] != in[*inst.t];
      if (cut_load(n, x, in) < (st ? 1 : 2)) violated = true;
    }
    CHECK(violated == !cuts.empty());
  }
}

TEST_CASE("min cut routines match brute force") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 2 + static_cast<int>(uniform_below(rng, 6));
    WeightMatrix w(k, std::vector<Rational>(k));
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        if (uniform_below(rng, 3)) w[a][b] = w[b][a] = Rational(static_cast<long>(uniform_below(rng, 9)), 1 + static_cast<long>(uniform_below(rng, 3)));
        w[a][b].canonicalize();
        w[b][a].canonicalize();
      }
    }
    std::optional<Rational> global, st;
    for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
      std::vector<bool> side(k);
      for (int i = 0; i < k; ++i) side[i] = (mask >> i) & 1u;
      const Rational val = cut_weight(w, side);
      if (!global || val < *global) global = val;
      if (side[0] && !side[k - 1] && (!st || val < *st)) st = val;
    }
    const auto g = global_min_cut(w);
    CHECK(g.value == *global);
    CHECK(cut_weight(w, g.side) == g.value);
    CHECK_FALSE(g.side[0]);
    const auto f = min_st_cut(w, 0, k - 1);
    CHECK(f.value == *st);
    CHECK(cut_weight(w, f.side) == f.value);
    CHECK(f.side[0]);
    CHECK_FALSE(f.side[k - 1]);
  }
}
