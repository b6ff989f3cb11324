#include <doctest.h>

#include <random>

#include "mvtsp/generate.hpp"
#include "mvtsp/lp.hpp"

using namespace mvtsp;

namespace {

Constraint row(std::vector<long> coef, Sense sense, Rational rhs) {
  std::vector<std::pair<std::size_t, Rational>> terms;
  for (std::size_t j = 0; j < coef.size(); ++j) terms.emplace_back(j, Rational(coef[j]));
  return make_constraint(terms, sense, rhs);
}

// Solves the square system A x = b; nullopt if singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a,
                                                  std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
      b[i] -= f * b[c];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Minimum over all vertices of {constraints, x >= 0} by enumeration.
std::optional<Rational> vertex_enumeration(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars;
  std::vector<std::pair<std::vector<Rational>, Rational>> hyper;
  for (const auto& c : lp.constraints) {
    std::vector<Rational> a(n);
    for (const auto& [j, v] : c.terms) a[j] = v;
    hyper.emplace_back(a, c.rhs);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> a(n);
    a[j] = 1;
    hyper.emplace_back(a, 0);
  }
  std::optional<Rational> best;
  const std::size_t m = hyper.size();
  std::vector<std::size_t> pick(n);
  auto rec = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == n) {
      std::vector<std::vector<Rational>> a;
      std::vector<Rational> b;
      for (std::size_t k : pick) {
        a.push_back(hyper[k].first);
        b.push_back(hyper[k].second);
      }
      auto x = solve_square(a, b);
      if (!x) return;
      for (const auto& v : *x) {
        if (v < 0) return;
      }
      for (const auto& c : lp.constraints) {
        if (!c.satisfied_by(*x)) return;
      }
      Rational val = 0;
      for (std::size_t j = 0; j < n; ++j) val += lp.objective[j] * (*x)[j];
      if (!best || val < *best) best = val;
      return;
    }
    for (std::size_t k = start; k < m; ++k) {
      pick[depth] = k;
      self(self, k + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace

TEST_CASE("box LP with zero objective returns a rank-2 vertex") {
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {0, 0};
  lp.constraints = {row({1, 0}, Sense::LessEqual, 1), row({0, 1}, Sense::LessEqual, 1)};
  const auto sol = solve_lp(lp);
  CHECK(sol.x == std::vector<Rational>{0, 0});
  CHECK(sol.certificate_rank == 2);
  CHECK(sol.value == 0);
}

TEST_CASE("small LP optimum") {
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {-1, -1};
  lp.constraints = {row({1, 2}, Sense::LessEqual, 4), row({3, 1}, Sense::LessEqual, 6)};
  const auto sol = solve_lp(lp);
  CHECK(sol.x == std::vector<Rational>{Rational(8, 5), Rational(6, 5)});
  CHECK(sol.value == Rational(-14, 5));
}

TEST_CASE("equality and greater-equal rows use phase one") {
  LinearProgram lp;
  lp.num_vars = 3;
  lp.objective = {1, 2, 3};
  lp.constraints = {row({1, 1, 1}, Sense::Equal, 3), row({1, -1, 0}, Sense::GreaterEqual, -1),
                    row({0, 0, 1}, Sense::GreaterEqual, Rational(1, 2)),
                    row({2, 2, 2}, Sense::Equal, 6)};
  const auto sol = solve_lp(lp);
  CHECK(sol.value == vertex_enumeration(lp).value());
  CHECK(sol.certificate_rank == 3);
}

TEST_CASE("infeasible LP carries a Farkas certificate") {
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {1, 1};
  lp.constraints = {row({1, 1}, Sense::LessEqual, 1), row({1, 1}, Sense::GreaterEqual, 2),
                    row({1, 0}, Sense::LessEqual, 5)};
  try {
    solve_lp(lp);
    FAIL("expected infeasibility");
  } catch (const InfeasibleError& e) {
    const auto& y = e.certificate;
    REQUIRE(y.size() == lp.constraints.size());
    Rational yb = 0;
    std::vector<Rational> ya(2);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const auto& c = lp.constraints[i];
      if (c.sense == Sense::LessEqual) CHECK(y[i] <= 0);
      if (c.sense == Sense::GreaterEqual) CHECK(y[i] >= 0);
      yb += y[i] * c.rhs;
      for (const auto& [j, a] : c.terms) ya[j] += y[i] * a;
    }
    CHECK(yb > 0);
    CHECK(ya[0] <= 0);
    CHECK(ya[1] <= 0);
  }
}

TEST_CASE("unbounded LP is an error") {
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {-1, 0};
  lp.constraints = {row({1, -1}, Sense::LessEqual, 1)};
  CHECK_THROWS_AS(solve_lp(lp), UnboundedError);
}

TEST_CASE("degenerate cycling example terminates") {
  // Beale's example.
  LinearProgram lp;
  lp.num_vars = 4;
  lp.objective = {Rational(-3, 4), 20, Rational(-1, 2), 6};
  auto r1 = make_constraint({{0, Rational(1, 4)}, {1, -8}, {2, -1}, {3, 9}}, Sense::LessEqual, 0);
  auto r2 = make_constraint({{0, Rational(1, 2)}, {1, -12}, {2, Rational(-1, 2)}, {3, 3}},
                            Sense::LessEqual, 0);
  auto r3 = make_constraint({{2, 1}}, Sense::LessEqual, 1);
  lp.constraints = {r1, r2, r3};
  const auto sol = solve_lp(lp);
  CHECK(sol.value == Rational(-5, 4));
}

TEST_CASE("separation adds lazily known cuts") {
  LinearProgram lp;
  lp.num_vars = 3;
  lp.objective = {-1, -1, -1};
  lp.constraints = {row({1, 1, 1}, Sense::LessEqual, Rational(5, 2))};
  lp.oracles.push_back([](const std::vector<Rational>& x) {
    std::vector<Constraint> cuts;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] > 1) cuts.push_back(make_constraint({{j, 1}}, Sense::LessEqual, 1));
    }
    return cuts;
  });
  const auto sol = solve_with_separation(lp);
  CHECK(sol.value == Rational(-5, 2));
  CHECK(sol.certificate_rank == 3);
  CHECK(sol.separation_rounds >= 1);
  for (const auto& v : sol.x) CHECK(v <= 1);
}

TEST_CASE("oracle returning a satisfied cut is rejected") {
  LinearProgram lp;
  lp.num_vars = 1;
  lp.objective = {1};
  lp.oracles.push_back([](const std::vector<Rational>&) {
    return std::vector<Constraint>{make_constraint({{0, 1}}, Sense::LessEqual, 5)};
  });
  CHECK_THROWS_AS(solve_with_separation(lp), InternalError);
}

TEST_CASE("random LPs agree with vertex enumeration, also when cuts arrive lazily") {
  std::mt19937_64 rng(17);
  int solved = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 3);
    const std::size_t m = 1 + uniform_below(rng, 5);
    LinearProgram lp;
    lp.num_vars = n;
    for (std::size_t j = 0; j < n; ++j) lp.objective.emplace_back(static_cast<long>(uniform_below(rng, 11)) - 5);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<long> coef(n);
      for (auto& c : coef) c = static_cast<long>(uniform_below(rng, 9)) - 4;
      const Sense sense = static_cast<Sense>(uniform_below(rng, 3));
      lp.constraints.push_back(row(coef, sense, Rational(static_cast<long>(uniform_below(rng, 13)) - 4, 1 + static_cast<long>(uniform_below(rng, 3)))));
    }
    // Box keeps everything bounded.
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<long> coef(n);
      coef[j] = 1;
      lp.constraints.push_back(row(coef, Sense::LessEqual, 7));
    }
    const auto expected = vertex_enumeration(lp);
    if (!expected) {
      CHECK_THROWS_AS(solve_lp(lp), InfeasibleError);
      ++infeasible;
      continue;
    }
    const auto sol = solve_lp(lp);
    CHECK(sol.value == *expected);
    CHECK(sol.certificate_rank == n);

    // Same LP with everything but the box delivered by an oracle.
    LinearProgram lazy;
    lazy.num_vars = n;
    lazy.objective = lp.objective;
    lazy.constraints.assign(lp.constraints.end() - static_cast<std::ptrdiff_t>(n), lp.constraints.end());
    std::vector<Constraint> hidden(lp.constraints.begin(), lp.constraints.end() - static_cast<std::ptrdiff_t>(n));
    lazy.oracles.push_back([hidden](const std::vector<Rational>& x) {
      std::vector<Constraint> cuts;
      for (const auto& c : hidden) {
        if (!c.satisfied_by(x)) {
          cuts.push_back(c);
          break;
        }
      }
      return cuts;
    });
    const auto lazy_sol = solve_with_separation(lazy);
    CHECK(lazy_sol.value == *expected);
    ++solved;
  }
  CHECK(solved > 100);
  CHECK(infeasible > 0);
}

TEST_CASE("purification raises the tight rank and keeps the objective") {
  std::vector<Constraint> cons = {row({1, 0}, Sense::LessEqual, 1), row({0, 1}, Sense::LessEqual, 1),
                                  row({1, 1}, Sense::GreaterEqual, 1)};
  const std::vector<Rational> objective = {1, 1};
  const std::vector<Rational> interior = {Rational(1, 2), Rational(1, 2)};
  const auto before = tight_rank(cons, 2, interior);
  const auto x = purify(cons, 2, objective, interior);
  CHECK(tight_rank(cons, 2, x) > before);
  CHECK(tight_rank(cons, 2, x) == 2);
  CHECK(x[0] + x[1] == 1);

  const std::vector<Rational> zero_obj = {0, 0};
  const std::vector<Rational> centre = {Rational(1, 3), Rational(3, 4)};
  const auto y = purify(cons, 2, zero_obj, centre);
  CHECK(tight_rank(cons, 2, y) == 2);
  for (const auto& c : cons) CHECK(c.satisfied_by(y));
}

TEST_CASE("solutions are deterministic and dump to JSON") {
  LinearProgram lp;
  lp.num_vars = 3;
  lp.objective = {0, 0, 0};
  lp.constraints = {row({1, 1, 1}, Sense::Equal, 1)};
  lp.var_names = {"a", "b", "c"};
  const auto a = solve_lp(lp), b = solve_lp(lp);
  CHECK(a.x == b.x);
  const Json j = lp_to_json(lp, &a);
  CHECK(j["variables"][1] == "b");
  CHECK(j["constraints"][0]["sense"] == "==");
  CHECK(j["solution"]["rank"] == 3);
}
