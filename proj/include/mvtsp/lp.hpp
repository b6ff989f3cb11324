#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvtsp/arith.hpp"
#include "mvtsp/io.hpp"

namespace mvtsp {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Constraint {
  std::vector<std::pair<std::size_t, Rational>> terms;  // sorted by variable, no zeros
  Sense sense = Sense::LessEqual;
  Rational rhs;
  std::string label;

  Rational lhs(const std::vector<Rational>& x) const;
  bool satisfied_by(const std::vector<Rational>& x) const;
  bool tight_at(const std::vector<Rational>& x) const;
  // Canonical text of terms, sense and rhs; used to deduplicate cut pools.
  std::string key() const;
};

// Sorts terms, merges duplicates and drops zero coefficients.
Constraint make_constraint(std::vector<std::pair<std::size_t, Rational>> terms, Sense sense,
                           Rational rhs, std::string label = {});

// Returns constraints of the intended polytope violated by x (empty if none).
using SeparationOracle = std::function<std::vector<Constraint>(const std::vector<Rational>& x)>;

// minimize objective . x subject to constraints, oracle cuts and x >= 0.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<Rational> objective;
  std::vector<Constraint> constraints;
  std::vector<SeparationOracle> oracles;
  std::vector<std::string> var_names;  // optional, debug dump only
};

struct LPVertexSolution {
  std::vector<Rational> x;
  Rational value;
  // Final constraint set: explicit constraints followed by separated cuts.
  std::vector<Constraint> constraints;
  // Indices into `constraints` tight at x, and variables at zero.
  std::vector<std::size_t> tight_constraints;
  std::vector<std::size_t> zero_variables;
  std::size_t certificate_rank = 0;
  std::size_t separation_rounds = 0;
};

// Exact two-phase simplex with dual-simplex re-optimisation for added cuts.
// Pivoting is deterministic (Dantzig with lowest-index ties, Bland after a
// run of degenerate pivots).
class SimplexSolver {
 public:
  SimplexSolver(std::size_t num_vars, std::vector<Rational> objective);

  void add_constraint(const Constraint& c);
  // Solves from scratch the first time, afterwards re-optimises with the dual
  // simplex. Throws InfeasibleError / UnboundedError.
  void solve();
  std::vector<Rational> primal() const;
  Rational objective_value() const;
  std::size_t pivots() const { return pivots_; }

 private:
  void pivot(std::size_t r, std::size_t q);
  void primal_simplex(const std::vector<bool>& allowed);
  void dual_simplex();
  void append_row(const Constraint& c);
  void reset_objective_row();
  std::vector<Rational> phase_one_duals() const;

  std::size_t n_;
  std::vector<Rational> cost_;  // over all columns (structural, slack)
  std::vector<Constraint> pending_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> rc_;
  Rational neg_obj_;
  std::vector<std::size_t> unit_col_;  // first solve only
  std::vector<int> sigma_;
  bool solved_ = false;
  std::size_t pivots_ = 0;
};

// Solves without oracles.
LPVertexSolution solve_lp(const LinearProgram& lp);

// solve -> query oracles -> add cuts -> re-solve until no oracle reports a
// violation. Oracle cuts that are not violated raise InternalError.
LPVertexSolution solve_with_separation(const LinearProgram& lp, std::size_t max_rounds = 100000);

// Rank of the rows of tight constraints together with unit rows of zero
// variables.
std::size_t tight_rank(const std::vector<Constraint>& constraints, std::size_t num_vars,
                       const std::vector<Rational>& x);

// Moves a feasible point along null-space directions of its tight set, never
// increasing the objective, until the tight set has full rank.
std::vector<Rational> purify(const std::vector<Constraint>& constraints, std::size_t num_vars,
                             const std::vector<Rational>& objective, std::vector<Rational> x);

Json lp_to_json(const LinearProgram& lp, const LPVertexSolution* solution = nullptr);

}  // namespace mvtsp
