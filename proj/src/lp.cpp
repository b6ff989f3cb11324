#include "mvtsp/lp.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace mvtsp {

Rational Constraint::lhs(const std::vector<Rational>& x) const {
  Rational sum = 0;
  for (const auto& [j, a] : terms) sum += a * x[j];
  return sum;
}

bool Constraint::satisfied_by(const std::vector<Rational>& x) const {
  const Rational v = lhs(x);
  switch (sense) {
    case Sense::LessEqual: return v <= rhs;
    case Sense::GreaterEqual: return v >= rhs;
    case Sense::Equal: return v == rhs;
  }
  return false;
}

bool Constraint::tight_at(const std::vector<Rational>& x) const { return lhs(x) == rhs; }

std::string Constraint::key() const {
  std::ostringstream out;
  for (const auto& [j, a] : terms) out << j << ':' << a.get_str() << ' ';
  out << (sense == Sense::LessEqual ? "<=" : sense == Sense::GreaterEqual ? ">=" : "==") << ' '
      << rhs.get_str();
  return out.str();
}

Constraint make_constraint(std::vector<std::pair<std::size_t, Rational>> terms, Sense sense,
                           Rational rhs, std::string label) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Constraint c;
  rhs.canonicalize();
  for (auto& [j, a] : terms) {
    a.canonicalize();
    if (!c.terms.empty() && c.terms.back().first == j) {
      c.terms.back().second += a;
    } else {
      c.terms.emplace_back(j, a);
    }
  }
  std::erase_if(c.terms, [](const auto& t) { return t.second == 0; });
  c.sense = sense;
  c.rhs = std::move(rhs);
  c.label = std::move(label);
  return c;
}

namespace {

constexpr std::size_t kDegenerateRun = 50;

std::vector<std::size_t> nonzero_columns(const std::vector<Rational>& row) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (sgn(row[j]) != 0) out.push_back(j);
  }
  return out;
}

}  // namespace

SimplexSolver::SimplexSolver(std::size_t num_vars, std::vector<Rational> objective)
    : n_(num_vars), cost_(std::move(objective)) {
  if (cost_.size() != n_) throw StructuralError("objective size does not match variable count");
}

void SimplexSolver::add_constraint(const Constraint& c) {
  for (const auto& [j, a] : c.terms) {
    if (j >= n_) throw StructuralError("constraint refers to an unknown variable");
  }
  if (solved_ && c.sense == Sense::Equal) {
    Constraint le = c, ge = c;
    le.sense = Sense::LessEqual;
    ge.sense = Sense::GreaterEqual;
    pending_.push_back(le);
    pending_.push_back(ge);
    return;
  }
  pending_.push_back(c);
}

void SimplexSolver::pivot(std::size_t r, std::size_t q) {
  ++pivots_;
  auto& prow = rows_[r];
  const Rational p = prow[q];
  const auto nz = nonzero_columns(prow);
  if (p != 1) {
    for (std::size_t j : nz) prow[j] /= p;
    rhs_[r] /= p;
  }
  Rational f;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (i == r || sgn(rows_[i][q]) == 0) continue;
    f = rows_[i][q];
    auto& row = rows_[i];
    for (std::size_t j : nz) row[j] -= f * prow[j];
    rhs_[i] -= f * rhs_[r];
  }
  if (sgn(rc_[q]) != 0) {
    f = rc_[q];
    for (std::size_t j : nz) rc_[j] -= f * prow[j];
    neg_obj_ -= f * rhs_[r];
  }
  basis_[r] = q;
}

void SimplexSolver::primal_simplex(const std::vector<bool>& allowed) {
  std::size_t degenerate = 0;
  const std::size_t cols = rc_.size();
  while (true) {
    const bool bland = degenerate >= kDegenerateRun;
    std::size_t q = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (!allowed[j] || sgn(rc_[j]) >= 0) continue;
      if (q == cols || (!bland && rc_[j] < rc_[q])) q = j;
      if (bland) break;
    }
    if (q == cols) return;
    std::size_t r = rows_.size();
    Rational best, ratio;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (sgn(rows_[i][q]) <= 0) continue;
      ratio = rhs_[i] / rows_[i][q];
      if (r == rows_.size() || ratio < best || (ratio == best && basis_[i] < basis_[r])) {
        r = i;
        best = ratio;
      }
    }
    if (r == rows_.size()) throw UnboundedError("linear program is unbounded");
    degenerate = sgn(best) == 0 ? degenerate + 1 : 0;
    pivot(r, q);
  }
}

void SimplexSolver::dual_simplex() {
  std::size_t degenerate = 0;
  const std::size_t cols = rc_.size();
  while (true) {
    const bool bland = degenerate >= kDegenerateRun;
    std::size_t r = rows_.size();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (sgn(rhs_[i]) >= 0) continue;
      if (r == rows_.size()) {
        r = i;
      } else if (bland ? basis_[i] < basis_[r] : rhs_[i] < rhs_[r]) {
        r = i;
      }
    }
    if (r == rows_.size()) return;
    std::size_t q = cols;
    Rational best, ratio;
    for (std::size_t j = 0; j < cols; ++j) {
      if (sgn(rows_[r][j]) >= 0) continue;
      ratio = rc_[j] / -rows_[r][j];
      if (q == cols || ratio < best) {
        q = j;
        best = ratio;
      }
    }
    if (q == cols) throw InfeasibleError("linear program is infeasible (dual ray)");
    degenerate = sgn(best) == 0 ? degenerate + 1 : 0;
    pivot(r, q);
  }
}

void SimplexSolver::reset_objective_row() {
  const std::size_t cols = cost_.size();
  rc_ = cost_;
  neg_obj_ = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Rational& cb = cost_[basis_[i]];
    if (sgn(cb) == 0) continue;
    for (std::size_t j = 0; j < cols; ++j) {
      if (sgn(rows_[i][j]) != 0) rc_[j] -= cb * rows_[i][j];
    }
    neg_obj_ -= cb * rhs_[i];
  }
}

void SimplexSolver::append_row(const Constraint& c) {
  const bool flip = c.sense == Sense::GreaterEqual;
  const std::size_t slack = cost_.size();
  for (auto& row : rows_) row.emplace_back(0);
  cost_.emplace_back(0);
  rc_.emplace_back(0);
  std::vector<Rational> row(slack + 1);
  for (const auto& [j, a] : c.terms) row[j] = flip ? Rational(-a) : a;
  row[slack] = 1;
  Rational rhs = flip ? Rational(-c.rhs) : c.rhs;
  Rational f;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const std::size_t b = basis_[i];
    if (sgn(row[b]) == 0) continue;
    f = row[b];
    const auto& brow = rows_[i];
    for (std::size_t j = 0; j <= slack; ++j) {
      if (sgn(brow[j]) != 0) row[j] -= f * brow[j];
    }
    rhs -= f * rhs_[i];
  }
  rows_.push_back(std::move(row));
  rhs_.push_back(std::move(rhs));
  basis_.push_back(slack);
}

void SimplexSolver::solve() {
  if (solved_) {
    auto pending = std::move(pending_);
    pending_.clear();
    for (const auto& c : pending) append_row(c);
    dual_simplex();
    return;
  }

  // Normalise every row to a non-negative right-hand side.
  struct Row {
    std::vector<Rational> a;
    Sense sense;
    Rational rhs;
  };
  std::vector<Row> normal;
  for (const auto& c : pending_) {
    Row row{std::vector<Rational>(n_), c.sense, c.rhs};
    for (const auto& [j, a] : c.terms) row.a[j] = a;
    const bool negate = (row.sense == Sense::GreaterEqual && sgn(row.rhs) <= 0) ||
                        (row.sense != Sense::GreaterEqual && sgn(row.rhs) < 0);
    sigma_.push_back(negate ? -1 : 1);
    if (negate) {
      for (auto& a : row.a) a = -a;
      row.rhs = -row.rhs;
      if (row.sense == Sense::LessEqual) {
        row.sense = Sense::GreaterEqual;
      } else if (row.sense == Sense::GreaterEqual) {
        row.sense = Sense::LessEqual;
      }
    }
    normal.push_back(std::move(row));
  }
  pending_.clear();

  const std::size_t m = normal.size();
  std::size_t slacks = 0, arts = 0;
  for (const auto& row : normal) {
    if (row.sense != Sense::Equal) ++slacks;
    if (row.sense != Sense::LessEqual) ++arts;
  }
  const std::size_t art_begin = n_ + slacks;
  const std::size_t cols = art_begin + arts;
  rows_.assign(m, std::vector<Rational>(cols));
  rhs_.resize(m);
  basis_.resize(m);
  std::size_t next_slack = n_, next_art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = rows_[i];
    for (std::size_t j = 0; j < n_; ++j) row[j] = normal[i].a[j];
    rhs_[i] = normal[i].rhs;
    if (normal[i].sense == Sense::LessEqual) {
      row[next_slack] = 1;
      unit_col_.push_back(next_slack);
      basis_[i] = next_slack++;
    } else {
      if (normal[i].sense == Sense::GreaterEqual) row[next_slack++] = -1;
      row[next_art] = 1;
      unit_col_.push_back(next_art);
      basis_[i] = next_art++;
    }
  }
  cost_.resize(cols);

  if (arts > 0) {
    std::vector<Rational> phase_cost(cols);
    for (std::size_t j = art_begin; j < cols; ++j) phase_cost[j] = 1;
    std::swap(cost_, phase_cost);
    reset_objective_row();
    primal_simplex(std::vector<bool>(cols, true));
    if (sgn(neg_obj_) != 0) {
      throw InfeasibleError("linear program is infeasible", phase_one_duals());
    }
    std::swap(cost_, phase_cost);
    // Drive artificials out of the basis; rows where that fails are redundant.
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < art_begin) {
        ++i;
        continue;
      }
      std::size_t q = art_begin;
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (sgn(rows_[i][j]) != 0) {
          q = j;
          break;
        }
      }
      if (q < art_begin) {
        pivot(i, q);
        ++i;
      } else {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
    for (auto& row : rows_) row.resize(art_begin);
    cost_.resize(art_begin);
  }
  reset_objective_row();
  primal_simplex(std::vector<bool>(cost_.size(), true));
  solved_ = true;
}

std::vector<Rational> SimplexSolver::phase_one_duals() const {
  // Row i of the initial tableau had a unit column (its slack for <= rows,
  // its artificial otherwise). In phase one rc = c1 - y.A, so y_i = c1 - rc on
  // that column; sigma maps back to the caller's orientation of the row.
  std::vector<Rational> y(unit_col_.size());
  for (std::size_t i = 0; i < unit_col_.size(); ++i) {
    y[i] = (cost_[unit_col_[i]] - rc_[unit_col_[i]]) * sigma_[i];
  }
  return y;
}

std::vector<Rational> SimplexSolver::primal() const {
  std::vector<Rational> x(n_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (basis_[i] < n_) x[basis_[i]] = rhs_[i];
  }
  return x;
}

Rational SimplexSolver::objective_value() const { return -neg_obj_; }

namespace {

// Row-reduces `rows` in place and returns the rank.
std::size_t rank_of(std::vector<std::vector<Rational>> rows, std::size_t cols) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && sgn(rows[p][c]) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      if (sgn(rows[i][c]) == 0) continue;
      const Rational f = rows[i][c] / rows[rank][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<Rational>> tight_rows(const std::vector<Constraint>& constraints,
                                              std::size_t num_vars,
                                              const std::vector<Rational>& x) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& c : constraints) {
    if (!c.tight_at(x)) continue;
    std::vector<Rational> row(num_vars);
    for (const auto& [j, a] : c.terms) row[j] = a;
    rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < num_vars; ++j) {
    if (sgn(x[j]) == 0) {
      std::vector<Rational> row(num_vars);
      row[j] = 1;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// A nonzero vector d with rows . d = 0, or nullopt when the rows have full
// column rank.
std::optional<std::vector<Rational>> null_vector(std::vector<std::vector<Rational>> rows,
                                                 std::size_t cols) {
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && sgn(rows[p][c]) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    const Rational inv = 1 / rows[rank][c];
    for (std::size_t j = c; j < cols; ++j) rows[rank][j] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || sgn(rows[i][c]) == 0) continue;
      const Rational f = rows[i][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[rank][j];
    }
    pivot_col.push_back(c);
    ++rank;
  }
  if (rank == cols) return std::nullopt;
  std::size_t free_col = 0;
  for (std::size_t c = 0, k = 0; c < cols; ++c) {
    if (k < pivot_col.size() && pivot_col[k] == c) {
      ++k;
      continue;
    }
    free_col = c;
    break;
  }
  std::vector<Rational> d(cols);
  d[free_col] = 1;
  for (std::size_t k = 0; k < pivot_col.size(); ++k) d[pivot_col[k]] = -rows[k][free_col];
  return d;
}

LPVertexSolution finish(const LinearProgram& lp, std::vector<Constraint> constraints,
                        std::vector<Rational> x, std::size_t rounds) {
  LPVertexSolution sol;
  sol.value = 0;
  for (std::size_t j = 0; j < lp.num_vars; ++j) sol.value += lp.objective[j] * x[j];
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (!constraints[i].satisfied_by(x)) throw InternalError("simplex point violates a row");
    if (constraints[i].tight_at(x)) sol.tight_constraints.push_back(i);
  }
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (sgn(x[j]) < 0) throw InternalError("simplex point is negative");
    if (sgn(x[j]) == 0) sol.zero_variables.push_back(j);
  }
  sol.certificate_rank = tight_rank(constraints, lp.num_vars, x);
  if (sol.certificate_rank != lp.num_vars) {
    throw InternalError("basic solution has tight rank " + std::to_string(sol.certificate_rank) +
                        " < " + std::to_string(lp.num_vars));
  }
  sol.x = std::move(x);
  sol.constraints = std::move(constraints);
  sol.separation_rounds = rounds;
  return sol;
}

}  // namespace

std::size_t tight_rank(const std::vector<Constraint>& constraints, std::size_t num_vars,
                       const std::vector<Rational>& x) {
  return rank_of(tight_rows(constraints, num_vars, x), num_vars);
}

LPVertexSolution solve_lp(const LinearProgram& lp) {
  LinearProgram plain = lp;
  plain.oracles.clear();
  return solve_with_separation(plain);
}

LPVertexSolution solve_with_separation(const LinearProgram& lp, std::size_t max_rounds) {
  if (lp.objective.size() != lp.num_vars) throw StructuralError("objective size mismatch");
  SimplexSolver solver(lp.num_vars, lp.objective);
  std::vector<Constraint> pool = lp.constraints;
  std::set<std::string> seen;
  for (const auto& c : pool) {
    seen.insert(c.key());
    solver.add_constraint(c);
  }
  solver.solve();
  std::size_t rounds = 0;
  while (true) {
    std::vector<Rational> x = solver.primal();
    bool added = false;
    for (const auto& oracle : lp.oracles) {
      for (auto& cut : oracle(x)) {
        if (cut.satisfied_by(x)) throw InternalError("oracle returned a non-violated cut: " + cut.key());
        // Earlier pool members hold at x, so a repeat comes from this round.
        if (!seen.insert(cut.key()).second) continue;
        solver.add_constraint(cut);
        pool.push_back(std::move(cut));
        added = true;
      }
    }
    if (!added) return finish(lp, std::move(pool), std::move(x), rounds);
    if (++rounds > max_rounds) throw InternalError("separation loop exceeded its round limit");
    solver.solve();
  }
}

std::vector<Rational> purify(const std::vector<Constraint>& constraints, std::size_t num_vars,
                             const std::vector<Rational>& objective, std::vector<Rational> x) {
  for (const auto& c : constraints) {
    if (!c.satisfied_by(x)) throw StructuralError("purify needs a feasible point");
  }
  while (true) {
    auto d = null_vector(tight_rows(constraints, num_vars, x), num_vars);
    if (!d) return x;
    Rational slope = 0;
    for (std::size_t j = 0; j < num_vars; ++j) slope += objective[j] * (*d)[j];
    if (sgn(slope) > 0) {
      for (auto& v : *d) v = -v;
    }
    // Largest step keeping every constraint and x >= 0.
    auto max_step = [&](const std::vector<Rational>& dir) -> std::optional<Rational> {
      std::optional<Rational> best;
      auto consider = [&](const Rational& limit) {
        if (!best || limit < *best) best = limit;
      };
      for (std::size_t j = 0; j < num_vars; ++j) {
        if (sgn(dir[j]) < 0) consider(x[j] / -dir[j]);
      }
      for (const auto& c : constraints) {
        Rational ad = 0;
        for (const auto& [j, a] : c.terms) ad += a * dir[j];
        const Rational slack = c.rhs - c.lhs(x);
        if (c.sense != Sense::GreaterEqual && sgn(ad) > 0) consider(slack / ad);
        if (c.sense != Sense::LessEqual && sgn(ad) < 0) consider(slack / ad);
      }
      return best;
    };
    auto step = max_step(*d);
    if (!step && sgn(slope) == 0) {
      for (auto& v : *d) v = -v;
      step = max_step(*d);
    }
    if (!step) throw UnboundedError("feasible region contains a line or an improving ray");
    for (std::size_t j = 0; j < num_vars; ++j) x[j] += *step * (*d)[j];
  }
}

Json lp_to_json(const LinearProgram& lp, const LPVertexSolution* solution) {
  auto name = [&](std::size_t j) {
    return j < lp.var_names.size() ? lp.var_names[j] : "x" + std::to_string(j);
  };
  auto dump = [&](const Constraint& c) {
    Json terms = Json::array();
    for (const auto& [j, a] : c.terms) terms.push_back(Json::array({name(j), format_rational(a)}));
    Json out;
    out["terms"] = std::move(terms);
    out["sense"] = c.sense == Sense::LessEqual ? "<=" : c.sense == Sense::GreaterEqual ? ">=" : "==";
    out["rhs"] = format_rational(c.rhs);
    if (!c.label.empty()) out["label"] = c.label;
    return out;
  };
  Json out;
  out["variables"] = Json::array();
  for (std::size_t j = 0; j < lp.num_vars; ++j) out["variables"].push_back(name(j));
  out["objective"] = Json::array();
  for (const auto& c : lp.objective) out["objective"].push_back(format_rational(c));
  const auto& cons = solution ? solution->constraints : lp.constraints;
  out["constraints"] = Json::array();
  for (const auto& c : cons) out["constraints"].push_back(dump(c));
  if (solution) {
    Json sol;
    sol["x"] = Json::array();
    for (const auto& v : solution->x) sol["x"].push_back(format_rational(v));
    sol["value"] = format_rational(solution->value);
    sol["tight"] = solution->tight_constraints;
    sol["zero_variables"] = solution->zero_variables;
    sol["rank"] = solution->certificate_rank;
    sol["rounds"] = solution->separation_rounds;
    out["solution"] = std::move(sol);
  }
  return out;
}

}  // namespace mvtsp
