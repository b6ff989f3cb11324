#include "mvtsp/gpolymatroid.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "mvtsp/lp.hpp"

namespace mvtsp {

namespace {

constexpr std::size_t kExhaustiveLimit = 20;

ElementSet mask_to_set(std::size_t n, unsigned long mask) {
  ElementSet Y(n, false);
  for (std::size_t i = 0; i < n; ++i) Y[i] = (mask >> i) & 1ul;
  return Y;
}

void require_exhaustive(std::size_t n, const char* what) {
  if (n > kExhaustiveLimit) {
    throw CapabilityError(std::string(what) + " enumerates subsets; ground set too large (" +
                          std::to_string(n) + " > " + std::to_string(kExhaustiveLimit) + ")");
  }
}

ElementSet complement(const ElementSet& Y) {
  ElementSet out(Y.size());
  for (std::size_t i = 0; i < Y.size(); ++i) out[i] = !Y[i];
  return out;
}

}  // namespace

Integer set_sum(const std::vector<Integer>& z, const ElementSet& Y) {
  Integer s = 0;
  for (std::size_t i = 0; i < Y.size(); ++i) {
    if (Y[i]) s += z[i];
  }
  return s;
}

Rational set_sum(const std::vector<Rational>& x, const ElementSet& Y) {
  Rational s = 0;
  for (std::size_t i = 0; i < Y.size(); ++i) {
    if (Y[i]) s += x[i];
  }
  return s;
}

std::optional<ElementSet> SetFunction::violated_upper(const std::vector<Rational>& w) const {
  const std::size_t n = size();
  require_exhaustive(n, "set function separation");
  std::optional<ElementSet> best;
  Rational best_excess = 0;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    ElementSet Y = mask_to_set(n, mask);
    Rational excess = set_sum(w, Y) - Rational(value(Y));
    if (excess > best_excess) {
      best_excess = excess;
      best = std::move(Y);
    }
  }
  return best;
}

Integer UniformMatroidRank::value(const ElementSet& Y) const {
  const auto c = static_cast<std::size_t>(std::count(Y.begin(), Y.end(), true));
  return static_cast<unsigned long>(std::min(c, k_));
}

std::optional<ElementSet> UniformMatroidRank::violated_upper(const std::vector<Rational>& w) const {
  std::vector<std::size_t> order(size_);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  Rational prefix = 0, best_excess = 0;
  std::size_t best_len = 0;
  for (std::size_t j = 0; j < size_; ++j) {
    prefix += w[order[j]];
    Rational excess = prefix - static_cast<unsigned long>(std::min(j + 1, k_));
    if (excess > best_excess) {
      best_excess = excess;
      best_len = j + 1;
    }
  }
  if (best_len == 0) return std::nullopt;
  ElementSet Y(size_, false);
  for (std::size_t j = 0; j < best_len; ++j) Y[order[j]] = true;
  return Y;
}

std::vector<PairCut> ParamodularPair::separate(const std::vector<Rational>& w) const {
  const std::size_t n = size();
  require_exhaustive(n, "pair separation");
  std::optional<ElementSet> up, low;
  Rational up_excess = 0, low_excess = 0;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    ElementSet Y = mask_to_set(n, mask);
    const Rational wy = set_sum(w, Y);
    Rational e = wy - Rational(upper(Y));
    if (e > up_excess) {
      up_excess = e;
      up = Y;
    }
    e = Rational(lower(Y)) - wy;
    if (e > low_excess) {
      low_excess = e;
      low = Y;
    }
  }
  std::vector<PairCut> cuts;
  if (up) cuts.push_back({std::move(*up), true});
  if (low) cuts.push_back({std::move(*low), false});
  return cuts;
}

std::vector<PairCut> PolymatroidPair::separate(const std::vector<Rational>& w) const {
  ElementSet negative(w.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (sgn(w[i]) < 0) negative[i] = any = true;
  }
  if (any) return {{std::move(negative), false}};
  if (auto Y = b_->violated_upper(w)) return {{std::move(*Y), true}};
  return {};
}

Integer ComplementaryPair::lower(const ElementSet& Y) const {
  return b_->value(ElementSet(Y.size(), true)) - b_->value(complement(Y));
}

std::vector<PairCut> ComplementaryPair::separate(const std::vector<Rational>& w) const {
  const ElementSet all(size(), true);
  const Rational total = set_sum(w, all);
  const Rational base = b_->value(all);
  if (total > base) return {{all, true}};
  if (total < base) return {{all, false}};
  // With x(S) = b(S), x(Y) >= p(Y) is x(S - Y) <= b(S - Y).
  if (auto Y = b_->violated_upper(w)) return {{std::move(*Y), true}};
  return {};
}

Integer DegreeConstraintSystem::delta(std::size_t ground_size) const {
  std::vector<Integer> load(ground_size, 0);
  for (const auto& h : hyperedges) {
    for (std::size_t i = 0; i < h.elements.size(); ++i) load[h.elements[i]] += h.mult[i];
  }
  Integer best = 0;
  for (const auto& l : load) best = std::max(best, l);
  return best;
}

void DegreeConstraintSystem::check(std::size_t ground_size) const {
  for (std::size_t k = 0; k < hyperedges.size(); ++k) {
    const auto& h = hyperedges[k];
    const std::string tag = "hyperedge " + std::to_string(k);
    if (h.mult.size() != h.elements.size()) throw StructuralError(tag + ": multiplicities misaligned");
    std::vector<bool> seen(ground_size, false);
    for (std::size_t i = 0; i < h.elements.size(); ++i) {
      if (h.elements[i] >= ground_size) throw StructuralError(tag + ": element out of range");
      if (seen[h.elements[i]]) throw StructuralError(tag + ": repeated element");
      seen[h.elements[i]] = true;
      if (h.mult[i] < 0) throw StructuralError(tag + ": negative multiplicity");
    }
    if ((h.f && *h.f < 0) || (h.g && *h.g < 0)) throw StructuralError(tag + ": negative bound");
    if (h.f && h.g && *h.f > *h.g) throw StructuralError(tag + ": f exceeds g");
    switch (mode) {
      case BoundMode::TwoSided:
        if (!h.f || !h.g) throw StructuralError(tag + ": two-sided mode needs f and g");
        break;
      case BoundMode::LowerOnly:
        if (!h.f || h.g) throw StructuralError(tag + ": lower-only mode takes f alone");
        break;
      case BoundMode::UpperOnly:
        if (h.f || !h.g) throw StructuralError(tag + ": upper-only mode takes g alone");
        break;
    }
  }
}

std::vector<Integer> hyperedge_violations(const DegreeConstraintSystem& dcs,
                                          const std::vector<Integer>& z) {
  std::vector<Integer> out;
  for (const auto& h : dcs.hyperedges) {
    Integer load = 0;
    for (std::size_t i = 0; i < h.elements.size(); ++i) load += h.mult[i] * z[h.elements[i]];
    Integer v = 0;
    if (h.f && *h.f - load > v) v = *h.f - load;
    if (h.g && load - *h.g > v) v = load - *h.g;
    out.push_back(v);
  }
  return out;
}

WorkingPolytopeState::WorkingPolytopeState(std::shared_ptr<const ParamodularPair> pair, Box box)
    : pair_(std::move(pair)), box_(std::move(box)) {
  const std::size_t n = pair_->size();
  if (!box_.lower.empty() && box_.lower.size() != n) throw StructuralError("box lower size mismatch");
  if (!box_.upper.empty() && box_.upper.size() != n) throw StructuralError("box upper size mismatch");
  for (std::size_t s = 0; s < n; ++s) {
    if (box_.lo(s) < 0) throw StructuralError("box lower bounds must be non-negative");
    if (auto u = box_.hi(s); u && *u < box_.lo(s)) throw StructuralError("box has L > U");
  }
  alive_.assign(n, true);
  offset_.assign(n, 0);
}

std::vector<std::size_t> WorkingPolytopeState::surviving() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < size(); ++s) {
    if (alive_[s]) out.push_back(s);
  }
  return out;
}

Integer WorkingPolytopeState::lower(const ElementSet& Y) const {
  std::vector<std::size_t> dead;
  for (std::size_t s = 0; s < size(); ++s) {
    if (!alive_[s]) dead.push_back(s);
    if (!alive_[s] && Y[s]) throw StructuralError("set contains a deleted element");
  }
  require_exhaustive(dead.size(), "face border evaluation");
  std::optional<Integer> best;
  for (unsigned long mask = 0; mask < (1ul << dead.size()); ++mask) {
    ElementSet X = Y;
    for (std::size_t i = 0; i < dead.size(); ++i) X[dead[i]] = (mask >> i) & 1ul;
    Integer v = pair_->lower(X) - set_sum(offset_, X);
    if (!best || v > *best) best = v;
  }
  return *best;
}

Integer WorkingPolytopeState::upper(const ElementSet& Y) const {
  std::vector<std::size_t> dead;
  for (std::size_t s = 0; s < size(); ++s) {
    if (!alive_[s]) dead.push_back(s);
    if (!alive_[s] && Y[s]) throw StructuralError("set contains a deleted element");
  }
  require_exhaustive(dead.size(), "face border evaluation");
  std::optional<Integer> best;
  for (unsigned long mask = 0; mask < (1ul << dead.size()); ++mask) {
    ElementSet X = Y;
    for (std::size_t i = 0; i < dead.size(); ++i) X[dead[i]] = (mask >> i) & 1ul;
    Integer v = pair_->upper(X) - set_sum(offset_, X);
    if (!best || v < *best) best = v;
  }
  return *best;
}

Integer WorkingPolytopeState::box_lower(std::size_t s) const {
  return std::max(Integer(0), Integer(box_.lo(s) - offset_[s]));
}

std::optional<Integer> WorkingPolytopeState::box_upper(std::size_t s) const {
  std::optional<Integer> hi = box_.hi(s);
  if (unit_box_ && (!hi || unit_hi_[s] < *hi)) hi = unit_hi_[s];
  if (!hi) return std::nullopt;
  return Integer(*hi - offset_[s]);
}

bool WorkingPolytopeState::contains(const std::vector<Integer>& x) const {
  const std::size_t n = size();
  if (x.size() != n) throw StructuralError("point size mismatch");
  require_exhaustive(n, "membership check");
  std::vector<Integer> total(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (!alive_[s]) {
      if (x[s] != 0) return false;
    } else {
      if (x[s] < box_lower(s)) return false;
      if (auto u = box_upper(s); u && x[s] > *u) return false;
    }
    total[s] = offset_[s] + x[s];
  }
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    const ElementSet Y = mask_to_set(n, mask);
    const Integer v = set_sum(total, Y);
    if (v < pair_->lower(Y) || v > pair_->upper(Y)) return false;
  }
  return true;
}

WorkingPolytopeState WorkingPolytopeState::contract(const std::vector<Integer>& z) const {
  if (z.size() != size()) throw StructuralError("contraction vector size mismatch");
  WorkingPolytopeState next = *this;
  for (std::size_t s = 0; s < size(); ++s) {
    if (z[s] < 0) throw StructuralError("contraction vector must be non-negative");
    if (!alive_[s] && z[s] != 0) throw StructuralError("contraction touches a deleted element");
    if (auto u = box_upper(s); alive_[s] && u && z[s] > *u) {
      throw StructuralError("contraction vector leaves the box at element " + std::to_string(s));
    }
    next.offset_[s] += z[s];
  }
  return next;
}

WorkingPolytopeState WorkingPolytopeState::remove(std::size_t s) const {
  if (s >= size() || !alive_[s]) throw StructuralError("unknown element " + std::to_string(s));
  WorkingPolytopeState next = *this;
  next.alive_[s] = false;
  return next;
}

WorkingPolytopeState WorkingPolytopeState::intersect_unit_box() const {
  WorkingPolytopeState next = *this;
  next.unit_box_ = true;
  next.unit_hi_.resize(size());
  for (std::size_t s = 0; s < size(); ++s) next.unit_hi_[s] = offset_[s] + 1;
  return next;
}

std::vector<PairCut> WorkingPolytopeState::separate_total(const std::vector<Rational>& x) const {
  std::vector<Rational> w(size());
  for (std::size_t s = 0; s < size(); ++s) w[s] = Rational(offset_[s]) + (alive_[s] ? x[s] : Rational(0));
  return pair_->separate(w);
}

namespace {

struct PoolEntry {
  ElementSet set;
  bool upper;
  Integer bound;  // b(set) or p(set) of the original pair
};

std::string pool_key(const ElementSet& Y, bool upper) {
  std::string k(Y.size() + 1, '0');
  for (std::size_t i = 0; i < Y.size(); ++i) k[i] = Y[i] ? '1' : '0';
  k.back() = upper ? 'u' : 'l';
  return k;
}

class CutPool {
 public:
  explicit CutPool(const ParamodularPair& pair) : pair_(pair) {}

  const PoolEntry* add(const ElementSet& Y, bool upper) {
    auto [it, fresh] = index_.emplace(pool_key(Y, upper), entries_.size());
    if (!fresh) return nullptr;
    entries_.push_back({Y, upper, upper ? pair_.upper(Y) : pair_.lower(Y)});
    return &entries_.back();
  }
  const std::vector<PoolEntry>& entries() const { return entries_; }

 private:
  const ParamodularPair& pair_;
  std::vector<PoolEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

// Row of a border constraint in local variables; nullopt when it has no
// surviving element (then it is a constant that must hold).
std::optional<Constraint> border_row(const PoolEntry& e, const WorkingPolytopeState& st,
                                     const std::vector<int>& local) {
  std::vector<std::pair<std::size_t, Rational>> terms;
  for (std::size_t s = 0; s < e.set.size(); ++s) {
    if (e.set[s] && local[s] >= 0) terms.emplace_back(static_cast<std::size_t>(local[s]), 1);
  }
  const Integer rhs = e.bound - set_sum(st.offset(), e.set);
  if (terms.empty()) {
    MVTSP_CHECK(e.upper ? rhs >= 0 : rhs <= 0, "border constraint without surviving elements fails");
    return std::nullopt;
  }
  return make_constraint(std::move(terms), e.upper ? Sense::LessEqual : Sense::GreaterEqual,
                         Rational(rhs), e.upper ? "b" : "p");
}

}  // namespace

RoundingResult iterative_round(std::shared_ptr<const ParamodularPair> pair,
                               const std::vector<Rational>& cost,
                               const DegreeConstraintSystem& dcs, const Box& box) {
  const std::size_t n = pair->size();
  if (cost.size() != n) throw StructuralError("cost vector size mismatch");
  dcs.check(n);
  const Integer delta = dcs.delta(n);
  WorkingPolytopeState st(pair, box);
  const std::size_t m = dcs.hyperedges.size();

  std::vector<bool> he_alive(m, true);
  auto current_mass = [&](const Hyperedge& h) {
    Integer mass = 0;
    for (std::size_t i = 0; i < h.elements.size(); ++i) {
      if (st.alive(h.elements[i])) mass += h.mult[i];
    }
    return mass;
  };
  auto fixed_load = [&](const Hyperedge& h) {
    Integer load = 0;
    for (std::size_t i = 0; i < h.elements.size(); ++i) load += h.mult[i] * st.offset()[h.elements[i]];
    return load;
  };
  for (std::size_t k = 0; k < m; ++k) {
    const auto& h = dcs.hyperedges[k];
    if (current_mass(h) != 0) continue;
    if ((h.f && *h.f > 0) || (h.g && *h.g < 0)) {
      throw InfeasibleError("hyperedge " + std::to_string(k) + " has no mass but a positive lower bound");
    }
    he_alive[k] = false;
  }

  CutPool pool(*pair);
  pool.add(ElementSet(n, true), true);
  pool.add(ElementSet(n, true), false);
  for (std::size_t s = 0; s < n; ++s) {
    ElementSet Y(n, false);
    Y[s] = true;
    pool.add(Y, true);
  }

  RoundingResult result;
  std::optional<Rational> previous_total;
  const std::size_t cap = 3 * n + m + 5;
  std::size_t iteration = 0;
  while (!st.surviving().empty()) {
    if (++iteration > cap) throw InternalError("iterative rounding exceeded its iteration cap");
    const auto alive = st.surviving();
    std::vector<int> local(n, -1);
    for (std::size_t i = 0; i < alive.size(); ++i) local[alive[i]] = static_cast<int>(i);

    LinearProgram lp;
    lp.num_vars = alive.size();
    for (std::size_t s : alive) {
      lp.objective.push_back(cost[s]);
      lp.var_names.push_back("x" + std::to_string(s));
    }
    for (const auto& e : pool.entries()) {
      if (auto row = border_row(e, st, local)) lp.constraints.push_back(std::move(*row));
    }
    for (std::size_t s : alive) {
      const std::size_t j = static_cast<std::size_t>(local[s]);
      if (const Integer lo = st.box_lower(s); lo > 0) {
        lp.constraints.push_back(make_constraint({{j, Rational(1)}}, Sense::GreaterEqual, Rational(lo), "L"));
      }
      if (auto hi = st.box_upper(s)) {
        lp.constraints.push_back(make_constraint({{j, Rational(1)}}, Sense::LessEqual, Rational(*hi), "U"));
      }
    }
    for (std::size_t k = 0; k < m; ++k) {
      if (!he_alive[k]) continue;
      const auto& h = dcs.hyperedges[k];
      std::vector<std::pair<std::size_t, Rational>> terms;
      for (std::size_t i = 0; i < h.elements.size(); ++i) {
        if (local[h.elements[i]] >= 0 && h.mult[i] != 0) {
          terms.emplace_back(static_cast<std::size_t>(local[h.elements[i]]), Rational(h.mult[i]));
        }
      }
      const Integer load = fixed_load(h);
      const std::string tag = "h" + std::to_string(k);
      if (h.f) lp.constraints.push_back(make_constraint(terms, Sense::GreaterEqual, Rational(*h.f - load), tag));
      if (h.g) lp.constraints.push_back(make_constraint(terms, Sense::LessEqual, Rational(*h.g - load), tag));
    }
    lp.oracles.push_back([&](const std::vector<Rational>& x) {
      std::vector<Rational> full(n);
      for (std::size_t s : alive) full[s] = x[static_cast<std::size_t>(local[s])];
      std::vector<Constraint> rows;
      for (const auto& cut : st.separate_total(full)) {
        pool.add(cut.set, cut.upper);
        PoolEntry e{cut.set, cut.upper, cut.upper ? pair->upper(cut.set) : pair->lower(cut.set)};
        if (auto row = border_row(e, st, local)) rows.push_back(std::move(*row));
      }
      return rows;
    });

    LPVertexSolution sol;
    try {
      sol = solve_with_separation(lp);
    } catch (const InfeasibleError&) {
      if (iteration == 1) throw;
      throw InternalError("rounding LP became infeasible after the first iteration");
    }
    MVTSP_CHECK(sol.certificate_rank == alive.size(), "rounding LP solution is not a vertex");
    if (iteration == 1) result.lp_value = sol.value;

    Rational fixed_cost = 0;
    for (std::size_t s = 0; s < n; ++s) fixed_cost += cost[s] * st.offset()[s];
    const Rational total = fixed_cost + sol.value;
    MVTSP_CHECK(!previous_total || total <= *previous_total, "cost of z plus LP optimum increased");
    previous_total = total;

    Json deleted = Json::array(), floored = Json::array(), dropped = Json::array();
    for (std::size_t s : alive) {
      if (sgn(sol.x[static_cast<std::size_t>(local[s])]) == 0) {
        st = st.remove(s);
        deleted.push_back(s);
      }
    }
    std::vector<Integer> fl(n, 0);
    bool any_floor = false;
    for (std::size_t s : alive) {
      fl[s] = floor_of(sol.x[static_cast<std::size_t>(local[s])]);
      if (fl[s] > 0) {
        any_floor = true;
        floored.push_back(Json::array({s, format_integer(fl[s])}));
      }
    }
    if (any_floor) st = st.contract(fl);

    for (std::size_t k = 0; k < m; ++k) {
      if (!he_alive[k]) continue;
      const auto& h = dcs.hyperedges[k];
      const Integer mass = current_mass(h);
      const Integer load = fixed_load(h);
      bool drop = false;
      switch (dcs.mode) {
        case BoundMode::TwoSided:
          drop = mass <= 2 * delta - 1;
          break;
        case BoundMode::LowerOnly:
          drop = *h.f - load <= delta - 1;
          break;
        case BoundMode::UpperOnly:
          drop = *h.g - load + delta - 1 >= mass;
          break;
      }
      if (drop) {
        he_alive[k] = false;
        dropped.push_back(k);
      }
    }
    if (iteration == 1) st = st.intersect_unit_box();
    if (iteration > 1 && deleted.empty() && !any_floor && dropped.empty()) {
      throw InternalError("iterative rounding made no progress");
    }
    result.trace.push_back({{"iteration", iteration},
                            {"lp_value", format_rational(sol.value)},
                            {"deleted", deleted},
                            {"floored", floored},
                            {"dropped_hyperedges", dropped}});
  }
  result.iterations = iteration;
  result.z = st.offset();

  Rational final_cost = 0;
  for (std::size_t s = 0; s < n; ++s) final_cost += cost[s] * result.z[s];
  MVTSP_CHECK(iteration == 0 || final_cost <= result.lp_value, "rounded cost exceeds the LP optimum");
  for (std::size_t s = 0; s < n; ++s) {
    MVTSP_CHECK(result.z[s] >= box.lo(s), "rounded point below the box");
    if (auto u = box.hi(s)) MVTSP_CHECK(result.z[s] <= *u, "rounded point above the box");
  }
  for (std::size_t k = 0; k < m; ++k) {
    const auto& h = dcs.hyperedges[k];
    Integer load = 0;
    for (std::size_t i = 0; i < h.elements.size(); ++i) load += h.mult[i] * result.z[h.elements[i]];
    const Integer slack = dcs.mode == BoundMode::TwoSided ? Integer(2 * delta - 1) : Integer(delta - 1);
    if (h.f) MVTSP_CHECK(load >= *h.f - slack, "hyperedge lower bound violated beyond the guarantee");
    if (h.g) MVTSP_CHECK(load <= *h.g + slack, "hyperedge upper bound violated beyond the guarantee");
  }
  return result;
}

RoundingResult polymatroid_basis_lower_bounded(std::shared_ptr<const SetFunction> b,
                                               const std::vector<Rational>& cost,
                                               const DegreeConstraintSystem& dcs) {
  if (dcs.mode != BoundMode::LowerOnly) throw StructuralError("basis rounding takes lower bounds only");
  return iterative_round(std::make_shared<ComplementaryPair>(std::move(b)), cost, dcs);
}

}  // namespace mvtsp
