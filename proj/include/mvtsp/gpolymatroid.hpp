#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "mvtsp/arith.hpp"
#include "mvtsp/io.hpp"

namespace mvtsp {

using ElementSet = std::vector<bool>;

// Integer-valued submodular set function with f(empty) = 0.
class SetFunction {
 public:
  virtual ~SetFunction() = default;
  virtual std::size_t size() const = 0;
  virtual Integer value(const ElementSet& Y) const = 0;
  // A nonempty Y with w(Y) > value(Y), of maximum excess; nullopt if none.
  // The default enumerates all subsets and refuses ground sets above 20.
  virtual std::optional<ElementSet> violated_upper(const std::vector<Rational>& w) const;
};

// min(|Y|, k).
class UniformMatroidRank : public SetFunction {
 public:
  UniformMatroidRank(std::size_t size, std::size_t k) : size_(size), k_(k) {}
  std::size_t size() const override { return size_; }
  Integer value(const ElementSet& Y) const override;
  std::optional<ElementSet> violated_upper(const std::vector<Rational>& w) const override;

 private:
  std::size_t size_;
  std::size_t k_;
};

// Border constraint x(set) <= b(set) (upper) or x(set) >= p(set).
struct PairCut {
  ElementSet set;
  bool upper = true;
};

class ParamodularPair {
 public:
  virtual ~ParamodularPair() = default;
  virtual std::size_t size() const = 0;
  virtual Integer lower(const ElementSet& Y) const = 0;  // p
  virtual Integer upper(const ElementSet& Y) const = 0;  // b
  // Violated border constraints at w (empty iff p <= w <= b on every set).
  // The default enumerates all subsets (ground sets up to 20 elements).
  virtual std::vector<PairCut> separate(const std::vector<Rational>& w) const;
};

class FunctionPair : public ParamodularPair {
 public:
  using Fn = std::function<Integer(const ElementSet&)>;
  FunctionPair(std::size_t size, Fn lower, Fn upper)
      : size_(size), lower_(std::move(lower)), upper_(std::move(upper)) {}
  std::size_t size() const override { return size_; }
  Integer lower(const ElementSet& Y) const override { return lower_(Y); }
  Integer upper(const ElementSet& Y) const override { return upper_(Y); }

 private:
  std::size_t size_;
  Fn lower_, upper_;
};

// The polymatroid (0, b).
class PolymatroidPair : public ParamodularPair {
 public:
  explicit PolymatroidPair(std::shared_ptr<const SetFunction> b) : b_(std::move(b)) {}
  std::size_t size() const override { return b_->size(); }
  Integer lower(const ElementSet&) const override { return 0; }
  Integer upper(const ElementSet& Y) const override { return b_->value(Y); }
  std::vector<PairCut> separate(const std::vector<Rational>& w) const override;

 private:
  std::shared_ptr<const SetFunction> b_;
};

// The base polymatroid B(b): p(Y) = b(S) - b(S - Y).
class ComplementaryPair : public ParamodularPair {
 public:
  explicit ComplementaryPair(std::shared_ptr<const SetFunction> b) : b_(std::move(b)) {}
  std::size_t size() const override { return b_->size(); }
  Integer lower(const ElementSet& Y) const override;
  Integer upper(const ElementSet& Y) const override { return b_->value(Y); }
  std::vector<PairCut> separate(const std::vector<Rational>& w) const override;
  const SetFunction& function() const { return *b_; }

 private:
  std::shared_ptr<const SetFunction> b_;
};

// L <= x <= U; empty vectors mean L = 0 and U unbounded.
struct Box {
  std::vector<Integer> lower;
  std::vector<std::optional<Integer>> upper;

  Integer lo(std::size_t s) const { return lower.empty() ? Integer(0) : lower[s]; }
  std::optional<Integer> hi(std::size_t s) const {
    return upper.empty() ? std::nullopt : upper[s];
  }
};

enum class BoundMode { TwoSided, LowerOnly, UpperOnly };

struct Hyperedge {
  std::vector<std::size_t> elements;
  std::vector<Integer> mult;  // aligned with elements
  std::optional<Integer> f;
  std::optional<Integer> g;
};

struct DegreeConstraintSystem {
  std::vector<Hyperedge> hyperedges;
  BoundMode mode = BoundMode::TwoSided;

  // max over elements of the summed multiplicities of the hyperedges holding it
  Integer delta(std::size_t ground_size) const;
  void check(std::size_t ground_size) const;
};

Integer set_sum(const std::vector<Integer>& z, const ElementSet& Y);
Rational set_sum(const std::vector<Rational>& x, const ElementSet& Y);

// Deletion, contraction and box state over a pair. Deleted coordinates stay at
// their accumulated offset, so the state describes the face of the original
// polytope where those coordinates are frozen. Border values are returned in
// residual coordinates (total minus offset); the box is carried separately.
class WorkingPolytopeState {
 public:
  WorkingPolytopeState(std::shared_ptr<const ParamodularPair> pair, Box box = {});

  std::size_t size() const { return alive_.size(); }
  bool alive(std::size_t s) const { return alive_[s]; }
  std::vector<std::size_t> surviving() const;
  const std::vector<Integer>& offset() const { return offset_; }
  bool unit_box() const { return unit_box_; }
  const ParamodularPair& pair() const { return *pair_; }

  // Y must avoid deleted elements. Exponential in the number of deletions.
  Integer lower(const ElementSet& Y) const;
  Integer upper(const ElementSet& Y) const;

  // Residual bounds on a surviving coordinate.
  Integer box_lower(std::size_t s) const;
  std::optional<Integer> box_upper(std::size_t s) const;

  // Residual integral point (zero on deleted elements) within every border
  // constraint and the box; exhaustive, ground sets up to 20 elements.
  bool contains(const std::vector<Integer>& x) const;

  // Shifts both border functions by z. z must be non-negative, zero on
  // deleted elements and inside the residual box.
  WorkingPolytopeState contract(const std::vector<Integer>& z) const;
  WorkingPolytopeState remove(std::size_t s) const;
  // Residual coordinates of surviving elements are limited to [0, 1] from now
  // on (relative to the current offset).
  WorkingPolytopeState intersect_unit_box() const;

  // Violated constraints of the original pair at the total point offset + x.
  std::vector<PairCut> separate_total(const std::vector<Rational>& x) const;

 private:
  std::shared_ptr<const ParamodularPair> pair_;
  Box box_;
  std::vector<bool> alive_;
  std::vector<Integer> offset_;
  bool unit_box_ = false;
  std::vector<Integer> unit_hi_;  // total-coordinate cap once the unit box is on
};

struct RoundingResult {
  std::vector<Integer> z;
  Rational lp_value;  // optimum of the first LP
  std::size_t iterations = 0;
  std::vector<Json> trace;  // one record per iteration
};

// Iterative rounding for a bounded-degree g-polymatroid element with
// multiplicities. Throws InfeasibleError when the first LP is empty.
RoundingResult iterative_round(std::shared_ptr<const ParamodularPair> pair,
                               const std::vector<Rational>& cost,
                               const DegreeConstraintSystem& dcs, const Box& box = {});

// Lower-bounded degree basis of the base polymatroid of b.
RoundingResult polymatroid_basis_lower_bounded(std::shared_ptr<const SetFunction> b,
                                               const std::vector<Rational>& cost,
                                               const DegreeConstraintSystem& dcs);

// Signed amount by which z misses the hyperedge bounds (0 when satisfied),
// per hyperedge of the original system.
std::vector<Integer> hyperedge_violations(const DegreeConstraintSystem& dcs,
                                          const std::vector<Integer>& z);

}  // namespace mvtsp
