#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "mvtsp/gpolymatroid.hpp"
#include "mvtsp/instance.hpp"

namespace mvtsp {

// b(Z) = |V(Z)| - comp(Z) + rho_hat for nonempty Z, b(empty) = 0, over an
// edge list that may contain loops. With rho_hat = 0 this is the rank of the
// graphic matroid.
class GraphicFunction : public SetFunction {
 public:
  GraphicFunction(int n, std::vector<std::pair<Vertex, Vertex>> edges, Integer rho_hat = 0);
  // Complete graph with loops, elements in edge-id order.
  static std::shared_ptr<GraphicFunction> complete(int n, Integer rho_hat);

  std::size_t size() const override { return edges_.size(); }
  Integer value(const ElementSet& Z) const override;
  // Best packing of disjoint vertex sets S maximising w(E(S)) - |S| + 1,
  // by dynamic programming over vertex subsets (n <= 14). Needs w >= 0.
  std::optional<ElementSet> violated_upper(const std::vector<Rational>& w) const override;

  int vertex_count() const { return n_; }
  const std::vector<std::pair<Vertex, Vertex>>& edges() const { return edges_; }
  const Integer& rho_hat() const { return rho_hat_; }

 private:
  int n_;
  std::vector<std::pair<Vertex, Vertex>> edges_;
  Integer rho_hat_;
};

struct ConnectedMultigraphSystem {
  std::shared_ptr<const GraphicFunction> b;
  std::shared_ptr<const ComplementaryPair> pair;  // base polymatroid of b
  DegreeConstraintSystem dcs;                     // x(delta(v)) >= rho(v), loops weigh 2
  Box box;
  Integer rho_hat;
};

// Throws StructuralError when rho(V) is odd and InfeasibleError when
// rho(V)/2 < n - 1 (no connected multigraph has that few edges).
ConnectedMultigraphSystem connected_multigraph_pair(int n, const std::vector<Integer>& rho,
                                                    const Box& box = {});

// Connected multigraph with rho(V)/2 edges, degrees at least rho(v) - 1, inside
// the box, of cost at most the LP optimum. cost is indexed by edge id.
CompactMultigraph bounded_degree_connected_multigraph(int n, const std::vector<Rational>& cost,
                                                      const std::vector<Integer>& rho,
                                                      const Box& box = {},
                                                      RoundingResult* details = nullptr);

}  // namespace mvtsp
