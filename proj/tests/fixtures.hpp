#pragma once

#include <random>

#include "mvtsp/generate.hpp"
#include "mvtsp/instance.hpp"

namespace fixtures {

using mvtsp::Instance;
using mvtsp::Integer;
using mvtsp::Rational;

inline Instance make_instance(int n, const std::vector<std::vector<long>>& cost,
                              std::vector<long> requests, int s, std::optional<int> t) {
  Instance inst;
  inst.n = n;
  for (const auto& row : cost) {
    for (long c : row) inst.cost.emplace_back(c);
  }
  for (long r : requests) inst.requests.emplace_back(r);
  inst.s = s;
  inst.t = t;
  return inst;
}

// Two vertices u=0, v=1; r = (2, 1); c(uv) = 1, c(uu) = c(vv) = 2.
inline Instance t2() { return make_instance(2, {{2, 1}, {1, 2}}, {2, 1}, 0, 1); }

// a=0, b=1, c=2; c(ab) = c(bc) = 1, c(ac) = 2, loops 2; r = 1; s = a, t = c.
inline Instance t3() {
  return make_instance(3, {{2, 1, 2}, {1, 2, 1}, {2, 1, 2}}, {1, 1, 1}, 0, 2);
}

inline Instance random_instance(std::uint64_t seed, int n, long r_max, bool euclid = false,
                                bool cycle = false) {
  mvtsp::GenerateOptions o;
  o.n = n;
  o.r_max = r_max;
  o.seed = seed;
  o.metric = euclid ? mvtsp::MetricKind::Euclidean : mvtsp::MetricKind::RandomMetric;
  o.cycle = cycle;
  return mvtsp::generate_instance(o);
}

}  // namespace fixtures
