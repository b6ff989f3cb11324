#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "mvtsp/instance.hpp"

namespace mvtsp {

enum class MetricKind { Euclidean, RandomMetric };

MetricKind parse_metric_kind(const std::string& name);

struct GenerateOptions {
  int n = 5;
  Integer r_max = 3;
  std::uint64_t seed = 1;
  MetricKind metric = MetricKind::Euclidean;
  bool cycle = false;  // omit t
  int grid = 100;      // euclidean coordinate range [0, grid]
  int weight_max = 20; // random-metric base weights in [1, weight_max]
};

// Deterministic for fixed options. Euclidean: integer grid points, costs are
// rounded-up distances, loops 2 * min incident cost. Random metric: shortest
// path closure of random weights, loops uniform in [0, 2 * min incident].
// s = 0 and t = n - 1 unless `cycle`.
Instance generate_instance(const GenerateOptions& opts);

// Uniform integer in [lo, hi], platform independent.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);
Integer uniform_integer(std::mt19937_64& rng, const Integer& lo, const Integer& hi);

}  // namespace mvtsp
