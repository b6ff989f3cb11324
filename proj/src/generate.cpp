#include "mvtsp/generate.hpp"

#include <algorithm>

namespace mvtsp {

MetricKind parse_metric_kind(const std::string& name) {
  if (name == "euclidean") return MetricKind::Euclidean;
  if (name == "random-metric") return MetricKind::RandomMetric;
  throw StructuralError("unknown metric '" + name + "'");
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

Integer uniform_integer(std::mt19937_64& rng, const Integer& lo, const Integer& hi) {
  const Integer span = hi - lo + 1;
  if (span <= 0) throw StructuralError("empty range");
  if (!span.fits_ulong_p()) throw CapabilityError("range too large");
  return lo + Integer(static_cast<unsigned long>(uniform_below(rng, span.get_ui())));
}

namespace {

Integer ceil_sqrt(const Integer& x) {
  Integer root;
  mpz_sqrt(root.get_mpz_t(), x.get_mpz_t());
  if (root * root < x) root += 1;
  return root;
}

}  // namespace

Instance generate_instance(const GenerateOptions& opts) {
  if (opts.n < 2) throw StructuralError("n must be at least 2");
  if (opts.r_max < 1) throw StructuralError("r_max must be at least 1");
  std::mt19937_64 rng(opts.seed);
  const int n = opts.n;
  std::vector<Rational> d(static_cast<std::size_t>(n) * n);
  auto at = [&](int u, int v) -> Rational& { return d[static_cast<std::size_t>(u) * n + v]; };

  if (opts.metric == MetricKind::Euclidean) {
    std::vector<std::pair<long, long>> pts(n);
    for (auto& p : pts) {
      p.first = static_cast<long>(uniform_below(rng, opts.grid + 1));
      p.second = static_cast<long>(uniform_below(rng, opts.grid + 1));
    }
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        const long dx = pts[u].first - pts[v].first, dy = pts[u].second - pts[v].second;
        at(u, v) = Rational(ceil_sqrt(Integer(dx * dx + dy * dy)));
      }
    }
  } else {
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        at(u, v) = at(v, u) = Rational(1 + static_cast<long>(uniform_below(rng, opts.weight_max)));
      }
    }
    for (int k = 0; k < n; ++k) {
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          if (u != v && u != k && v != k && at(u, k) + at(k, v) < at(u, v)) at(u, v) = at(u, k) + at(k, v);
        }
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    Rational best;
    bool first = true;
    for (int u = 0; u < n; ++u) {
      if (u == v) continue;
      if (first || at(u, v) < best) best = at(u, v);
      first = false;
    }
    if (opts.metric == MetricKind::Euclidean) {
      at(v, v) = 2 * best;
    } else {
      const Integer top = floor_of(2 * best);
      at(v, v) = Rational(uniform_integer(rng, 0, top));
    }
  }

  Instance inst;
  inst.n = n;
  inst.cost = std::move(d);
  for (int v = 0; v < n; ++v) inst.requests.push_back(uniform_integer(rng, 1, opts.r_max));
  inst.s = 0;
  if (!opts.cycle) inst.t = n - 1;
  return inst;
}

}  // namespace mvtsp
