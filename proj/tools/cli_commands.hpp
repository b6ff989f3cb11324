#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mvtsp/instance.hpp"
#include "mvtsp/pathtsp.hpp"
#include "mvtsp/walk.hpp"

namespace mvtsp::cli {

struct SolveOutcome {
  CompactMultigraph multigraph;
  PathCycleDecomposition decomposition;
  Rational cost;
  std::optional<Rational> lower_bound;  // Held-Karp, approximation algorithms only
  std::optional<PipelineReport> report;
};

// algo is one of exact, tp25, zk15, mvtsp15.
SolveOutcome solve_with(const Instance& inst, const std::string& algo);

// Held-Karp bound; cycle instances go through the split path instance.
Rational held_karp_bound(const Instance& inst);

Json solution_json(const std::string& algo, const SolveOutcome& s);

// Full command line without the program name. Returns the exit code:
// 0 ok, 1 domain failure, 2 usage or parse error.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace mvtsp::cli
