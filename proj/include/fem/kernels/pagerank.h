#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fem/graph/digraph.h"

namespace fem::kernels {

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-8;  // stop once the L1 change drops below this
  std::size_t max_iterations = 200;
};

struct PageRankResult {
  std::vector<double> scores;  // sums to 1
  std::size_t iterations = 0;
  double last_delta = 0.0;
};

// Weighted PageRank: a vertex splits its mass over out-edges in proportion to
// edge weight. Teleport and dangling mass follow `teleport` (uniform when
// empty; otherwise non-negative, normalized internally).
//
// Serial pushes along out-edges; Parallel pulls along in-edges. Both add
// contributions to a vertex in ascending source order, so results are
// bit-identical.
PageRankResult PageRankSerial(const graph::Digraph& g, const PageRankOptions& options = {},
                              std::span<const double> teleport = {});
PageRankResult PageRankParallel(const graph::Digraph& g, const PageRankOptions& options = {},
                                std::span<const double> teleport = {});

}  // namespace fem::kernels
