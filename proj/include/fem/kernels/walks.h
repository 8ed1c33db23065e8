#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fem/graph/digraph.h"

namespace fem::kernels {

struct WalkOptions {
  std::size_t walks_per_vertex = 10;
  std::size_t length = 40;  // vertices per walk, start included
  std::uint64_t seed = 0;
};

using Walk = std::vector<graph::VertexId>;

// Weighted random walks. Each step picks an out-edge with probability
// proportional to its weight; a vertex without positive out-weight ends the
// walk early. Output is vertex-major: walks of vertex 0 first, then vertex 1.
//
// Every (seed, vertex, walk index) owns an independent generator, so Serial
// and Parallel produce identical walks.
std::vector<Walk> GuidedWalksSerial(const graph::Digraph& transitions, const WalkOptions& options);
std::vector<Walk> GuidedWalksParallel(const graph::Digraph& transitions, const WalkOptions& options);

// Uniform double in [0,1) with 53 random bits.
double UnitDouble(std::uint64_t bits);

}  // namespace fem::kernels
