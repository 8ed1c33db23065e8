#include "fem/kernels/walks.h"

#include <algorithm>
#include <random>

#include "fem/common/hash.h"

namespace fem::kernels {
namespace {

// Cumulative out-weight per edge slot, parallel to the CSR layout.
struct CumulativeTable {
  std::vector<std::size_t> begin;
  std::vector<double> cumulative;
};

CumulativeTable BuildTable(const graph::Digraph& g) {
  CumulativeTable t;
  t.begin.resize(g.vertex_count() + 1, 0);
  t.cumulative.reserve(g.edge_count());
  for (graph::VertexId v = 0; v < g.vertex_count(); ++v) {
    t.begin[v] = t.cumulative.size();
    double acc = 0.0;
    for (double w : g.OutWeights(v)) {
      acc += std::max(w, 0.0);
      t.cumulative.push_back(acc);
    }
  }
  t.begin[g.vertex_count()] = t.cumulative.size();
  return t;
}

Walk OneWalk(const graph::Digraph& g, const CumulativeTable& table, graph::VertexId start,
             std::size_t walk_index, const WalkOptions& options) {
  std::mt19937_64 rng(SplitMix64(options.seed ^ SplitMix64((std::uint64_t{start} << 32) ^ walk_index)));
  Walk walk;
  walk.reserve(options.length);
  if (options.length == 0) return walk;
  walk.push_back(start);
  graph::VertexId current = start;
  while (walk.size() < options.length) {
    const std::size_t lo = table.begin[current];
    const std::size_t hi = table.begin[current + 1];
    if (lo == hi || table.cumulative[hi - 1] <= 0.0) break;
    const double target = UnitDouble(rng()) * table.cumulative[hi - 1];
    auto it = std::upper_bound(table.cumulative.begin() + static_cast<std::ptrdiff_t>(lo),
                               table.cumulative.begin() + static_cast<std::ptrdiff_t>(hi), target);
    std::size_t slot = static_cast<std::size_t>(it - table.cumulative.begin());
    if (slot >= hi) slot = hi - 1;
    current = g.OutNeighbors(current)[slot - lo];
    walk.push_back(current);
  }
  return walk;
}

}  // namespace

double UnitDouble(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::vector<Walk> GuidedWalksSerial(const graph::Digraph& transitions, const WalkOptions& options) {
  const CumulativeTable table = BuildTable(transitions);
  const std::size_t n = transitions.vertex_count();
  std::vector<Walk> walks(n * options.walks_per_vertex);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = 0; w < options.walks_per_vertex; ++w) {
      walks[v * options.walks_per_vertex + w] =
          OneWalk(transitions, table, static_cast<graph::VertexId>(v), w, options);
    }
  }
  return walks;
}

std::vector<Walk> GuidedWalksParallel(const graph::Digraph& transitions, const WalkOptions& options) {
  const CumulativeTable table = BuildTable(transitions);
  const std::size_t n = transitions.vertex_count();
  const std::size_t total = n * options.walks_per_vertex;
  std::vector<Walk> walks(total);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t v = i / options.walks_per_vertex;
    const std::size_t w = i % options.walks_per_vertex;
    walks[i] = OneWalk(transitions, table, static_cast<graph::VertexId>(v), w, options);
  }
  return walks;
}

}  // namespace fem::kernels
