#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fem::graph {

using VertexId = std::uint32_t;

struct WeightedEdge {
  VertexId src = 0;
  VertexId dst = 0;
  double weight = 1.0;
};

// Compressed sparse row adjacency. Out-neighbours of each vertex are sorted
// by target id; parallel edges are merged by summing weights.
class Digraph {
 public:
  Digraph() = default;
  Digraph(std::size_t vertex_count, std::vector<WeightedEdge> edges);

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size(); }

  std::span<const VertexId> OutNeighbors(VertexId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::span<const double> OutWeights(VertexId v) const {
    return {weights_.data() + offsets_[v], weights_.data() + offsets_[v + 1]};
  }
  std::size_t OutDegree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  Digraph Transposed() const;
  std::vector<WeightedEdge> Edges() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> targets_;
  std::vector<double> weights_;
};

}  // namespace fem::graph
