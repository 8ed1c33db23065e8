#include "fem/graph/digraph.h"

#include <algorithm>
#include <stdexcept>

namespace fem::graph {

Digraph::Digraph(std::size_t vertex_count, std::vector<WeightedEdge> edges) {
  for (const auto& e : edges) {
    if (e.src >= vertex_count || e.dst >= vertex_count) {
      throw std::out_of_range("edge endpoint outside vertex range");
    }
  }
  std::stable_sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  offsets_.assign(vertex_count + 1, 0);
  bool have_prev = false;
  WeightedEdge prev;
  for (const auto& e : edges) {
    if (have_prev && prev.src == e.src && prev.dst == e.dst) {
      weights_.back() += e.weight;
      continue;
    }
    targets_.push_back(e.dst);
    weights_.push_back(e.weight);
    ++offsets_[e.src + 1];
    prev = e;
    have_prev = true;
  }
  for (std::size_t v = 1; v <= vertex_count; ++v) offsets_[v] += offsets_[v - 1];
}

Digraph Digraph::Transposed() const {
  std::vector<WeightedEdge> reversed;
  reversed.reserve(edge_count());
  for (VertexId v = 0; v < vertex_count(); ++v) {
    for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) {
      reversed.push_back({targets_[i], v, weights_[i]});
    }
  }
  return Digraph(vertex_count(), std::move(reversed));
}

std::vector<WeightedEdge> Digraph::Edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(edge_count());
  for (VertexId v = 0; v < vertex_count(); ++v) {
    for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) {
      out.push_back({v, targets_[i], weights_[i]});
    }
  }
  return out;
}

}  // namespace fem::graph
