#include "fem/map/transition.h"

#include <cmath>

namespace fem::map {

double FuseTransition(const TransitionTriple& t, const TransitionWeights& w) {
  return std::tanh(w.context * t.context + w.layout * t.layout + w.generality * t.generality);
}

std::vector<double> ContextTransition(const text::Collection& contexts, std::size_t previous,
                                      std::span<const graph::VertexId> candidates) {
  const text::TermBag& query = contexts.Document(previous);
  std::vector<double> log_likelihoods;
  log_likelihoods.reserve(candidates.size());
  for (graph::VertexId c : candidates) log_likelihoods.push_back(contexts.LogLikelihood(query, c));
  return text::Posterior(log_likelihoods);
}

graph::Digraph RowNormalize(const graph::Digraph& g) {
  std::vector<graph::WeightedEdge> edges;
  edges.reserve(g.edge_count());
  for (graph::VertexId v = 0; v < g.vertex_count(); ++v) {
    double total = 0.0;
    for (double w : g.OutWeights(v)) total += w;
    const auto nbrs = g.OutNeighbors(v);
    const auto ws = g.OutWeights(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      edges.push_back({v, nbrs[i], total > 0.0 ? ws[i] / total : 0.0});
    }
  }
  return graph::Digraph(g.vertex_count(), std::move(edges));
}

}  // namespace fem::map
