#include "fem/recsys/metapath.h"

#include <algorithm>

#include "fem/common/errors.h"

namespace fem::recsys {
namespace {

void Validate(const MetaPath& path) {
  if (path.empty() || path.size() > kMaxMetaPathLength) {
    throw SchemaError("meta-path must have between 1 and 4 edge types");
  }
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (TargetType(path[i - 1]) != SourceType(path[i])) {
      throw SchemaError("meta-path " + MetaPathName(path) + " does not chain");
    }
  }
}

}  // namespace

MetaPath ParseMetaPath(std::string_view spec) {
  MetaPath path;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto dash = spec.find('-', pos);
    const auto part = spec.substr(pos, dash == std::string_view::npos ? std::string_view::npos : dash - pos);
    path.push_back(ParseEdgeType(part));
    if (dash == std::string_view::npos) break;
    pos = dash + 1;
  }
  Validate(path);
  return path;
}

std::string MetaPathName(const MetaPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '-';
    out += EdgeTypeCode(path[i]);
  }
  return out;
}

std::vector<double> MetapathReach(const HetGraph& graph, VertexId start, const MetaPath& path) {
  if (start >= graph.vertex_count()) throw UnknownVertexError("vertex index out of range");
  Validate(path);
  if (graph.vertex(start).type != SourceType(path.front())) {
    throw SchemaError("meta-path " + MetaPathName(path) + " cannot start at a " +
                      std::string(1, VertexTypeCode(graph.vertex(start).type)) + " vertex");
  }
  std::vector<double> mass(graph.vertex_count(), 0.0);
  mass[start] = 1.0;
  std::vector<VertexId> frontier{start};
  for (EdgeType step : path) {
    const auto& adj = graph.Adjacency(step);
    std::vector<double> next(graph.vertex_count(), 0.0);
    std::vector<VertexId> next_frontier;
    std::vector<char> reached(graph.vertex_count(), 0);
    for (VertexId v : frontier) {
      const auto nbrs = adj.OutNeighbors(v);
      const auto ws = adj.OutWeights(v);
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        if (!reached[nbrs[i]]) {
          reached[nbrs[i]] = 1;
          next_frontier.push_back(nbrs[i]);
        }
        next[nbrs[i]] += mass[v] * ws[i];
      }
    }
    std::sort(next_frontier.begin(), next_frontier.end());
    mass.swap(next);
    frontier.swap(next_frontier);
  }
  return mass;
}

double MetapathScore(const HetGraph& graph, VertexId start, VertexId end, const MetaPath& path) {
  if (end >= graph.vertex_count()) throw UnknownVertexError("vertex index out of range");
  return MetapathReach(graph, start, path)[end];
}

}  // namespace fem::recsys
