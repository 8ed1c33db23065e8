#include "fem/kernels/pagerank.h"

#include <cmath>

#include "fem/common/errors.h"

namespace fem::kernels {
namespace {

struct Prepared {
  std::vector<double> teleport;
  std::vector<double> out_weight;  // row sums; 0 marks a dangling vertex
};

Prepared Prepare(const graph::Digraph& g, std::span<const double> teleport) {
  const std::size_t n = g.vertex_count();
  if (n == 0) throw EmptyGraphError("PageRank over an empty graph");
  Prepared p;
  if (teleport.empty()) {
    p.teleport.assign(n, 1.0 / static_cast<double>(n));
  } else {
    if (teleport.size() != n) throw Error("teleport vector size mismatch");
    double sum = 0.0;
    for (double t : teleport) {
      if (!(t >= 0.0)) throw Error("teleport weights must be non-negative");
      sum += t;
    }
    if (sum <= 0.0) throw Error("teleport weights sum to zero");
    p.teleport.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.teleport[i] = teleport[i] / sum;
  }
  p.out_weight.assign(n, 0.0);
  for (graph::VertexId v = 0; v < n; ++v) {
    for (double w : g.OutWeights(v)) p.out_weight[v] += w;
  }
  return p;
}

double DanglingMass(const std::vector<double>& rank, const std::vector<double>& out_weight) {
  double mass = 0.0;
  for (std::size_t v = 0; v < rank.size(); ++v) {
    if (out_weight[v] <= 0.0) mass += rank[v];
  }
  return mass;
}

double L1(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace

PageRankResult PageRankSerial(const graph::Digraph& g, const PageRankOptions& options,
                              std::span<const double> teleport) {
  const Prepared p = Prepare(g, teleport);
  const std::size_t n = g.vertex_count();
  const double d = options.damping;
  PageRankResult result;
  result.scores = p.teleport;
  std::vector<double> next(n);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    const double base = d * DanglingMass(result.scores, p.out_weight) + (1.0 - d);
    std::fill(next.begin(), next.end(), 0.0);
    for (graph::VertexId v = 0; v < n; ++v) {
      if (p.out_weight[v] <= 0.0) continue;
      const auto nbrs = g.OutNeighbors(v);
      const auto ws = g.OutWeights(v);
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        next[nbrs[i]] += d * result.scores[v] * (ws[i] / p.out_weight[v]);
      }
    }
    for (std::size_t u = 0; u < n; ++u) next[u] += base * p.teleport[u];
    result.last_delta = L1(next, result.scores);
    result.scores.swap(next);
    result.iterations = it + 1;
    if (result.last_delta < options.tolerance) break;
  }
  return result;
}

PageRankResult PageRankParallel(const graph::Digraph& g, const PageRankOptions& options,
                                std::span<const double> teleport) {
  const Prepared p = Prepare(g, teleport);
  const graph::Digraph in = g.Transposed();
  const std::size_t n = g.vertex_count();
  const double d = options.damping;
  PageRankResult result;
  result.scores = p.teleport;
  std::vector<double> next(n);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    const double base = d * DanglingMass(result.scores, p.out_weight) + (1.0 - d);
    const auto& rank = result.scores;
#pragma omp parallel for schedule(dynamic, 256)
    for (std::size_t u = 0; u < n; ++u) {
      const auto srcs = in.OutNeighbors(static_cast<graph::VertexId>(u));
      const auto ws = in.OutWeights(static_cast<graph::VertexId>(u));
      double acc = 0.0;
      for (std::size_t i = 0; i < srcs.size(); ++i) {
        acc += d * rank[srcs[i]] * (ws[i] / p.out_weight[srcs[i]]);
      }
      next[u] = acc + base * p.teleport[u];
    }
    result.last_delta = L1(next, result.scores);
    result.scores.swap(next);
    result.iterations = it + 1;
    if (result.last_delta < options.tolerance) break;
  }
  return result;
}

}  // namespace fem::kernels
