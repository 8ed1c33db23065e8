#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fem/formula/terms.h"
#include "fem/graph/digraph.h"
#include "fem/ingest/ingest_io.h"
#include "fem/map/skipgram.h"
#include "fem/map/transition.h"

namespace fem::map {

using graph::VertexId;

struct FormulaVertex {
  std::string id;
  std::string latex;
  std::vector<std::string> pages;
  std::string context;
  formula::TermSet terms;
  std::optional<int> birth_year;
  double generality = 0.0;      // PageRank share; sums to 1 over the map
  std::uint64_t complexity = 0; // sum of term levels
  std::vector<double> embedding;  // empty when absent
};

struct EvolutionEdge {
  VertexId src = 0;
  VertexId dst = 0;
  double probability = 0.0;
  friend bool operator==(const EvolutionEdge&, const EvolutionEdge&) = default;
};

struct MapParams {
  TransitionWeights theta;
  std::size_t walk_length = 40;
  std::size_t walks_per_vertex = 10;
  std::size_t dim = 128;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  double mu = 2000.0;
  double damping = 0.85;
  double prune_threshold = 0.5;
  std::uint64_t seed = 42;
};

// Immutable once built. Edges are sorted by (src, dst).
class FemGraph {
 public:
  FemGraph() = default;
  FemGraph(std::vector<FormulaVertex> vertices, std::vector<EvolutionEdge> edges, MapParams params);

  const std::vector<FormulaVertex>& vertices() const { return vertices_; }
  const std::vector<EvolutionEdge>& edges() const { return edges_; }
  const MapParams& params() const { return params_; }
  std::size_t size() const { return vertices_.size(); }

  const FormulaVertex& vertex(VertexId v) const { return vertices_.at(v); }
  std::optional<VertexId> Find(const std::string& id) const;
  VertexId Require(const std::string& id) const;  // throws UnknownFormulaError

  // Out- and in-neighbours, ascending.
  const std::vector<VertexId>& Successors(VertexId v) const { return successors_.at(v); }
  const std::vector<VertexId>& Predecessors(VertexId v) const { return predecessors_.at(v); }

 private:
  std::vector<FormulaVertex> vertices_;
  std::vector<EvolutionEdge> edges_;
  MapParams params_;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<std::vector<VertexId>> successors_;
  std::vector<std::vector<VertexId>> predecessors_;
};

// max(0, cosine) of the two embeddings. Throws MissingEmbeddingError.
double EvolutionProbability(const FormulaVertex& a, const FormulaVertex& b);

// Drops edges below `threshold`; vertices are kept.
FemGraph Prune(const FemGraph& graph, double threshold);

struct SubgraphVertex {
  VertexId vertex = 0;
  int distance = 0;
};

struct Subgraph {
  std::vector<SubgraphVertex> vertices;  // ordered by (distance, formula id)
  std::vector<EvolutionEdge> edges;      // both endpoints retained
};

inline constexpr int kDefaultSubgraphDepth = 3;

// Breadth-first over edges in both directions up to `max_depth` hops.
Subgraph ExtractSubgraph(const FemGraph& graph, VertexId target, int max_depth = kDefaultSubgraphDepth);
Subgraph ExtractSubgraph(const FemGraph& graph, const std::string& target_id, int max_depth = kDefaultSubgraphDepth);

// Hop distances (both directions) from `source`; -1 beyond `max_depth`.
std::vector<int> UndirectedHops(const FemGraph& graph, VertexId source, int max_depth);

struct BuildReport {
  std::size_t candidate_pairs = 0;
  std::size_t directed_by_time = 0;
  std::size_t directed_by_complexity = 0;
  std::size_t directed_by_generality = 0;
  std::size_t directed_by_id = 0;
  std::size_t walks = 0;
  std::size_t edges_before_prune = 0;
  std::vector<double> epoch_objective;
};

// Full pipeline: relations, generality, direction, fused transitions, walks,
// embeddings, evolution probabilities, pruning.
FemGraph BuildEvolutionMap(const ingest::IngestOutput& input, const MapParams& params,
                           BuildReport* report = nullptr);

}  // namespace fem::map
