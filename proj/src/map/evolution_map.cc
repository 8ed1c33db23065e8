#include "fem/map/evolution_map.h"

#include <algorithm>
#include <deque>
#include <sstream>

#include "fem/common/errors.h"
#include "fem/common/log.h"
#include "fem/formula/mathml_parser.h"
#include "fem/kernels/walks.h"
#include "fem/map/direction.h"
#include "fem/map/relations.h"

namespace fem::map {

FemGraph::FemGraph(std::vector<FormulaVertex> vertices, std::vector<EvolutionEdge> edges, MapParams params)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), params_(params) {
  std::sort(edges_.begin(), edges_.end(), [](const EvolutionEdge& a, const EvolutionEdge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  for (VertexId v = 0; v < vertices_.size(); ++v) {
    if (!index_.emplace(vertices_[v].id, v).second) {
      throw Error("duplicate formula id " + vertices_[v].id);
    }
  }
  successors_.resize(vertices_.size());
  predecessors_.resize(vertices_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.src >= vertices_.size() || e.dst >= vertices_.size() || e.src == e.dst) {
      throw Error("invalid evolution edge");
    }
    if (i > 0 && edges_[i - 1].src == e.src && edges_[i - 1].dst == e.dst) {
      throw Error("duplicate evolution edge");
    }
    successors_[e.src].push_back(e.dst);
    predecessors_[e.dst].push_back(e.src);
  }
  for (auto& p : predecessors_) std::sort(p.begin(), p.end());
}

std::optional<VertexId> FemGraph::Find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexId FemGraph::Require(const std::string& id) const {
  auto v = Find(id);
  if (!v) throw UnknownFormulaError("unknown formula " + id);
  return *v;
}

double EvolutionProbability(const FormulaVertex& a, const FormulaVertex& b) {
  if (a.embedding.empty() || b.embedding.empty()) {
    throw MissingEmbeddingError("formula " + (a.embedding.empty() ? a.id : b.id) + " has no embedding");
  }
  if (a.embedding.size() != b.embedding.size()) throw MissingEmbeddingError("embedding sizes differ");
  return RectifiedCosine(a.embedding, b.embedding);
}

FemGraph Prune(const FemGraph& graph, double threshold) {
  std::vector<EvolutionEdge> kept;
  for (const auto& e : graph.edges()) {
    if (e.probability >= threshold) kept.push_back(e);
  }
  MapParams params = graph.params();
  params.prune_threshold = threshold;
  return FemGraph(graph.vertices(), std::move(kept), params);
}

std::vector<int> UndirectedHops(const FemGraph& graph, VertexId source, int max_depth) {
  std::vector<int> dist(graph.size(), -1);
  if (source >= graph.size()) throw UnknownFormulaError("vertex index out of range");
  std::deque<VertexId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    if (dist[v] >= max_depth) continue;
    for (const auto* nbrs : {&graph.Successors(v), &graph.Predecessors(v)}) {
      for (VertexId u : *nbrs) {
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          queue.push_back(u);
        }
      }
    }
  }
  return dist;
}

Subgraph ExtractSubgraph(const FemGraph& graph, VertexId target, int max_depth) {
  const auto dist = UndirectedHops(graph, target, max_depth);
  Subgraph out;
  for (VertexId v = 0; v < graph.size(); ++v) {
    if (dist[v] >= 0) out.vertices.push_back({v, dist[v]});
  }
  std::sort(out.vertices.begin(), out.vertices.end(), [&](const SubgraphVertex& a, const SubgraphVertex& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return graph.vertex(a.vertex).id < graph.vertex(b.vertex).id;
  });
  for (const auto& e : graph.edges()) {
    if (dist[e.src] >= 0 && dist[e.dst] >= 0) out.edges.push_back(e);
  }
  return out;
}

Subgraph ExtractSubgraph(const FemGraph& graph, const std::string& target_id, int max_depth) {
  return ExtractSubgraph(graph, graph.Require(target_id), max_depth);
}

FemGraph BuildEvolutionMap(const ingest::IngestOutput& input, const MapParams& params,
                           BuildReport* report) {
  BuildReport local_report;
  BuildReport& rep = report ? *report : local_report;
  const std::size_t n = input.formulas.size();
  if (n == 0) throw EmptyGraphError("no formulae to build a map from");

  std::vector<ingest::RawFormula> raw;
  raw.reserve(n);
  for (const auto& f : input.formulas) raw.push_back(f.formula);

  // Vertex attributes.
  std::vector<FormulaVertex> vertices(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = input.formulas[i];
    auto& v = vertices[i];
    v.id = f.formula.id;
    v.latex = f.formula.latex;
    v.pages = f.formula.home_pages;
    v.context = f.formula.context;
    v.birth_year = f.birth_year;
    v.terms = formula::ExtractTerms(formula::ParseFormula(f.formula.latex));
    v.complexity = formula::Complexity(v.terms);
  }
  const auto generality = ComputeGenerality(FormulaLinkGraph(input.pages, raw),
                                            {params.damping, 1e-8, 200});
  for (std::size_t i = 0; i < n; ++i) vertices[i].generality = generality[i];

  // Candidate pairs, then one direction each.
  const auto pairs = GenerateRelations(input.pages, raw);
  rep.candidate_pairs = pairs.size();
  std::vector<graph::WeightedEdge> directed;
  directed.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const auto dir = DetermineDirection(
        {vertices[a].id, vertices[a].birth_year, vertices[a].complexity, vertices[a].generality},
        {vertices[b].id, vertices[b].birth_year, vertices[b].complexity, vertices[b].generality});
    switch (dir.rule) {
      case DirectionRule::kBirthTime: ++rep.directed_by_time; break;
      case DirectionRule::kComplexity: ++rep.directed_by_complexity; break;
      case DirectionRule::kGenerality: ++rep.directed_by_generality; break;
      case DirectionRule::kIdTieBreak: ++rep.directed_by_id; break;
    }
    directed.push_back(dir.a_to_b ? graph::WeightedEdge{a, b, 1.0} : graph::WeightedEdge{b, a, 1.0});
  }
  const graph::Digraph topology(n, std::move(directed));

  // Fused transition weights per directed edge.
  text::Collection contexts(params.mu);
  for (const auto& v : vertices) contexts.AddDocument(v.context);
  std::vector<std::vector<graph::WeightedEdge>> fused_rows(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t s = 0; s < n; ++s) {
    const auto src = static_cast<VertexId>(s);
    const auto succ = topology.OutNeighbors(src);
    if (succ.empty()) continue;
    const auto pt = ContextTransition(contexts, src, succ);
    for (std::size_t i = 0; i < succ.size(); ++i) {
      const TransitionTriple triple{pt[i], formula::LayoutTransition(vertices[succ[i]].terms, vertices[src].terms),
                                    GeneralityTransition(vertices[src].generality)};
      fused_rows[s].push_back({src, succ[i], FuseTransition(triple, params.theta)});
    }
  }
  std::vector<graph::WeightedEdge> fused;
  for (auto& row : fused_rows) fused.insert(fused.end(), row.begin(), row.end());
  const graph::Digraph transitions = RowNormalize(graph::Digraph(n, std::move(fused)));

  // Walks and embeddings.
  const auto walks = kernels::GuidedWalksParallel(
      transitions, {params.walks_per_vertex, params.walk_length, params.seed});
  rep.walks = walks.size();
  const SkipGramOptions sg{params.dim, params.window, params.negatives, params.epochs,
                           params.learning_rate, params.seed};
  const SkipGramModel model = TrainSkipGram(walks, n, sg);
  rep.epoch_objective = model.epoch_objective;
  for (std::size_t i = 0; i < n; ++i) {
    if (!model.present[i]) continue;
    const auto row = model.input.Row(i);
    vertices[i].embedding.assign(row.begin(), row.end());
  }

  // Evolution probabilities on every directed edge, then pruning.
  std::vector<EvolutionEdge> edges;
  edges.reserve(topology.edge_count());
  for (VertexId s = 0; s < n; ++s) {
    for (VertexId t : topology.OutNeighbors(s)) {
      edges.push_back({s, t, EvolutionProbability(vertices[s], vertices[t])});
    }
  }
  rep.edges_before_prune = edges.size();
  FemGraph full(std::move(vertices), std::move(edges), params);
  return Prune(full, params.prune_threshold);
}

}  // namespace fem::map
