#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fem/graph/digraph.h"
#include "fem/map/evolution_map.h"
#include "fem/recsys/catalog.h"
#include "fem/text/language_model.h"

namespace fem::recsys {

using graph::VertexId;

enum class VertexType { kResource, kPaper, kKeyword, kWeeklyTopic, kFormula };
inline constexpr std::size_t kVertexTypeCount = 5;

enum class EdgeType {
  kPaperKeyword,          // P -> K, keyword overlap
  kPaperTopic,            // P -> W, assignment
  kPaperResource,         // P -> R, language model
  kKeywordCites,          // K -> K, citation between papers carrying them
  kKeywordCooccurs,       // K -> K, same paper
  kKeywordPaper,          // K -> P, PageRank with a keyword prior
  kKeywordResource,       // K -> R, language model
  kTopicCooccurs,         // W -> W, same paper
  kTopicResource,         // W -> R, language model
  kResourceRelated,       // R -> R, catalog relation
  kFormulaResource,       // F -> R, language model
  kFormulaKeyword,        // F -> K, phrase match in the context
  kFormulaEvolves,        // F -> F, evolution probability
};
inline constexpr std::size_t kEdgeTypeCount = 13;

// Short code: "PK", "PW", "PR", "KKcite", "KKco", "KP", "KR", "WWco", "WR",
// "RR", "FR", "FK", "FF".
std::string_view EdgeTypeCode(EdgeType type);
EdgeType ParseEdgeType(std::string_view code);  // throws SchemaError
char VertexTypeCode(VertexType type);           // R P K W F
VertexType SourceType(EdgeType type);
VertexType TargetType(EdgeType type);

struct HetVertex {
  VertexType type = VertexType::kResource;
  std::string key;    // id for R/P/F, normalized phrase for K/W
  std::string label;  // display text
};

struct HetEdge {
  EdgeType type = EdgeType::kPaperKeyword;
  VertexId src = 0;
  VertexId dst = 0;
  double weight = 0.0;
};

// Typed graph. For every vertex and edge type, outgoing weights sum to 1
// (or the vertex has none of that type).
class HetGraph {
 public:
  HetGraph() = default;
  // Edges are row-normalized per (source, type); non-positive weights are
  // dropped. Throws SchemaError on type mismatches.
  HetGraph(std::vector<HetVertex> vertices, std::vector<HetEdge> edges);

  std::size_t vertex_count() const { return vertices_.size(); }
  const HetVertex& vertex(VertexId v) const { return vertices_.at(v); }
  const std::vector<HetVertex>& vertices() const { return vertices_; }

  std::optional<VertexId> Find(VertexType type, const std::string& key) const;
  VertexId Require(VertexType type, const std::string& key) const;  // UnknownVertexError
  const std::vector<VertexId>& OfType(VertexType type) const {
    return by_type_[static_cast<std::size_t>(type)];
  }

  const graph::Digraph& Adjacency(EdgeType type) const { return adjacency_[static_cast<std::size_t>(type)]; }
  std::vector<HetEdge> Edges() const;

 private:
  std::vector<HetVertex> vertices_;
  std::unordered_map<std::string, VertexId> index_;  // "<type code>:<key>"
  std::array<std::vector<VertexId>, kVertexTypeCount> by_type_;
  std::array<graph::Digraph, kEdgeTypeCount> adjacency_;
};

struct HetGraphOptions {
  double mu = 2000.0;
  std::size_t lm_top_k = 25;  // resources kept per language-model source
  double damping = 0.85;
};

// Builds every edge family from papers, the resource catalog and the map.
// Keyword vertices are the normalized union of paper keywords; weekly topic
// vertices the union of paper weekly topics. Throws SchemaError on a citation
// or relation pointing at an unknown id, EmptyCatalogError on no resources.
HetGraph BuildHetGraph(const std::vector<Paper>& papers, const std::vector<Oer>& oers,
                       const map::FemGraph& fem, const HetGraphOptions& options = {});

// Posterior over resources of `source_text` (uniform prior), keeping the
// top_k largest (ties by index) and renormalizing. Empty text gives nothing.
std::vector<std::pair<std::size_t, double>> LanguageModelLinks(const text::Collection& resources,
                                                               std::string_view source_text,
                                                               std::size_t top_k);

// Keyword then weekly-topic keys: the phrase list used to find keywords in
// query text.
std::vector<std::string> KeywordVocabulary(const HetGraph& graph);

// Layout: het_vertices.jsonl, het_edges.jsonl.
void WriteHetGraph(const std::filesystem::path& dir, const HetGraph& graph);
HetGraph ReadHetGraph(const std::filesystem::path& dir);

}  // namespace fem::recsys
