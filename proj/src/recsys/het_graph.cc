#include "fem/recsys/het_graph.h"

#include <algorithm>
#include <map>
#include <set>

#include "fem/common/errors.h"
#include "fem/common/jsonl.h"
#include "fem/kernels/pagerank.h"
#include "fem/kernels/text_kernels.h"
#include "fem/text/phrase_matcher.h"
#include "fem/text/tokenize.h"

namespace fem::recsys {
namespace {

struct EdgeSpec {
  EdgeType type;
  std::string_view code;
  VertexType src;
  VertexType dst;
};

constexpr std::array<EdgeSpec, kEdgeTypeCount> kEdgeSpecs = {{
    {EdgeType::kPaperKeyword, "PK", VertexType::kPaper, VertexType::kKeyword},
    {EdgeType::kPaperTopic, "PW", VertexType::kPaper, VertexType::kWeeklyTopic},
    {EdgeType::kPaperResource, "PR", VertexType::kPaper, VertexType::kResource},
    {EdgeType::kKeywordCites, "KKcite", VertexType::kKeyword, VertexType::kKeyword},
    {EdgeType::kKeywordCooccurs, "KKco", VertexType::kKeyword, VertexType::kKeyword},
    {EdgeType::kKeywordPaper, "KP", VertexType::kKeyword, VertexType::kPaper},
    {EdgeType::kKeywordResource, "KR", VertexType::kKeyword, VertexType::kResource},
    {EdgeType::kTopicCooccurs, "WWco", VertexType::kWeeklyTopic, VertexType::kWeeklyTopic},
    {EdgeType::kTopicResource, "WR", VertexType::kWeeklyTopic, VertexType::kResource},
    {EdgeType::kResourceRelated, "RR", VertexType::kResource, VertexType::kResource},
    {EdgeType::kFormulaResource, "FR", VertexType::kFormula, VertexType::kResource},
    {EdgeType::kFormulaKeyword, "FK", VertexType::kFormula, VertexType::kKeyword},
    {EdgeType::kFormulaEvolves, "FF", VertexType::kFormula, VertexType::kFormula},
}};

const EdgeSpec& Spec(EdgeType type) { return kEdgeSpecs[static_cast<std::size_t>(type)]; }

std::string IndexKey(VertexType type, const std::string& key) {
  return std::string(1, VertexTypeCode(type)) + ":" + key;
}

VertexType ParseVertexType(char c) {
  switch (c) {
    case 'R': return VertexType::kResource;
    case 'P': return VertexType::kPaper;
    case 'K': return VertexType::kKeyword;
    case 'W': return VertexType::kWeeklyTopic;
    case 'F': return VertexType::kFormula;
    default: throw SchemaError(std::string("unknown vertex type '") + c + "'");
  }
}

// Accumulates raw weights keyed by (type, src, dst).
class EdgeAccumulator {
 public:
  void Add(EdgeType type, VertexId src, VertexId dst, double w) {
    if (w > 0.0) weights_[{static_cast<int>(type), src, dst}] += w;
  }
  std::vector<HetEdge> Take() const {
    std::vector<HetEdge> out;
    out.reserve(weights_.size());
    for (const auto& [key, w] : weights_) {
      out.push_back({static_cast<EdgeType>(std::get<0>(key)), std::get<1>(key), std::get<2>(key), w});
    }
    return out;
  }

 private:
  std::map<std::tuple<int, VertexId, VertexId>, double> weights_;
};

}  // namespace

std::string_view EdgeTypeCode(EdgeType type) { return Spec(type).code; }

EdgeType ParseEdgeType(std::string_view code) {
  for (const auto& s : kEdgeSpecs) {
    if (s.code == code) return s.type;
  }
  throw SchemaError("unknown edge type \"" + std::string(code) + "\"");
}

char VertexTypeCode(VertexType type) {
  switch (type) {
    case VertexType::kResource: return 'R';
    case VertexType::kPaper: return 'P';
    case VertexType::kKeyword: return 'K';
    case VertexType::kWeeklyTopic: return 'W';
    case VertexType::kFormula: return 'F';
  }
  return '?';
}

VertexType SourceType(EdgeType type) { return Spec(type).src; }
VertexType TargetType(EdgeType type) { return Spec(type).dst; }

HetGraph::HetGraph(std::vector<HetVertex> vertices, std::vector<HetEdge> edges)
    : vertices_(std::move(vertices)) {
  for (VertexId v = 0; v < vertices_.size(); ++v) {
    if (!index_.emplace(IndexKey(vertices_[v].type, vertices_[v].key), v).second) {
      throw SchemaError("duplicate vertex " + IndexKey(vertices_[v].type, vertices_[v].key));
    }
    by_type_[static_cast<std::size_t>(vertices_[v].type)].push_back(v);
  }
  std::array<std::vector<graph::WeightedEdge>, kEdgeTypeCount> typed;
  for (const auto& e : edges) {
    if (e.src >= vertices_.size() || e.dst >= vertices_.size()) throw SchemaError("edge endpoint out of range");
    if (vertices_[e.src].type != SourceType(e.type) || vertices_[e.dst].type != TargetType(e.type)) {
      throw SchemaError("edge " + std::string(EdgeTypeCode(e.type)) + " joins vertices of the wrong type");
    }
    if (!(e.weight > 0.0)) continue;
    typed[static_cast<std::size_t>(e.type)].push_back({e.src, e.dst, e.weight});
  }
  for (std::size_t t = 0; t < kEdgeTypeCount; ++t) {
    const graph::Digraph raw(vertices_.size(), std::move(typed[t]));
    std::vector<graph::WeightedEdge> normalized;
    normalized.reserve(raw.edge_count());
    for (VertexId v = 0; v < raw.vertex_count(); ++v) {
      double total = 0.0;
      for (double w : raw.OutWeights(v)) total += w;
      const auto nbrs = raw.OutNeighbors(v);
      const auto ws = raw.OutWeights(v);
      for (std::size_t i = 0; i < nbrs.size(); ++i) normalized.push_back({v, nbrs[i], ws[i] / total});
    }
    adjacency_[t] = graph::Digraph(vertices_.size(), std::move(normalized));
  }
}

std::optional<VertexId> HetGraph::Find(VertexType type, const std::string& key) const {
  auto it = index_.find(IndexKey(type, key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexId HetGraph::Require(VertexType type, const std::string& key) const {
  auto v = Find(type, key);
  if (!v) throw UnknownVertexError("unknown vertex " + IndexKey(type, key));
  return *v;
}

std::vector<HetEdge> HetGraph::Edges() const {
  std::vector<HetEdge> out;
  for (std::size_t t = 0; t < kEdgeTypeCount; ++t) {
    for (const auto& e : adjacency_[t].Edges()) out.push_back({static_cast<EdgeType>(t), e.src, e.dst, e.weight});
  }
  return out;
}

std::vector<std::pair<std::size_t, double>> LanguageModelLinks(const text::Collection& resources,
                                                               std::string_view source_text,
                                                               std::size_t top_k) {
  std::vector<std::pair<std::size_t, double>> out;
  const auto query = resources.MakeQuery(source_text);
  if (query.empty() || resources.size() == 0) return out;
  const auto posterior = text::Posterior(kernels::LogLikelihoodsSerial(resources, query));
  for (std::size_t r = 0; r < posterior.size(); ++r) {
    if (posterior[r] > 0.0) out.emplace_back(r, posterior[r]);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (top_k > 0 && out.size() > top_k) out.resize(top_k);
  double total = 0.0;
  for (const auto& [r, w] : out) total += w;
  for (auto& [r, w] : out) w /= total;
  std::sort(out.begin(), out.end());
  return out;
}

HetGraph BuildHetGraph(const std::vector<Paper>& papers, const std::vector<Oer>& oers,
                       const map::FemGraph& fem, const HetGraphOptions& options) {
  if (oers.empty()) throw EmptyCatalogError("resource catalog is empty");
  std::vector<HetVertex> vertices;
  for (const auto& o : oers) vertices.push_back({VertexType::kResource, o.id, o.title});
  const VertexId first_paper = static_cast<VertexId>(vertices.size());
  std::map<std::string, VertexId> paper_index;
  for (const auto& p : papers) {
    if (!paper_index.emplace(p.id, static_cast<VertexId>(vertices.size())).second) {
      throw SchemaError("duplicate paper id " + p.id);
    }
    vertices.push_back({VertexType::kPaper, p.id, p.title});
  }
  std::map<std::string, std::string> keyword_labels, topic_labels;
  for (const auto& p : papers) {
    for (const auto& k : p.keywords) {
      if (auto key = text::NormalizePhrase(k); !key.empty()) keyword_labels.emplace(key, k);
    }
    for (const auto& w : p.weekly_topics) {
      if (auto key = text::NormalizePhrase(w); !key.empty()) topic_labels.emplace(key, w);
    }
  }
  std::map<std::string, VertexId> keyword_index, topic_index;
  for (const auto& [key, label] : keyword_labels) {
    keyword_index[key] = static_cast<VertexId>(vertices.size());
    vertices.push_back({VertexType::kKeyword, key, label});
  }
  for (const auto& [key, label] : topic_labels) {
    topic_index[key] = static_cast<VertexId>(vertices.size());
    vertices.push_back({VertexType::kWeeklyTopic, key, label});
  }
  const VertexId first_formula = static_cast<VertexId>(vertices.size());
  for (const auto& f : fem.vertices()) vertices.push_back({VertexType::kFormula, f.id, f.latex});

  std::map<std::string, VertexId> resource_index;
  for (VertexId r = 0; r < oers.size(); ++r) {
    if (!resource_index.emplace(oers[r].id, r).second) throw SchemaError("duplicate resource id " + oers[r].id);
  }

  // Keyword phrase matcher; phrase index -> keyword vertex.
  text::PhraseMatcher keyword_matcher;
  std::vector<VertexId> keyword_of_phrase;
  for (const auto& [key, v] : keyword_index) {
    const std::size_t phrase = keyword_matcher.Add(key);
    if (phrase >= keyword_of_phrase.size()) keyword_of_phrase.resize(phrase + 1);
    keyword_of_phrase[phrase] = v;
  }

  text::Collection resource_lm(options.mu);
  for (const auto& o : oers) resource_lm.AddDocument(o.Text());

  EdgeAccumulator acc;
  auto lm_edges = [&](EdgeType type, VertexId src, const std::string& source_text) {
    for (const auto& [r, w] : LanguageModelLinks(resource_lm, source_text, options.lm_top_k)) {
      acc.Add(type, src, static_cast<VertexId>(r), w);
    }
  };

  // Paper edges and keyword overlap (listed keyword + phrase occurrences).
  std::vector<std::map<VertexId, double>> overlap(papers.size());
  for (std::size_t i = 0; i < papers.size(); ++i) {
    const auto& p = papers[i];
    const VertexId pv = first_paper + static_cast<VertexId>(i);
    for (const auto& k : p.keywords) {
      if (auto it = keyword_index.find(text::NormalizePhrase(k)); it != keyword_index.end()) {
        overlap[i][it->second] += 1.0;
      }
    }
    for (const auto& m : keyword_matcher.FindAll(p.title + "\n" + p.abstract)) {
      overlap[i][keyword_of_phrase[m.phrase]] += 1.0;
    }
    for (const auto& [k, w] : overlap[i]) acc.Add(EdgeType::kPaperKeyword, pv, k, w);

    std::set<VertexId> topics;
    for (const auto& w : p.weekly_topics) {
      if (auto it = topic_index.find(text::NormalizePhrase(w)); it != topic_index.end()) topics.insert(it->second);
    }
    for (VertexId t : topics) acc.Add(EdgeType::kPaperTopic, pv, t, 1.0);
    for (VertexId a : topics) {
      for (VertexId b : topics) {
        if (a != b) acc.Add(EdgeType::kTopicCooccurs, a, b, 1.0);
      }
    }

    std::set<VertexId> listed;
    for (const auto& k : p.keywords) {
      if (auto it = keyword_index.find(text::NormalizePhrase(k)); it != keyword_index.end()) listed.insert(it->second);
    }
    for (VertexId a : listed) {
      for (VertexId b : listed) {
        if (a != b) acc.Add(EdgeType::kKeywordCooccurs, a, b, 1.0);
      }
    }
    lm_edges(EdgeType::kPaperResource, pv, p.title + "\n" + p.abstract);
  }

  // Citations: paper graph and keyword citation counts.
  std::vector<graph::WeightedEdge> citations;
  for (std::size_t i = 0; i < papers.size(); ++i) {
    for (const auto& cited : papers[i].cites) {
      auto it = paper_index.find(cited);
      if (it == paper_index.end()) {
        throw SchemaError("paper " + papers[i].id + " cites unknown paper " + cited);
      }
      const std::size_t j = it->second - first_paper;
      if (j == i) continue;
      citations.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), 1.0});
      for (const auto& ka : papers[i].keywords) {
        for (const auto& kb : papers[j].keywords) {
          auto a = keyword_index.find(text::NormalizePhrase(ka));
          auto b = keyword_index.find(text::NormalizePhrase(kb));
          if (a != keyword_index.end() && b != keyword_index.end() && a->second != b->second) {
            acc.Add(EdgeType::kKeywordCites, a->second, b->second, 1.0);
          }
        }
      }
    }
  }

  // Keyword -> paper: citation PageRank personalized on the keyword's overlap.
  if (!papers.empty()) {
    const graph::Digraph citation_graph(papers.size(), std::move(citations));
    for (const auto& [key, kv] : keyword_index) {
      std::vector<double> prior(papers.size(), 0.0);
      for (std::size_t i = 0; i < papers.size(); ++i) {
        if (auto it = overlap[i].find(kv); it != overlap[i].end()) prior[i] = it->second;
      }
      const auto rank = kernels::PageRankSerial(citation_graph, {options.damping, 1e-10, 200}, prior).scores;
      for (std::size_t i = 0; i < papers.size(); ++i) {
        if (prior[i] > 0.0) acc.Add(EdgeType::kKeywordPaper, kv, first_paper + static_cast<VertexId>(i), rank[i]);
      }
      lm_edges(EdgeType::kKeywordResource, kv, keyword_labels[key]);
    }
  }
  for (const auto& [key, tv] : topic_index) lm_edges(EdgeType::kTopicResource, tv, topic_labels[key]);

  for (VertexId r = 0; r < oers.size(); ++r) {
    for (const auto& rel : oers[r].related) {
      auto it = resource_index.find(rel);
      if (it == resource_index.end()) throw SchemaError("resource " + oers[r].id + " relates to unknown " + rel);
      if (it->second != r) acc.Add(EdgeType::kResourceRelated, r, it->second, 1.0);
    }
  }

  for (VertexId f = 0; f < fem.size(); ++f) {
    const VertexId fv = first_formula + f;
    const auto& context = fem.vertex(f).context;
    lm_edges(EdgeType::kFormulaResource, fv, context);
    for (const auto& m : keyword_matcher.FindAll(context)) {
      acc.Add(EdgeType::kFormulaKeyword, fv, keyword_of_phrase[m.phrase], 1.0);
    }
  }
  for (const auto& e : fem.edges()) {
    acc.Add(EdgeType::kFormulaEvolves, first_formula + e.src, first_formula + e.dst, e.probability);
  }
  return HetGraph(std::move(vertices), acc.Take());
}

std::vector<std::string> KeywordVocabulary(const HetGraph& graph) {
  std::vector<std::string> out;
  for (VertexId v : graph.OfType(VertexType::kKeyword)) out.push_back(graph.vertex(v).key);
  for (VertexId v : graph.OfType(VertexType::kWeeklyTopic)) out.push_back(graph.vertex(v).key);
  return out;
}

void WriteHetGraph(const std::filesystem::path& dir, const HetGraph& graph) {
  std::filesystem::create_directories(dir);
  std::vector<jsonl::Json> vertices;
  for (const auto& v : graph.vertices()) {
    vertices.push_back({{"type", std::string(1, VertexTypeCode(v.type))}, {"key", v.key}, {"label", v.label}});
  }
  jsonl::WriteAll(dir / "het_vertices.jsonl", vertices);
  std::vector<jsonl::Json> edges;
  for (const auto& e : graph.Edges()) {
    edges.push_back({{"type", EdgeTypeCode(e.type)}, {"src", e.src}, {"dst", e.dst}, {"w", e.weight}});
  }
  jsonl::WriteAll(dir / "het_edges.jsonl", edges);
}

HetGraph ReadHetGraph(const std::filesystem::path& dir) {
  std::vector<HetVertex> vertices;
  std::vector<HetEdge> edges;
  try {
    jsonl::ForEachRecord(dir / "het_vertices.jsonl", [&](const jsonl::Json& r, std::size_t line) {
      const std::string type = jsonl::OptionalString(r, "type");
      if (type.size() != 1) throw CorpusFormatError("bad vertex type", line);
      vertices.push_back({ParseVertexType(type[0]), jsonl::RequireId(r, "key", line), jsonl::OptionalString(r, "label")});
    });
    jsonl::ForEachRecord(dir / "het_edges.jsonl", [&](const jsonl::Json& r, std::size_t line) {
      edges.push_back({ParseEdgeType(jsonl::OptionalString(r, "type")), r.at("src").get<VertexId>(),
                       r.at("dst").get<VertexId>(), r.value("w", 0.0)});
      (void)line;
    });
    return HetGraph(std::move(vertices), std::move(edges));
  } catch (const ArtifactError&) {
    throw;
  } catch (const std::exception& e) {
    throw ArtifactError(std::string("corrupt heterogeneous graph: ") + e.what());
  }
}

}  // namespace fem::recsys
