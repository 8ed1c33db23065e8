#include "fem/map/map_io.h"

#include <fstream>

#include "fem/common/errors.h"
#include "fem/common/jsonl.h"
#include "fem/formula/mathml_parser.h"

namespace fem::map {

using jsonl::Json;

namespace {

Json ParamsToJson(const MapParams& p) {
  return {{"theta_t", p.theta.context},  {"theta_l", p.theta.layout},
          {"theta_g", p.theta.generality}, {"walk_length", p.walk_length},
          {"walks_per_vertex", p.walks_per_vertex}, {"dim", p.dim},
          {"window", p.window},          {"negatives", p.negatives},
          {"epochs", p.epochs},          {"learning_rate", p.learning_rate},
          {"mu", p.mu},                  {"damping", p.damping},
          {"prune_threshold", p.prune_threshold}, {"seed", p.seed}};
}

MapParams ParamsFromJson(const Json& j) {
  MapParams p;
  p.theta.context = j.value("theta_t", p.theta.context);
  p.theta.layout = j.value("theta_l", p.theta.layout);
  p.theta.generality = j.value("theta_g", p.theta.generality);
  p.walk_length = j.value("walk_length", p.walk_length);
  p.walks_per_vertex = j.value("walks_per_vertex", p.walks_per_vertex);
  p.dim = j.value("dim", p.dim);
  p.window = j.value("window", p.window);
  p.negatives = j.value("negatives", p.negatives);
  p.epochs = j.value("epochs", p.epochs);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.mu = j.value("mu", p.mu);
  p.damping = j.value("damping", p.damping);
  p.prune_threshold = j.value("prune_threshold", p.prune_threshold);
  p.seed = j.value("seed", p.seed);
  return p;
}

}  // namespace

void WriteMap(const std::filesystem::path& dir, const FemGraph& graph) {
  std::filesystem::create_directories(dir);
  std::vector<Json> vertices;
  vertices.reserve(graph.size());
  for (const auto& v : graph.vertices()) {
    Json r = {{"id", v.id}, {"latex", v.latex}, {"pages", v.pages}, {"context", v.context}};
    r["lt"] = v.birth_year ? Json(*v.birth_year) : Json(nullptr);
    r["lg"] = v.generality;
    r["lc"] = v.complexity;
    r["emb"] = v.embedding;
    vertices.push_back(std::move(r));
  }
  jsonl::WriteAll(dir / "vertices.jsonl", vertices);

  std::vector<Json> edges;
  edges.reserve(graph.edges().size());
  for (const auto& e : graph.edges()) {
    edges.push_back({{"src", graph.vertex(e.src).id}, {"dst", graph.vertex(e.dst).id}, {"p", e.probability}});
  }
  jsonl::WriteAll(dir / "edges.jsonl", edges);

  const Json manifest = {{"format", "fem-map/1"},
                         {"vertices", graph.size()},
                         {"edges", graph.edges().size()},
                         {"params", ParamsToJson(graph.params())}};
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  out << manifest.dump(2) << '\n';
  if (!out) throw ArtifactError("cannot write " + (dir / "manifest.json").string());
}

FemGraph ReadMap(const std::filesystem::path& dir) {
  std::ifstream manifest_in(dir / "manifest.json");
  if (!manifest_in) throw ArtifactError("missing map manifest in " + dir.string());
  Json manifest;
  try {
    manifest = Json::parse(manifest_in);
  } catch (const Json::parse_error& e) {
    throw ArtifactError(std::string("corrupt map manifest: ") + e.what());
  }
  const MapParams params = ParamsFromJson(manifest.value("params", Json::object()));

  std::vector<FormulaVertex> vertices;
  try {
    jsonl::ForEachRecord(dir / "vertices.jsonl", [&](const Json& r, std::size_t line) {
      FormulaVertex v;
      v.id = jsonl::RequireId(r, "id", line);
      v.latex = jsonl::OptionalString(r, "latex");
      v.pages = jsonl::StringList(r, "pages", line);
      v.context = jsonl::OptionalString(r, "context");
      if (auto lt = r.find("lt"); lt != r.end() && lt->is_number_integer()) v.birth_year = lt->get<int>();
      v.generality = r.value("lg", 0.0);
      v.complexity = r.value("lc", std::uint64_t{0});
      if (auto emb = r.find("emb"); emb != r.end() && emb->is_array()) {
        v.embedding = emb->get<std::vector<double>>();
      }
      v.terms = formula::ExtractTerms(formula::ParseFormula(v.latex));
      vertices.push_back(std::move(v));
    });
  } catch (const ParseError& e) {
    throw ArtifactError(std::string("map vertex with unparseable formula: ") + e.what());
  } catch (const CorpusFormatError& e) {
    throw ArtifactError(std::string("corrupt map vertices: ") + e.what());
  }

  std::unordered_map<std::string, VertexId> index;
  for (VertexId i = 0; i < vertices.size(); ++i) index.emplace(vertices[i].id, i);
  std::vector<EvolutionEdge> edges;
  try {
    jsonl::ForEachRecord(dir / "edges.jsonl", [&](const Json& r, std::size_t line) {
      const auto src = index.find(jsonl::RequireId(r, "src", line));
      const auto dst = index.find(jsonl::RequireId(r, "dst", line));
      if (src == index.end() || dst == index.end()) {
        throw CorpusFormatError("edge references an unknown formula", line);
      }
      edges.push_back({src->second, dst->second, r.value("p", 0.0)});
    });
  } catch (const CorpusFormatError& e) {
    throw ArtifactError(std::string("corrupt map edges: ") + e.what());
  }
  try {
    return FemGraph(std::move(vertices), std::move(edges), params);
  } catch (const ArtifactError&) {
    throw;
  } catch (const Error& e) {
    throw ArtifactError(std::string("inconsistent map: ") + e.what());
  }
}

}  // namespace fem::map
