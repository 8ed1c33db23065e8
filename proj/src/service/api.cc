#include "fem/service/api.h"

#include "fem/common/errors.h"

namespace fem::service {
namespace {

std::string StringField(const Json& body, const char* name) {
  if (!body.contains(name) || body[name].is_null()) return {};
  if (!body[name].is_string()) throw SchemaError(std::string("field '") + name + "' must be a string");
  return body[name].get<std::string>();
}

std::vector<std::string> ListField(const Json& body, const char* name) {
  std::vector<std::string> out;
  if (!body.contains(name) || body[name].is_null()) return out;
  if (!body[name].is_array()) throw SchemaError(std::string("field '") + name + "' must be a list of strings");
  for (const auto& v : body[name]) {
    if (!v.is_string()) throw SchemaError(std::string("field '") + name + "' must be a list of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

projection::QueryFormula QueryFromJson(const Json& body) {
  if (!body.is_object()) throw SchemaError("query must be a JSON object");
  projection::QueryFormula q;
  q.latex = StringField(body, "latex");
  if (q.latex.empty()) throw SchemaError("query needs a non-empty 'latex'");
  q.context = StringField(body, "context");
  if (body.contains("question") && !body["question"].is_null()) q.question = StringField(body, "question");
  q.paper_abstract = StringField(body, "abstract");
  q.paper_keywords = ListField(body, "keywords");
  q.weekly_topics = ListField(body, "topics");
  return q;
}

Json QueryToJson(const projection::QueryFormula& q) {
  Json j = {{"latex", q.latex},          {"context", q.context},      {"abstract", q.paper_abstract},
            {"keywords", q.paper_keywords}, {"topics", q.weekly_topics}};
  if (q.question) j["question"] = *q.question;
  return j;
}

Json ProjectionToJson(const map::FemGraph& graph, const projection::ProjectionResult& result) {
  Json candidates = Json::array();
  for (const auto& c : result.candidates) {
    candidates.push_back({{"id", graph.vertex(c.candidate).id},
                          {"distance", c.distance},
                          {"features", c.features},
                          {"score", c.score}});
  }
  return {{"anchor", graph.vertex(result.anchor).id}, {"candidates", std::move(candidates)}};
}

Json SubgraphToJson(const map::FemGraph& graph, const map::Subgraph& subgraph) {
  Json vertices = Json::array();
  for (const auto& v : subgraph.vertices) {
    const auto& fv = graph.vertex(v.vertex);
    vertices.push_back(
        {{"id", fv.id}, {"latex", fv.latex}, {"distance", v.distance}, {"lg", fv.generality}, {"lc", fv.complexity}});
  }
  Json edges = Json::array();
  for (const auto& e : subgraph.edges) {
    edges.push_back({{"src", graph.vertex(e.src).id}, {"dst", graph.vertex(e.dst).id}, {"p", e.probability}});
  }
  return {{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

Json MetricsToJson(const recsys::RankingMetrics& m) {
  return {{"ndcg@3", m.ndcg3}, {"ndcg@5", m.ndcg5}, {"ndcg@all", m.ndcg_all}, {"p@3", m.p3},
          {"p@5", m.p5},       {"map", m.map},      {"mrr", m.mrr}};
}

Json ResultsToJson(const recsys::OrfExtractor& orf, const std::vector<recsys::RecommendedResource>& results) {
  Json out = Json::array();
  for (const auto& r : results) {
    const auto& oer = orf.resource(r.resource);
    out.push_back({{"oer_id", r.oer_id},
                   {"score", r.score},
                   {"hosting_formula", r.hosting_formula},
                   {"distance", r.distance},
                   {"type", recsys::OerTypeName(oer.type)},
                   {"title", oer.title}});
  }
  return out;
}

}  // namespace fem::service
