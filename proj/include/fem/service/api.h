#pragma once

#include "fem/common/jsonl.h"
#include "fem/map/evolution_map.h"
#include "fem/projection/projection.h"
#include "fem/recsys/metrics.h"
#include "fem/recsys/recommend.h"

// JSON shapes shared by the HTTP service and the command-line tools.
namespace fem::service {

using jsonl::Json;

// {latex, context?, question?, abstract?, keywords?, topics?}; throws
// SchemaError when latex is missing or a field has the wrong type.
projection::QueryFormula QueryFromJson(const Json& body);
Json QueryToJson(const projection::QueryFormula& query);

// {anchor, candidates:[{id, distance, features[12], score}]}
Json ProjectionToJson(const map::FemGraph& graph, const projection::ProjectionResult& result);

// {vertices:[{id, latex, distance, lg, lc}], edges:[{src, dst, p}]}
Json SubgraphToJson(const map::FemGraph& graph, const map::Subgraph& subgraph);

Json MetricsToJson(const recsys::RankingMetrics& m);

// [{oer_id, score, hosting_formula, distance, type, title}]
Json ResultsToJson(const recsys::OrfExtractor& orf, const std::vector<recsys::RecommendedResource>& results);

}  // namespace fem::service
