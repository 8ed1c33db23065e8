#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fem/kernels/joint_features.h"
#include "fem/map/evolution_map.h"
#include "fem/projection/projection.h"
#include "fem/recsys/catalog.h"
#include "fem/recsys/het_graph.h"
#include "fem/recsys/l2r.h"
#include "fem/recsys/orf.h"

namespace fem::recsys {

struct RecommendedResource {
  std::string oer_id;
  std::size_t resource = 0;     // catalog index
  double score = 0.0;
  std::string hosting_formula;  // formula with the largest share of the score
  int distance = 0;             // hops from the hosting formula to the anchor
  std::vector<double> joint;    // M*K joint features, row-major
};

// Online attachment of the query to the map: projection edges from the query
// to each candidate, weights normalized to sum to 1 (all zero stays zero).
struct QueryAttachment {
  graph::VertexId anchor = 0;
  std::vector<std::pair<graph::VertexId, double>> projection_edges;
  bool has_context = false;
  bool has_question = false;
};

struct Recommendation {
  projection::ProjectionResult projection;
  QueryAttachment attachment;
  std::vector<RecommendedResource> results;  // best first
};

// Bilinear fusion for given inputs. fpf: formulas x M; orf: formulas x
// resources x K; weights: M x K. Returns one score per resource.
std::vector<double> FuseScores(const kernels::JointShape& shape, std::span<const double> fpf,
                               std::span<const double> orf, std::span<const double> weights);

// Read-only recommender over loaded artifacts; safe for concurrent calls.
class Recommender {
 public:
  Recommender(const map::FemGraph& fem, const HetGraph& graph, const std::vector<Oer>& oers,
              OrfConfig config = OrfConfig::Default(), double mu = 2000.0,
              std::vector<std::string> keyword_vocabulary = {});

  const projection::ProjectionIndex& projection() const { return projection_; }
  const OrfExtractor& orf() const { return orf_; }
  const map::FemGraph& fem() const { return fem_; }

  // Sums the fused score over every projected formula within three hops of
  // the anchor. Ties in score go to the smaller resource id; top_n == 0 keeps
  // all. Throws SchemaError when the model shape does not match the active
  // features; propagates projection errors.
  Recommendation Recommend(const projection::QueryFormula& query, const L2RModel& model,
                           std::size_t top_n = 10) const;

 private:
  const map::FemGraph& fem_;
  projection::ProjectionIndex projection_;
  OrfExtractor orf_;
};

}  // namespace fem::recsys
