#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fem/map/evolution_map.h"
#include "fem/recsys/catalog.h"
#include "fem/recsys/het_graph.h"
#include "fem/recsys/metapath.h"
#include "fem/text/language_model.h"

namespace fem::recsys {

// Active resource-ranking feature set. Order: metapath templates, then the
// four text features, then the four type indicators.
struct OrfConfig {
  std::vector<MetaPath> templates;
  bool text_features = true;
  bool type_indicators = true;

  // FR, FK-KR, FF-FR, FK-KKco-KR, FF-FK-KR, FF-FF-FR with text and type
  // features: 14 in total.
  static OrfConfig Default();
  // Inverse of Names(); throws SchemaError on an unknown name or an order
  // that Names() would not produce.
  static OrfConfig FromNames(const std::vector<std::string>& names);

  std::size_t size() const;
  std::vector<std::string> Names() const;
};

// Query-level text evidence per resource: posteriors of the paper abstract,
// summed per-keyword posteriors, summed per-topic posteriors.
struct QueryTextFeatures {
  std::vector<double> abstract;
  std::vector<double> keywords;
  std::vector<double> topics;
};

// Resource-ranking features for (formula, resource) pairs. Resources are
// indexed in catalog order, i.e. the order of graph.OfType(kResource).
// Read-only after construction; safe for concurrent use.
class OrfExtractor {
 public:
  // Throws SchemaError when a template does not start at a formula or end at
  // a resource, or when the catalog and the graph disagree.
  OrfExtractor(const HetGraph& graph, const std::vector<Oer>& oers, const map::FemGraph& fem,
               OrfConfig config = OrfConfig::Default(), double mu = 2000.0);

  const OrfConfig& config() const { return config_; }
  std::size_t size() const { return config_.size(); }
  std::size_t resource_count() const { return oers_.size(); }
  const Oer& resource(std::size_t r) const { return oers_.at(r); }
  std::size_t ResourceIndex(const std::string& oer_id) const;  // throws UnknownVertexError

  QueryTextFeatures QueryText(std::string_view abstract, const std::vector<std::string>& keywords,
                              const std::vector<std::string>& topics) const;

  // Row-major [resource][feature] block for one map formula.
  std::vector<double> FormulaBlock(graph::VertexId fem_vertex, const QueryTextFeatures& query) const;

  // Feature vector of a single pair. Query features default to zero.
  std::vector<double> Features(const std::string& formula_id, const std::string& oer_id,
                               const QueryTextFeatures& query = {}) const;

 private:
  std::vector<double> Posterior(std::string_view text) const;
  std::vector<double> PhraseSum(const std::vector<std::string>& phrases) const;

  const HetGraph& graph_;
  const map::FemGraph& fem_;
  OrfConfig config_;
  std::vector<Oer> oers_;
  std::vector<VertexId> resource_vertex_;  // catalog index -> het vertex
  std::vector<std::size_t> resource_of_vertex_;
  std::unordered_map<std::string, std::size_t> resource_index_;
  text::Collection texts_;
};

}  // namespace fem::recsys
