#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fem/graph/digraph.h"
#include "fem/ingest/corpus.h"
#include "fem/kernels/pagerank.h"

namespace fem::map {

using graph::VertexId;

// Unordered candidate pair, stored with first < second.
using CandidatePair = std::pair<VertexId, VertexId>;

// Candidate evolution pairs: two formulae are candidates when they share a
// home page or their home pages are hyperlinked in either direction.
// `formulas[i]` is vertex i. Sorted, no duplicates, no self-pairs.
std::vector<CandidatePair> GenerateRelations(const std::vector<ingest::WikiPage>& pages,
                                             const std::vector<ingest::RawFormula>& formulas);

// Directed formula link graph: fa -> fb when a home page of fa links a home
// page of fb, or they share a home page (both directions). No self-loops.
graph::Digraph FormulaLinkGraph(const std::vector<ingest::WikiPage>& pages,
                                const std::vector<ingest::RawFormula>& formulas);

// PageRank over the formula link graph. Throws EmptyGraphError on no vertices.
std::vector<double> ComputeGenerality(const graph::Digraph& link_graph,
                                      const kernels::PageRankOptions& options = {});

}  // namespace fem::map
