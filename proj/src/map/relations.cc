#include "fem/map/relations.h"

#include <algorithm>
#include <map>
#include <set>

#include "fem/common/errors.h"

namespace fem::map {
namespace {

struct PageIndex {
  std::map<std::string, std::vector<VertexId>> formulas_on;  // page id -> formulae
};

PageIndex IndexPages(const std::vector<ingest::RawFormula>& formulas) {
  PageIndex index;
  for (VertexId i = 0; i < formulas.size(); ++i) {
    for (const auto& page : formulas[i].home_pages) index.formulas_on[page].push_back(i);
  }
  return index;
}

}  // namespace

std::vector<CandidatePair> GenerateRelations(const std::vector<ingest::WikiPage>& pages,
                                             const std::vector<ingest::RawFormula>& formulas) {
  const PageIndex index = IndexPages(formulas);
  std::set<CandidatePair> pairs;
  auto add = [&](VertexId a, VertexId b) {
    if (a == b) return;
    pairs.insert({std::min(a, b), std::max(a, b)});
  };
  for (const auto& [page, members] : index.formulas_on) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) add(members[i], members[j]);
    }
  }
  for (const auto& page : pages) {
    auto from = index.formulas_on.find(page.id);
    if (from == index.formulas_on.end()) continue;
    for (const auto& link : page.outlinks) {
      auto to = index.formulas_on.find(link);
      if (to == index.formulas_on.end()) continue;
      for (VertexId a : from->second) {
        for (VertexId b : to->second) add(a, b);
      }
    }
  }
  return {pairs.begin(), pairs.end()};
}

graph::Digraph FormulaLinkGraph(const std::vector<ingest::WikiPage>& pages,
                                const std::vector<ingest::RawFormula>& formulas) {
  const PageIndex index = IndexPages(formulas);
  std::set<std::pair<VertexId, VertexId>> arcs;
  for (const auto& [page, members] : index.formulas_on) {
    for (VertexId a : members) {
      for (VertexId b : members) {
        if (a != b) arcs.insert({a, b});
      }
    }
  }
  for (const auto& page : pages) {
    auto from = index.formulas_on.find(page.id);
    if (from == index.formulas_on.end()) continue;
    for (const auto& link : page.outlinks) {
      auto to = index.formulas_on.find(link);
      if (to == index.formulas_on.end()) continue;
      for (VertexId a : from->second) {
        for (VertexId b : to->second) {
          if (a != b) arcs.insert({a, b});
        }
      }
    }
  }
  std::vector<graph::WeightedEdge> edges;
  edges.reserve(arcs.size());
  for (const auto& [a, b] : arcs) edges.push_back({a, b, 1.0});
  return graph::Digraph(formulas.size(), std::move(edges));
}

std::vector<double> ComputeGenerality(const graph::Digraph& link_graph,
                                      const kernels::PageRankOptions& options) {
  if (link_graph.vertex_count() == 0) throw EmptyGraphError("formula graph has no vertices");
  return kernels::PageRankParallel(link_graph, options).scores;
}

}  // namespace fem::map
