#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fem/recsys/het_graph.h"

namespace fem::recsys {

using MetaPath = std::vector<EdgeType>;

inline constexpr std::size_t kMaxMetaPathLength = 4;

// "FK-KR" -> {kFormulaKeyword, kKeywordResource}. Throws SchemaError on
// unknown codes or consecutive types that do not chain.
MetaPath ParseMetaPath(std::string_view spec);
std::string MetaPathName(const MetaPath& path);

// Sum over all tours from `start` following `path` of the product of edge
// weights, for every end vertex at once. Throws UnknownVertexError when
// `start` is out of range and SchemaError when the path is empty, longer than
// four, or does not start at the vertex's type.
std::vector<double> MetapathReach(const HetGraph& graph, VertexId start, const MetaPath& path);

double MetapathScore(const HetGraph& graph, VertexId start, VertexId end, const MetaPath& path);

}  // namespace fem::recsys
