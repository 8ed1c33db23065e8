#pragma once

#include <filesystem>

#include "fem/map/evolution_map.h"

namespace fem::map {

// Layout: vertices.jsonl, edges.jsonl, manifest.json.
//   vertex: {"id","latex","pages","context","lt","lg","lc","emb":[...]}
//   edge:   {"src","dst","p"} with formula ids.
void WriteMap(const std::filesystem::path& dir, const FemGraph& graph);

// Throws ArtifactError on missing files or inconsistent records.
FemGraph ReadMap(const std::filesystem::path& dir);

}  // namespace fem::map
