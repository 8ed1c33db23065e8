#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fem/map/evolution_map.h"

namespace fem::testing {

std::filesystem::path FixtureDir();

// Fresh empty directory under the system temp dir.
std::filesystem::path MakeTempDir(const std::string& prefix);

// Artifacts of the e2e fixture built in-process with default parameters.
struct BuiltFixture {
  std::filesystem::path root;
  std::filesystem::path ingest;
  std::filesystem::path map;
  std::filesystem::path graph;
  std::filesystem::path features;  // feature store of the fixture requests
  std::filesystem::path oers;
  std::filesystem::path papers;
  std::filesystem::path requests;
  std::filesystem::path judgments;
};

// Built once per process and reused.
const BuiltFixture& Fixture();

// Map vertex from LaTeX with terms and complexity filled in.
map::FormulaVertex MakeVertex(const std::string& id, const std::string& latex, const std::string& context,
                              double generality = 0.0);

}  // namespace fem::testing
