#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fem/ingest/corpus.h"

namespace fem::ingest {

struct DatedPaper {
  std::string title;
  int year = 0;
  std::string text;
};

// Reads {"title","year","text"} JSON lines. `year` must be a four-digit
// integer or numeric string; anything else raises CorpusFormatError.
std::vector<DatedPaper> LoadPaperCorpus(const std::filesystem::path& path);

// formula id -> earliest year (absent when no home-page title ever matches).
using BirthTimeIndex = std::map<std::string, std::optional<int>>;

// Matches every home-page title against paper text with the greedy
// longest-match scan (case-insensitive, whole words). A formula's birth time
// is the earliest year over all matches of all its home-page titles.
BirthTimeIndex MineBirthTimes(const std::vector<RawFormula>& formulas,
                              const std::vector<WikiPage>& pages,
                              const std::vector<DatedPaper>& papers);

}  // namespace fem::ingest
