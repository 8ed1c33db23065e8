#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fem/ingest/birth_times.h"
#include "fem/ingest/corpus.h"

namespace fem::ingest {

// Formula as handed from ingestion to the map builder.
struct IngestedFormula {
  RawFormula formula;
  std::optional<int> birth_year;
};

struct IngestOutput {
  std::vector<WikiPage> pages;
  std::vector<IngestedFormula> formulas;  // filtered, sorted by id
};

struct IngestSummary {
  std::size_t pages = 0;
  std::size_t math_spans = 0;
  std::size_t skipped_spans = 0;
  std::size_t duplicate_spans = 0;
  std::size_t formulas_parsed = 0;
  std::size_t formulas_kept = 0;
  std::size_t formulas_dated = 0;
};

// Parse, filter and date in one pass. Without a paper corpus every birth
// year is absent.
IngestOutput RunIngest(const Corpus& corpus, const std::vector<DatedPaper>* papers,
                       const FilterRule& rule, IngestSummary* summary = nullptr);

// Layout: pages.jsonl, formulas.jsonl, ingest.json (summary).
void WriteIngestOutput(const std::filesystem::path& dir, const IngestOutput& output,
                       const IngestSummary& summary);
IngestOutput ReadIngestOutput(const std::filesystem::path& dir);

}  // namespace fem::ingest
