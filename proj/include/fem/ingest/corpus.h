#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace fem::ingest {

struct WikiPage {
  std::string id;
  std::string title;
  std::string body;
  std::vector<std::string> outlinks;  // only ids present in the corpus
};

struct RawFormula {
  std::string id;  // content hash of (home page, canonical serialization)
  std::string latex;
  std::string canonical;  // prefix serialization of the parsed tree
  std::vector<std::string> home_pages;
  std::string context;
  std::size_t variable_count = 0;
  std::size_t operator_count = 0;
};

enum class ContextUnit { kWords, kCharacters };

struct IngestOptions {
  ContextUnit context_unit = ContextUnit::kWords;
  std::size_t context_window = 250;  // total size, split evenly around the span
};

struct Corpus {
  std::vector<WikiPage> pages;        // sorted by id
  std::vector<RawFormula> formulas;   // sorted by id
  std::size_t math_spans = 0;
  std::size_t skipped_spans = 0;      // spans that failed to parse
  std::size_t duplicate_spans = 0;    // same canonical form on the same page
  std::size_t dropped_links = 0;      // outlinks to unknown pages
};

// Reads one page per JSON line: {"id","title","text","links":[ids]} with
// math spans delimited by <math>...</math> inside "text".
// Throws CorpusFormatError (with line) on a malformed record and
// EmptyCorpusError when no page is present.
Corpus LoadCorpus(const std::filesystem::path& path, const IngestOptions& options = {});
Corpus ParseCorpus(std::istream& in, const IngestOptions& options = {});

// Content-derived formula id.
std::string FormulaId(const std::string& page_id, const std::string& canonical);

struct MathSpan {
  std::string latex;        // entity-decoded span content
  std::size_t text_offset;  // position of the span in the math-free text
};

// Splits a page body into math-free text and its math spans. An unclosed
// <math> tag is returned as a span with an empty payload.
struct SplitBody {
  std::string text;
  std::vector<MathSpan> spans;
};
SplitBody SplitMath(const std::string& body);

// Text window around `offset` in `text`, at most `window` units long.
std::string ContextWindow(const std::string& text, std::size_t offset, const IngestOptions& options);

std::string DecodeEntities(std::string_view text);

struct FilterRule {
  std::size_t min_variables = 2;
  std::size_t min_operators = 3;
};

// Keeps formulae with at least `min_variables` distinct variables and
// `min_operators` operator or function nodes.
std::vector<RawFormula> FilterFormulas(const std::vector<RawFormula>& formulas,
                                       const FilterRule& rule = {});

}  // namespace fem::ingest
