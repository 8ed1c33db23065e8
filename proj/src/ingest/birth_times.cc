#include "fem/ingest/birth_times.h"

#include <algorithm>
#include <unordered_map>

#include "fem/common/errors.h"
#include "fem/common/jsonl.h"
#include "fem/kernels/text_kernels.h"
#include "fem/text/phrase_matcher.h"
#include "fem/text/tokenize.h"

namespace fem::ingest {
namespace {

int ParseYear(const jsonl::Json& record, std::size_t line) {
  auto it = record.find("year");
  if (it == record.end()) throw CorpusFormatError("missing field \"year\"", line);
  std::string digits;
  if (it->is_number_integer()) {
    digits = std::to_string(it->get<long long>());
  } else if (it->is_string()) {
    digits = it->get<std::string>();
  } else {
    throw CorpusFormatError("field \"year\" must be a four-digit year", line);
  }
  if (digits.size() != 4 || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
    throw CorpusFormatError("field \"year\" must be a four-digit year", line);
  }
  return std::stoi(digits);
}

}  // namespace

std::vector<DatedPaper> LoadPaperCorpus(const std::filesystem::path& path) {
  std::vector<DatedPaper> papers;
  jsonl::ForEachRecord(path, [&](const jsonl::Json& r, std::size_t line) {
    DatedPaper p;
    p.title = jsonl::OptionalString(r, "title");
    p.year = ParseYear(r, line);
    p.text = jsonl::OptionalString(r, "text");
    papers.push_back(std::move(p));
  });
  return papers;
}

BirthTimeIndex MineBirthTimes(const std::vector<RawFormula>& formulas,
                              const std::vector<WikiPage>& pages,
                              const std::vector<DatedPaper>& papers) {
  text::PhraseMatcher titles;
  std::unordered_map<std::string, std::size_t> phrase_of_page;
  for (const auto& page : pages) {
    const std::size_t phrase = titles.Add(page.title);
    if (phrase != text::PhraseMatcher::npos) phrase_of_page[page.id] = phrase;
  }

  std::vector<kernels::DatedDocument> docs;
  docs.reserve(papers.size());
  for (const auto& p : papers) docs.push_back({p.year, text::Tokenize(p.text)});
  const auto earliest = kernels::EarliestMatchYearParallel(titles, docs);

  BirthTimeIndex index;
  for (const auto& f : formulas) {
    std::optional<int> year;
    for (const auto& page : f.home_pages) {
      auto it = phrase_of_page.find(page);
      if (it == phrase_of_page.end() || !earliest[it->second]) continue;
      year = year ? std::min(*year, *earliest[it->second]) : *earliest[it->second];
    }
    index[f.id] = year;
  }
  return index;
}

}  // namespace fem::ingest
