#include "fem/ingest/ingest_io.h"

#include <fstream>

#include "fem/common/errors.h"
#include "fem/common/jsonl.h"

namespace fem::ingest {

using jsonl::Json;

IngestOutput RunIngest(const Corpus& corpus, const std::vector<DatedPaper>* papers, const FilterRule& rule,
                       IngestSummary* summary) {
  IngestOutput out;
  out.pages = corpus.pages;
  const auto kept = FilterFormulas(corpus.formulas, rule);
  BirthTimeIndex births;
  if (papers != nullptr) births = MineBirthTimes(kept, corpus.pages, *papers);
  std::size_t dated = 0;
  for (const auto& f : kept) {
    std::optional<int> year;
    if (auto it = births.find(f.id); it != births.end()) year = it->second;
    dated += year.has_value();
    out.formulas.push_back({f, year});
  }
  if (summary != nullptr) {
    *summary = {corpus.pages.size(), corpus.math_spans, corpus.skipped_spans, corpus.duplicate_spans,
                corpus.formulas.size(), kept.size(), dated};
  }
  return out;
}

void WriteIngestOutput(const std::filesystem::path& dir, const IngestOutput& output,
                       const IngestSummary& summary) {
  std::filesystem::create_directories(dir);
  std::vector<Json> pages;
  for (const auto& p : output.pages) {
    pages.push_back({{"id", p.id}, {"title", p.title}, {"text", p.body}, {"links", p.outlinks}});
  }
  jsonl::WriteAll(dir / "pages.jsonl", pages);

  std::vector<Json> formulas;
  for (const auto& f : output.formulas) {
    Json r = {{"id", f.formula.id},
              {"latex", f.formula.latex},
              {"canonical", f.formula.canonical},
              {"pages", f.formula.home_pages},
              {"context", f.formula.context},
              {"variables", f.formula.variable_count},
              {"operators", f.formula.operator_count}};
    r["lt"] = f.birth_year ? Json(*f.birth_year) : Json(nullptr);
    formulas.push_back(std::move(r));
  }
  jsonl::WriteAll(dir / "formulas.jsonl", formulas);

  const Json s = {{"pages", summary.pages},
                  {"math_spans", summary.math_spans},
                  {"skipped_spans", summary.skipped_spans},
                  {"duplicate_spans", summary.duplicate_spans},
                  {"formulas_parsed", summary.formulas_parsed},
                  {"formulas_kept", summary.formulas_kept},
                  {"formulas_dated", summary.formulas_dated}};
  std::ofstream out(dir / "ingest.json", std::ios::trunc);
  out << s.dump(2) << '\n';
  if (!out) throw ArtifactError("cannot write " + (dir / "ingest.json").string());
}

IngestOutput ReadIngestOutput(const std::filesystem::path& dir) {
  IngestOutput out;
  jsonl::ForEachRecord(dir / "pages.jsonl", [&](const Json& r, std::size_t line) {
    WikiPage p;
    p.id = jsonl::RequireId(r, "id", line);
    p.title = jsonl::OptionalString(r, "title");
    p.body = jsonl::OptionalString(r, "text");
    p.outlinks = jsonl::StringList(r, "links", line);
    out.pages.push_back(std::move(p));
  });
  jsonl::ForEachRecord(dir / "formulas.jsonl", [&](const Json& r, std::size_t line) {
    IngestedFormula f;
    f.formula.id = jsonl::RequireId(r, "id", line);
    f.formula.latex = jsonl::OptionalString(r, "latex");
    f.formula.canonical = jsonl::OptionalString(r, "canonical");
    f.formula.home_pages = jsonl::StringList(r, "pages", line);
    f.formula.context = jsonl::OptionalString(r, "context");
    f.formula.variable_count = r.value("variables", std::size_t{0});
    f.formula.operator_count = r.value("operators", std::size_t{0});
    if (auto lt = r.find("lt"); lt != r.end() && lt->is_number_integer()) f.birth_year = lt->get<int>();
    out.formulas.push_back(std::move(f));
  });
  return out;
}

}  // namespace fem::ingest
