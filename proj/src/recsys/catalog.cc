#include "fem/recsys/catalog.h"

#include "fem/common/errors.h"
#include "fem/common/jsonl.h"

namespace fem::recsys {

using jsonl::Json;

std::string_view OerTypeName(OerType type) {
  switch (type) {
    case OerType::kVideo: return "video";
    case OerType::kSlides: return "slides";
    case OerType::kCode: return "code";
    case OerType::kWiki: return "wiki";
  }
  return "wiki";
}

OerType ParseOerType(std::string_view name) {
  if (name == "video") return OerType::kVideo;
  if (name == "slides") return OerType::kSlides;
  if (name == "code") return OerType::kCode;
  if (name == "wiki") return OerType::kWiki;
  throw SchemaError("unknown resource type \"" + std::string(name) + "\"");
}

std::vector<Paper> LoadPapers(const std::filesystem::path& path) {
  std::vector<Paper> papers;
  jsonl::ForEachRecord(path, [&](const Json& r, std::size_t line) {
    Paper p;
    p.id = jsonl::RequireId(r, "id", line);
    p.title = jsonl::OptionalString(r, "title");
    p.abstract = jsonl::OptionalString(r, "abstract");
    p.keywords = jsonl::StringList(r, "keywords", line);
    p.weekly_topics = jsonl::StringList(r, "weekly_topics", line);
    p.cites = jsonl::StringList(r, "cites", line);
    papers.push_back(std::move(p));
  });
  return papers;
}

void WritePapers(const std::filesystem::path& path, const std::vector<Paper>& papers) {
  std::vector<Json> out;
  for (const auto& p : papers) {
    out.push_back({{"id", p.id}, {"title", p.title}, {"abstract", p.abstract}, {"keywords", p.keywords},
                   {"weekly_topics", p.weekly_topics}, {"cites", p.cites}});
  }
  jsonl::WriteAll(path, out);
}

std::vector<Oer> LoadOers(const std::filesystem::path& path) {
  std::vector<Oer> oers;
  jsonl::ForEachRecord(path, [&](const Json& r, std::size_t line) {
    Oer o;
    o.id = jsonl::RequireId(r, "id", line);
    try {
      o.type = ParseOerType(jsonl::OptionalString(r, "type"));
    } catch (const SchemaError& e) {
      throw CorpusFormatError(e.what(), line);
    }
    o.title = jsonl::OptionalString(r, "title");
    o.description = jsonl::OptionalString(r, "description");
    o.related = jsonl::StringList(r, "related", line);
    oers.push_back(std::move(o));
  });
  if (oers.empty()) throw EmptyCatalogError("resource catalog " + path.string() + " is empty");
  return oers;
}

void WriteOers(const std::filesystem::path& path, const std::vector<Oer>& oers) {
  std::vector<Json> out;
  for (const auto& o : oers) {
    out.push_back({{"id", o.id}, {"type", OerTypeName(o.type)}, {"title", o.title},
                   {"description", o.description}, {"related", o.related}});
  }
  jsonl::WriteAll(path, out);
}

}  // namespace fem::recsys
