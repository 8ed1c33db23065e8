#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fem::recsys {

struct Paper {
  std::string id;
  std::string title;
  std::string abstract;
  std::vector<std::string> keywords;
  std::vector<std::string> weekly_topics;
  std::vector<std::string> cites;
};

enum class OerType { kVideo, kSlides, kCode, kWiki };
inline constexpr std::size_t kOerTypeCount = 4;

std::string_view OerTypeName(OerType type);
OerType ParseOerType(std::string_view name);  // throws SchemaError

struct Oer {
  std::string id;
  OerType type = OerType::kWiki;
  std::string title;
  std::string description;
  std::vector<std::string> related;

  std::string Text() const { return title + "\n" + description; }
};

// JSON lines {"id","title","abstract","keywords","weekly_topics","cites"}.
std::vector<Paper> LoadPapers(const std::filesystem::path& path);
void WritePapers(const std::filesystem::path& path, const std::vector<Paper>& papers);

// JSON lines {"id","type","title","description","related"}.
// Throws EmptyCatalogError when the file holds no resource.
std::vector<Oer> LoadOers(const std::filesystem::path& path);
void WriteOers(const std::filesystem::path& path, const std::vector<Oer>& oers);

}  // namespace fem::recsys
