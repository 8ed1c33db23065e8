#include "fem/common/jsonl.h"

#include <fstream>

#include "fem/common/errors.h"

namespace fem::jsonl {

void ForEachRecord(const std::filesystem::path& path,
                   const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw ArtifactError("cannot open " + path.string());
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw CorpusFormatError(std::string("invalid JSON: ") + e.what(), line_number);
    }
    if (!record.is_object()) {
      throw CorpusFormatError("record is not a JSON object", line_number);
    }
    fn(record, line_number);
  }
}

std::vector<Json> ReadAll(const std::filesystem::path& path) {
  std::vector<Json> out;
  ForEachRecord(path, [&](const Json& r, std::size_t) { out.push_back(r); });
  return out;
}

void WriteAll(const std::filesystem::path& path, const std::vector<Json>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArtifactError("cannot write " + path.string());
  for (const auto& r : records) out << r.dump() << '\n';
  if (!out) throw ArtifactError("write failed for " + path.string());
}

std::string RequireId(const Json& record, const char* field, std::size_t line) {
  auto it = record.find(field);
  if (it == record.end()) {
    throw CorpusFormatError(std::string("missing field \"") + field + "\"", line);
  }
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw CorpusFormatError(std::string("field \"") + field + "\" must be a string or integer",
                          line);
}

std::string OptionalString(const Json& record, const char* field) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

std::vector<std::string> StringList(const Json& record, const char* field,
                                    std::size_t line) {
  std::vector<std::string> out;
  auto it = record.find(field);
  if (it == record.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw CorpusFormatError(std::string("field \"") + field + "\" must be an array", line);
  }
  for (const auto& v : *it) {
    if (v.is_string()) {
      out.push_back(v.get<std::string>());
    } else if (v.is_number_integer()) {
      out.push_back(std::to_string(v.get<long long>()));
    } else {
      throw CorpusFormatError(std::string("field \"") + field + "\" holds a non-id value",
                              line);
    }
  }
  return out;
}

}  // namespace fem::jsonl
