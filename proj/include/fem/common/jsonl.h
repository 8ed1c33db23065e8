#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace fem::jsonl {

using Json = nlohmann::json;

// Calls `fn(record, line_number)` for every non-blank line. Malformed JSON
// raises CorpusFormatError with the 1-based line number.
void ForEachRecord(const std::filesystem::path& path,
                   const std::function<void(const Json&, std::size_t)>& fn);

std::vector<Json> ReadAll(const std::filesystem::path& path);

void WriteAll(const std::filesystem::path& path, const std::vector<Json>& records);

// Returns a string field, or a number rendered as decimal. Throws
// CorpusFormatError when absent or of another type.
std::string RequireId(const Json& record, const char* field, std::size_t line);

std::string OptionalString(const Json& record, const char* field);

std::vector<std::string> StringList(const Json& record, const char* field,
                                    std::size_t line);

}  // namespace fem::jsonl
