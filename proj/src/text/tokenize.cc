#include "fem/text/tokenize.h"

namespace fem::text {
namespace {

bool IsWordByte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

char Lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

std::vector<TokenSpan> TokenSpans(std::string_view text) {
  std::vector<TokenSpan> spans;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !IsWordByte(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t begin = i;
    while (i < text.size() && IsWordByte(static_cast<unsigned char>(text[i]))) ++i;
    if (i > begin) spans.push_back({begin, i});
  }
  return spans;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for (const auto& span : TokenSpans(text)) {
    std::string token(text.substr(span.begin, span.end - span.begin));
    for (char& c : token) c = Lower(c);
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::string NormalizePhrase(std::string_view text) {
  std::string out;
  for (const auto& token : Tokenize(text)) {
    if (!out.empty()) out += ' ';
    out += token;
  }
  return out;
}

}  // namespace fem::text
