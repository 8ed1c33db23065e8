#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fem::text {

// Lower-cased maximal runs of ASCII letters/digits. Bytes >= 0x80 are kept
// inside tokens so UTF-8 words survive intact.
std::vector<std::string> Tokenize(std::string_view text);

// Tokenize, then re-join with single spaces.
std::string NormalizePhrase(std::string_view text);

// Byte spans [begin, end) of each token in `text`, parallel to Tokenize.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};
std::vector<TokenSpan> TokenSpans(std::string_view text);

}  // namespace fem::text
