#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fem::text {

// Word-level trie for case-insensitive phrase lookup. Matching is greedy:
// scanning left to right, the longest phrase starting at the current token
// wins and the scan resumes after it, so matches never overlap.
class PhraseMatcher {
 public:
  struct Match {
    std::size_t phrase = 0;
    std::size_t first_token = 0;
    std::size_t token_count = 0;
  };

  // Returns the phrase index. Phrases equal after normalization share an
  // index; phrases without tokens are ignored and return npos.
  std::size_t Add(std::string_view phrase);

  std::vector<Match> FindAll(std::span<const std::string> tokens) const;
  std::vector<Match> FindAll(std::string_view text) const;

  const std::string& Phrase(std::size_t index) const { return phrases_.at(index); }
  std::size_t size() const { return phrases_.size(); }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  struct TrieNode {
    std::unordered_map<std::string, std::size_t> next;
    std::size_t phrase = npos;
  };

  std::vector<TrieNode> nodes_{1};
  std::vector<std::string> phrases_;
};

// Matched phrases in document order, as originally added.
std::vector<std::string> ExtractKeywords(std::string_view text, const PhraseMatcher& vocabulary);

}  // namespace fem::text
