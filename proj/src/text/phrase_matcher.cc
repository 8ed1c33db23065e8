#include "fem/text/phrase_matcher.h"

#include "fem/text/tokenize.h"

namespace fem::text {

std::size_t PhraseMatcher::Add(std::string_view phrase) {
  const auto tokens = Tokenize(phrase);
  if (tokens.empty()) return npos;
  std::size_t node = 0;
  for (const auto& token : tokens) {
    auto it = nodes_[node].next.find(token);
    if (it == nodes_[node].next.end()) {
      nodes_.emplace_back();
      it = nodes_[node].next.emplace(token, nodes_.size() - 1).first;
    }
    node = it->second;
  }
  if (nodes_[node].phrase == npos) {
    nodes_[node].phrase = phrases_.size();
    phrases_.emplace_back(phrase);
  }
  return nodes_[node].phrase;
}

std::vector<PhraseMatcher::Match> PhraseMatcher::FindAll(std::span<const std::string> tokens) const {
  std::vector<Match> matches;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t node = 0;
    Match best{npos, i, 0};
    for (std::size_t j = i; j < tokens.size(); ++j) {
      auto it = nodes_[node].next.find(tokens[j]);
      if (it == nodes_[node].next.end()) break;
      node = it->second;
      if (nodes_[node].phrase != npos) best = {nodes_[node].phrase, i, j - i + 1};
    }
    if (best.phrase != npos) {
      matches.push_back(best);
      i += best.token_count;
    } else {
      ++i;
    }
  }
  return matches;
}

std::vector<PhraseMatcher::Match> PhraseMatcher::FindAll(std::string_view text) const {
  const auto tokens = Tokenize(text);
  return FindAll(std::span<const std::string>(tokens));
}

std::vector<std::string> ExtractKeywords(std::string_view text, const PhraseMatcher& vocabulary) {
  std::vector<std::string> out;
  for (const auto& m : vocabulary.FindAll(text)) out.push_back(vocabulary.Phrase(m.phrase));
  return out;
}

}  // namespace fem::text
