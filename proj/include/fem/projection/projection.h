#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fem/map/evolution_map.h"
#include "fem/text/language_model.h"
#include "fem/text/phrase_matcher.h"

namespace fem::projection {

using graph::VertexId;

struct QueryFormula {
  std::string latex;
  std::string context;
  std::optional<std::string> question;
  std::string paper_abstract;
  std::vector<std::string> paper_keywords;
  std::vector<std::string> weekly_topics;
};

inline constexpr std::size_t kFeatureCount = 12;
using FeatureVector = std::array<double, kFeatureCount>;

// Feature slots, in order.
enum Feature : std::size_t {
  kContext = 0,          // query context given candidate context
  kContextKeywords,      // summed over keywords found in the query context
  kQuestion,             // question text; 0 without a question
  kQuestionKeywords,     // summed over keywords found in the question
  kLayout,               // layout similarity, query terms as source
  kAbstract,             // paper abstract
  kPaperKeywords,        // summed over the paper's keywords
  kWeeklyTopics,         // summed over weekly topics
  kAnchorContext,        // anchor context given candidate context, over the neighbourhood
  kAnchorLayout,         // layout similarity, anchor terms as source
  kGenerality,           // candidate generality
  kDistance,             // hops from the anchor
};

inline constexpr std::size_t kDirectFeatures = 8;  // slots scored against every vertex
inline constexpr int kNeighbourhoodDepth = 3;

struct ProjectionScore {
  VertexId candidate = 0;
  FeatureVector features{};
  VertexId anchor = 0;
  int distance = 0;
  double score = 0.0;  // ranking score: weighted sum, or feature mean
};

struct ProjectionResult {
  VertexId anchor = 0;
  std::vector<ProjectionScore> candidates;  // best first
};

// Read-only scorer over one map. Safe for concurrent Project calls.
class ProjectionIndex {
 public:
  // `keyword_vocabulary`, when non-empty, is the phrase list used to find
  // keywords in query text. Otherwise the query's own paper keywords and
  // weekly topics serve as the vocabulary.
  explicit ProjectionIndex(const map::FemGraph& graph, double mu = 2000.0,
                           std::vector<std::string> keyword_vocabulary = {});

  const map::FemGraph& graph() const { return graph_; }

  // Scores every vertex on the direct features, takes the best uniform mean
  // as anchor (smaller id on ties), then scores the anchor's neighbourhood
  // within three hops. Candidates are ranked by `weights` when given (size
  // 12), else by the mean of all features; ties go to the smaller id.
  // top_n == 0 returns every candidate.
  //
  // Throws NoParseError on unparseable query LaTeX and EmptyMapError on an
  // empty map.
  ProjectionResult Project(const QueryFormula& query, std::size_t top_n = 0,
                           std::span<const double> weights = {}) const;

  // Direct features of every vertex (rows 0..7 of each vector).
  std::vector<FeatureVector> DirectFeatures(const QueryFormula& query) const;

  std::vector<std::string> Keywords(std::string_view text, const QueryFormula& query) const;

 private:
  std::vector<double> TextPosterior(std::string_view text) const;
  std::vector<double> PhraseSum(const std::vector<std::string>& phrases) const;

  const map::FemGraph& graph_;
  text::Collection contexts_;
  text::PhraseMatcher vocabulary_;
  bool has_vocabulary_ = false;
};

}  // namespace fem::projection
